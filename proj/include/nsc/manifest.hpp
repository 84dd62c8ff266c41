#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nsc {

// Reproducibility record written next to every subcommand's outputs: the
// config snapshot, seeds, version, content digests of inputs/outputs, and
// wall-clock timings.
class RunManifest {
  public:
    RunManifest(std::string subcommand, std::string config_snapshot, std::uint64_t root_seed);

    void add_input(const std::string& path);
    void add_output(const std::string& path);
    void add_timing(const std::string& label, double seconds);
    void write(const std::string& path) const;

  private:
    struct Entry {
        std::string path;
        std::string digest;
    };
    std::string subcommand_;
    std::string config_snapshot_;
    std::uint64_t root_seed_;
    std::vector<Entry> inputs_, outputs_;
    std::vector<std::pair<std::string, double>> timings_;
};

std::string version_string();

}  // namespace nsc
