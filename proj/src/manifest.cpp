#include "nsc/manifest.hpp"

#include <fstream>
#include <json.hpp>

#include "nsc/common.hpp"
#include "nsc/sha256.hpp"

namespace nsc {

std::string version_string() { return "nsc-0.1.0"; }

RunManifest::RunManifest(std::string subcommand, std::string config_snapshot,
                         std::uint64_t root_seed)
    : subcommand_(std::move(subcommand)),
      config_snapshot_(std::move(config_snapshot)),
      root_seed_(root_seed) {}

void RunManifest::add_input(const std::string& path) {
    inputs_.push_back({path, sha256_file(path)});
}

void RunManifest::add_output(const std::string& path) {
    outputs_.push_back({path, sha256_file(path)});
}

void RunManifest::add_timing(const std::string& label, double seconds) {
    timings_.emplace_back(label, seconds);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["version"] = version_string();
    j["subcommand"] = subcommand_;
    j["root_seed"] = root_seed_;
    j["config"] = nlohmann::json::parse(config_snapshot_, nullptr, false);
    if (j["config"].is_discarded()) j["config"] = config_snapshot_;
    auto entries = [](const std::vector<Entry>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : v) arr.push_back({{"path", e.path}, {"sha256", e.digest}});
        return arr;
    };
    j["inputs"] = entries(inputs_);
    j["outputs"] = entries(outputs_);
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [label, secs] : timings_) t[label] = secs;
    j["timings_sec"] = t;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace nsc
