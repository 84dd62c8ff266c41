#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsc {

using Vec3 = std::array<double, 3>;

// Exit-code oriented error taxonomy. The CLI maps these to process exit codes.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64; used to derive per-subsystem seeds from one root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for subsystem #counter under a root seed. Counter assignments are part
// of the reproducibility contract and listed in the README.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter) {
    std::uint64_t s = root;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= counter; ++i) out = splitmix64(s);
    return out;
}

}  // namespace nsc
