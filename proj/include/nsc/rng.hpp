#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nsc/common.hpp"

namespace nsc {

// Deterministic RNG. Normal draws use Box-Muller instead of
// std::normal_distribution so the byte stream does not depend on the
// standard library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0,1)
        return std::generate_canonical<double, 53>(engine_);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t integer(std::uint64_t n) {  // [0,n), unbiased
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (!has_spare_) {
            double u1 = uniform();
            double u2 = uniform();
            while (u1 <= 0.0) u1 = uniform();
            double r = std::sqrt(-2.0 * std::log(u1));
            double phi = 2.0 * M_PI * u2;
            spare_ = r * std::sin(phi);
            has_spare_ = true;
            return mean + stddev * r * std::cos(phi);
        }
        has_spare_ = false;
        return mean + stddev * spare_;
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nsc
