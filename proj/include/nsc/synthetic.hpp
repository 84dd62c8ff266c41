#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsc/samples.hpp"

namespace nsc {

enum class SequenceKind { growth, mitosis, protrusions };

SequenceKind sequence_kind_from_string(const std::string& s);
std::string to_string(SequenceKind kind);

// Analytic desk-scale stand-in for an evolving cell: a growing sphere, a
// dividing pair of spheres, or a sphere sprouting capsule protrusions.
struct SequenceSpec {
    SequenceKind kind = SequenceKind::growth;
    int frames = 30;
    double initial_radius = 0.3;
    double growth_rate = 0.1;       // radius gain over the full time span
    double separation_rate = 0.0;   // mitosis: center offset gain along x
    int protrusion_count = 0;
    double protrusion_length = 0.0; // length gain over the full time span
    double protrusion_width = 0.05;
    double smoothing = 0.02;        // smooth-min k
    std::uint64_t rng_seed = 0;

    void validate() const;
};

using SpaceTimeField = std::function<double(double, double, double, double)>;

// Builds the continuous (x,y,z,t) -> sdf evaluator for a spec. Growth is an
// exact SDF; mitosis and protrusions use smooth-min unions whose values are
// approximate distances with the correct zero set. Throws "shape escapes
// domain" when the shape would touch the boundary of [-1,1]^3 at any time.
SpaceTimeField make_sequence(const SequenceSpec& spec);

// Voxelizes each spec at `frames` timepoints on a dims^3 grid and samples
// training points; sequence ids are consecutive from 0.
std::vector<SdfSampleSet> build_dataset(const std::vector<SequenceSpec>& specs,
                                        std::array<int, 3> grid_dims, int frames,
                                        std::int64_t sample_count, double near_fraction,
                                        double band, std::uint64_t seed);

}  // namespace nsc
