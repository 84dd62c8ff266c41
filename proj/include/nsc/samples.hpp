#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsc/grid.hpp"

namespace nsc {

struct SdfSample {
    float x, y, z, t, sdf;
};

struct SdfSampleSet {
    std::uint32_t sequence_id = 0;
    std::vector<SdfSample> samples;
    // Set when the near-surface quota could not be met and the sampler fell
    // back to uniform draws. Not part of the file format.
    bool uniform_fallback = false;
};

// Draws `count` space-time SDF samples from a per-frame grid sequence.
// A near_fraction share is placed inside the |sdf| < band shell by rejection
// sampling (capped at 100x oversampling); the rest is uniform over the
// domain. SDF values come from trilinear interpolation, frame indices map
// linearly onto the time domain.
SdfSampleSet sample_sdf_points(const std::vector<VoxelGrid>& sdf_grids,
                               std::int64_t count, double near_fraction,
                               double band, std::uint64_t rng_seed,
                               std::uint32_t sequence_id = 0);

// Binary format: magic "SDF4", u32 version, u32 sequence_id, u64 count,
// then count * 5 little-endian float32 records (x, y, z, t, sdf).
void save_sample_set(const SdfSampleSet& set, const std::string& path);
SdfSampleSet load_sample_set(const std::string& path);

}  // namespace nsc
