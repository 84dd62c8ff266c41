#pragma once

#include <cstdint>
#include <vector>

#include "nsc/grid.hpp"
#include "nsc/network.hpp"

namespace nsc {

// Fresh latent code with i.i.d. N(0, stddev^2) entries.
Vec<double> sample_latent(int dim, double stddev, std::uint64_t seed);

// Existing code plus N(0, stddev^2) noise.
Vec<double> perturb_latent(const Vec<double>& code, double stddev, std::uint64_t seed);

// Dense evaluation of the trained model: one SDF grid per frame, frame k at
// t = linear map of k onto [t_lo, t_hi] (endpoints inclusive). Voxel grids
// fan out over slabs via OpenMP; the serial variant evaluates pointwise and
// exists as a reference for tests and the benchmark.
std::vector<VoxelGrid> generate_sequence(const AutoDecoderParams<double>& params,
                                         const NetworkConfig& cfg, const Vec<double>& z,
                                         std::array<int, 3> dims, int frames,
                                         double t_lo = -1.0, double t_hi = 1.0);
VoxelGrid evaluate_frame(const AutoDecoderParams<double>& params, const NetworkConfig& cfg,
                         const Vec<double>& z, std::array<int, 3> dims, double t);
VoxelGrid evaluate_frame_serial(const AutoDecoderParams<double>& params,
                                const NetworkConfig& cfg, const Vec<double>& z,
                                std::array<int, 3> dims, double t);

// Same model sampled at a denser set of timepoints; no retraining involved.
std::vector<VoxelGrid> temporal_superresolve(const AutoDecoderParams<double>& params,
                                             const NetworkConfig& cfg, const Vec<double>& z,
                                             std::array<int, 3> dims, int out_frames,
                                             double t_lo = -1.0, double t_hi = 1.0);

}  // namespace nsc
