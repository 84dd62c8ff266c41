#pragma once

#include "nsc/grid.hpp"

namespace nsc {

// Signed Euclidean distance transform of a binary occupancy grid.
//
// Convention: the surface sits on voxel faces between inside and outside
// voxels. Each voxel stores the center-to-center Euclidean distance to the
// nearest opposite-phase voxel, reduced by half the smallest voxel extent,
// negative inside the mask. Distances are in normalized domain units.
//
// Exact metric via per-axis squared distance transforms; the reference
// variant is the O(n^2) nearest-opposite-voxel scan used as a test oracle
// and benchmark baseline.
VoxelGrid signed_distance_transform(const VoxelGrid& mask);
VoxelGrid signed_distance_transform_reference(const VoxelGrid& mask);

}  // namespace nsc
