#pragma once

#include <string>

#include "nsc/grid.hpp"

namespace nsc {

// Voxel grid file pair: JSON header at `path` (keys: dims, voxel_size_nm,
// time_index, dtype "u8"|"f32", order "x-fastest", payload) plus the raw
// little-endian payload in the sibling file named by the header. u8 grids
// are occupancy, f32 grids are SDF values in normalized units.
void save_grid(const VoxelGrid& grid, const std::string& path, const std::string& dtype);
VoxelGrid load_grid(const std::string& path);

}  // namespace nsc
