#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nsc/common.hpp"

namespace nsc {

// Normalized space-time domain; defaults give [-1,1]^3 x [-1,1].
struct Domain {
    Vec3 spatial_lo{-1.0, -1.0, -1.0};
    Vec3 spatial_hi{1.0, 1.0, 1.0};
    double time_lo = -1.0;
    double time_hi = 1.0;

    void validate() const;
};

// Dense scalar field on a regular grid. Values are either SDF samples in
// normalized domain units or 0/1 occupancy. Storage is x-fastest.
struct VoxelGrid {
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> values;
    Domain domain;
    int time_index = 0;
    // Physical spacing carried as metadata; used only by descriptor code.
    std::array<double, 3> voxel_size_nm{1.0, 1.0, 1.0};

    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * z);
    }
    double at(int x, int y, int z) const { return values[index(x, y, z)]; }
    double& at(int x, int y, int z) { return values[index(x, y, z)]; }

    // Voxel center of cell (i,j,k): lo + (i+0.5) * (hi-lo)/dims.
    Vec3 center(int x, int y, int z) const;
    // Per-axis voxel extent in normalized units.
    Vec3 spacing() const;

    void validate() const;
};

using ScalarField = std::function<double(double, double, double)>;

// Evaluates `field` at every voxel center. The OpenMP variant fans out over
// z-slabs; both produce bit-identical grids (no cross-voxel reductions).
VoxelGrid voxelize_sdf(const ScalarField& field, std::array<int, 3> dims,
                       const Domain& domain);
VoxelGrid voxelize_sdf_serial(const ScalarField& field, std::array<int, 3> dims,
                              const Domain& domain);

// Trilinear interpolation at a normalized-domain point, clamped to the grid.
double trilinear(const VoxelGrid& grid, const Vec3& p);

// Occupancy by strict sdf < 0; boundary voxels (exactly 0) count as outside.
VoxelGrid occupancy_from_sdf(const VoxelGrid& sdf);

// Linear frame index -> time map, endpoints inclusive. frames == 1 maps to lo.
double frame_time(int frame, int frames, double t_lo = -1.0, double t_hi = 1.0);

}  // namespace nsc
