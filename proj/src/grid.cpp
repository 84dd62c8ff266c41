#include "nsc/grid.hpp"

#include <algorithm>
#include <cmath>

namespace nsc {

void Domain::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (!(spatial_lo[a] < spatial_hi[a]))
            throw ValidationError("domain: spatial lo must be < hi");
    }
    if (!(time_lo <= time_hi)) throw ValidationError("domain: time lo must be <= hi");
}

Vec3 VoxelGrid::center(int x, int y, int z) const {
    Vec3 c;
    const int idx[3] = {x, y, z};
    for (int a = 0; a < 3; ++a) {
        double extent = domain.spatial_hi[a] - domain.spatial_lo[a];
        c[a] = domain.spatial_lo[a] + (idx[a] + 0.5) * extent / dims[a];
    }
    return c;
}

Vec3 VoxelGrid::spacing() const {
    Vec3 s;
    for (int a = 0; a < 3; ++a)
        s[a] = (domain.spatial_hi[a] - domain.spatial_lo[a]) / dims[a];
    return s;
}

void VoxelGrid::validate() const {
    domain.validate();
    for (int a = 0; a < 3; ++a)
        if (dims[a] <= 0) throw ValidationError("grid: dims must be positive");
    if (values.size() != size())
        throw ValidationError("grid: value count does not match dims");
}

static VoxelGrid make_grid(std::array<int, 3> dims, const Domain& domain) {
    VoxelGrid g;
    g.dims = dims;
    g.domain = domain;
    g.values.resize(g.size());
    return g;
}

VoxelGrid voxelize_sdf_serial(const ScalarField& field, std::array<int, 3> dims,
                              const Domain& domain) {
    VoxelGrid g = make_grid(dims, domain);
    for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y)
            for (int x = 0; x < dims[0]; ++x) {
                Vec3 c = g.center(x, y, z);
                g.at(x, y, z) = field(c[0], c[1], c[2]);
            }
    return g;
}

VoxelGrid voxelize_sdf(const ScalarField& field, std::array<int, 3> dims,
                       const Domain& domain) {
    VoxelGrid g = make_grid(dims, domain);
#pragma omp parallel for schedule(static)
    for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y)
            for (int x = 0; x < dims[0]; ++x) {
                Vec3 c = g.center(x, y, z);
                g.at(x, y, z) = field(c[0], c[1], c[2]);
            }
    return g;
}

double trilinear(const VoxelGrid& grid, const Vec3& p) {
    // Continuous voxel coordinates with centers at i+0.5.
    double f[3];
    int i0[3], i1[3];
    for (int a = 0; a < 3; ++a) {
        double extent = grid.domain.spatial_hi[a] - grid.domain.spatial_lo[a];
        double u = (p[a] - grid.domain.spatial_lo[a]) / extent * grid.dims[a] - 0.5;
        u = std::clamp(u, 0.0, static_cast<double>(grid.dims[a] - 1));
        i0[a] = static_cast<int>(std::floor(u));
        i0[a] = std::min(i0[a], grid.dims[a] - 1);
        i1[a] = std::min(i0[a] + 1, grid.dims[a] - 1);
        f[a] = u - i0[a];
    }
    double c00 = grid.at(i0[0], i0[1], i0[2]) * (1 - f[0]) + grid.at(i1[0], i0[1], i0[2]) * f[0];
    double c10 = grid.at(i0[0], i1[1], i0[2]) * (1 - f[0]) + grid.at(i1[0], i1[1], i0[2]) * f[0];
    double c01 = grid.at(i0[0], i0[1], i1[2]) * (1 - f[0]) + grid.at(i1[0], i0[1], i1[2]) * f[0];
    double c11 = grid.at(i0[0], i1[1], i1[2]) * (1 - f[0]) + grid.at(i1[0], i1[1], i1[2]) * f[0];
    double c0 = c00 * (1 - f[1]) + c10 * f[1];
    double c1 = c01 * (1 - f[1]) + c11 * f[1];
    return c0 * (1 - f[2]) + c1 * f[2];
}

VoxelGrid occupancy_from_sdf(const VoxelGrid& sdf) {
    VoxelGrid occ = sdf;
    for (double& v : occ.values) v = (v < 0.0) ? 1.0 : 0.0;
    return occ;
}

double frame_time(int frame, int frames, double t_lo, double t_hi) {
    if (frames <= 1) return t_lo;
    return t_lo + (t_hi - t_lo) * static_cast<double>(frame) / (frames - 1);
}

}  // namespace nsc
