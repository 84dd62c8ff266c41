#include "nsc/edt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nsc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_mask(const VoxelGrid& mask) {
    mask.validate();
    bool any0 = false, any1 = false;
    for (double v : mask.values) {
        if (v != 0.0 && v != 1.0) throw ValidationError("edt: mask values must be 0 or 1");
        (v == 0.0 ? any0 : any1) = true;
    }
    if (!any0 || !any1) throw ValidationError("edt: degenerate mask");
}

// 1D lower-envelope squared distance transform (Felzenszwalb-Huttenlocher)
// over samples at positions i*h. f is squared distance in/out.
void dt1d(std::vector<double>& f, double h, std::vector<int>& v,
          std::vector<double>& zb, std::vector<double>& out) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    zb[0] = -kInf;
    zb[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double xq = q * h;
        for (;;) {
            if (f[v[k]] == kInf) {
                // No finite parabola yet; this one starts the envelope.
                if (k == 0) {
                    v[0] = q;
                    zb[0] = -kInf;
                    zb[1] = kInf;
                    break;
                }
                --k;
                continue;
            }
            double xp = v[k] * h;
            double s = ((f[q] + xq * xq) - (f[v[k]] + xp * xp)) / (2 * xq - 2 * xp);
            if (s <= zb[k]) {
                --k;
            } else {
                ++k;
                v[k] = q;
                zb[k] = s;
                zb[k + 1] = kInf;
                break;
            }
        }
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        if (f[v[0]] == kInf) {
            out[q] = kInf;
            continue;
        }
        double xq = q * h;
        while (zb[k + 1] < xq) ++k;
        double d = xq - v[k] * h;
        out[q] = d * d + f[v[k]];
    }
    f = out;
}

// Squared distance from every voxel to the nearest seed voxel (center to
// center), anisotropic spacing. Seeds are voxels where seed(x,y,z) is true.
template <typename SeedFn>
std::vector<double> squared_edt(const VoxelGrid& g, SeedFn seed) {
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
    const Vec3 h = g.spacing();
    std::vector<double> d(g.size());
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                d[g.index(x, y, z)] = seed(x, y, z) ? 0.0 : kInf;

    // Pass along x.
#pragma omp parallel
    {
        std::vector<double> f(std::max({nx, ny, nz})), out(f.size());
        std::vector<int> v(f.size());
        std::vector<double> zb(f.size() + 1);

#pragma omp for schedule(static) collapse(2)
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) {
                f.assign(nx, 0.0);
                for (int x = 0; x < nx; ++x) f[x] = d[g.index(x, y, z)];
                f.resize(nx);
                dt1d(f, h[0], v, zb, out);
                for (int x = 0; x < nx; ++x) d[g.index(x, y, z)] = f[x];
            }

#pragma omp for schedule(static) collapse(2)
        for (int z = 0; z < nz; ++z)
            for (int x = 0; x < nx; ++x) {
                f.assign(ny, 0.0);
                for (int y = 0; y < ny; ++y) f[y] = d[g.index(x, y, z)];
                f.resize(ny);
                dt1d(f, h[1], v, zb, out);
                for (int y = 0; y < ny; ++y) d[g.index(x, y, z)] = f[y];
            }

#pragma omp for schedule(static) collapse(2)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                f.assign(nz, 0.0);
                for (int z = 0; z < nz; ++z) f[z] = d[g.index(x, y, z)];
                f.resize(nz);
                dt1d(f, h[2], v, zb, out);
                for (int z = 0; z < nz; ++z) d[g.index(x, y, z)] = f[z];
            }
    }
    return d;
}

double half_voxel(const VoxelGrid& g) {
    Vec3 h = g.spacing();
    return 0.5 * std::min({h[0], h[1], h[2]});
}

}  // namespace

VoxelGrid signed_distance_transform(const VoxelGrid& mask) {
    check_mask(mask);
    auto to_fg = squared_edt(mask, [&](int x, int y, int z) { return mask.at(x, y, z) == 1.0; });
    auto to_bg = squared_edt(mask, [&](int x, int y, int z) { return mask.at(x, y, z) == 0.0; });
    VoxelGrid sdf = mask;
    const double offset = half_voxel(mask);
    for (std::size_t i = 0; i < sdf.values.size(); ++i) {
        if (mask.values[i] == 1.0)
            sdf.values[i] = -(std::sqrt(to_bg[i]) - offset);
        else
            sdf.values[i] = std::sqrt(to_fg[i]) - offset;
    }
    return sdf;
}

VoxelGrid signed_distance_transform_reference(const VoxelGrid& mask) {
    check_mask(mask);
    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    const Vec3 h = mask.spacing();
    VoxelGrid sdf = mask;
    const double offset = half_voxel(mask);
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                const double phase = mask.at(x, y, z);
                double best = kInf;
                for (int z2 = 0; z2 < nz; ++z2)
                    for (int y2 = 0; y2 < ny; ++y2)
                        for (int x2 = 0; x2 < nx; ++x2) {
                            if (mask.at(x2, y2, z2) == phase) continue;
                            double dx = (x - x2) * h[0];
                            double dy = (y - y2) * h[1];
                            double dz = (z - z2) * h[2];
                            best = std::min(best, dx * dx + dy * dy + dz * dz);
                        }
                double d = std::sqrt(best) - offset;
                sdf.at(x, y, z) = (phase == 1.0) ? -d : d;
            }
    return sdf;
}

}  // namespace nsc
