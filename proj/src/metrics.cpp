#include "nsc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nsc/mesh.hpp"

namespace nsc {

double jaccard(const VoxelGrid& a, const VoxelGrid& b) {
    if (a.dims != b.dims) throw ValidationError("jaccard: grid dims mismatch");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        bool va = a.values[i] != 0.0, vb = b.values[i] != 0.0;
        inter += va && vb;
        uni += va || vb;
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

DescriptorRow descriptors(const VoxelGrid& sdf, const Vec3& voxel_size_um) {
    sdf.validate();
    std::size_t interior = 0;
    for (double v : sdf.values) interior += v < 0.0;
    if (interior == 0) throw ValidationError("descriptors: empty shape");

    DescriptorRow row;
    row.sequence_id = -1;
    row.frame = sdf.time_index;
    row.volume = static_cast<double>(interior) * voxel_size_um[0] * voxel_size_um[1] *
                 voxel_size_um[2];

    // Normalized-domain mesh mapped to physical units per axis.
    TriangleMesh mesh = marching_cubes(sdf, 0.0);
    Vec3 h = sdf.spacing();
    Vec3 factors{voxel_size_um[0] / h[0], voxel_size_um[1] / h[1], voxel_size_um[2] / h[2]};
    row.surface_area = mesh_surface_area(scale_mesh(mesh, factors));

    // Sphericity from scale-normalized spacing (divide by the x extent):
    // uniform physical rescaling then cancels exactly instead of drifting
    // through cbrt rounding.
    const double s = voxel_size_um[0];
    Vec3 unit{1.0, voxel_size_um[1] / s, voxel_size_um[2] / s};
    const double vol_u = static_cast<double>(interior) * unit[0] * unit[1] * unit[2];
    Vec3 f_u{unit[0] / h[0], unit[1] / h[1], unit[2] / h[2]};
    const double area_u = mesh_surface_area(scale_mesh(mesh, f_u));
    row.sphericity = area_u / std::cbrt(36.0 * M_PI * vol_u * vol_u);
    return row;
}

KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw ValidationError("ks_two_sample: empty input");
    std::vector<double> a = xs, b = ys;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();

    // Sup of |F_a - F_b| by a merge scan over the pooled values.
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        double v = std::min(a[i], b[j]);
        while (i < n && a[i] <= v) ++i;
        while (j < m && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    d = std::max(d, std::abs(1.0 - static_cast<double>(j) / m));
    d = std::max(d, std::abs(static_cast<double>(i) / n - 1.0));

    KsResult r;
    r.statistic = d;
    r.n = n;
    r.m = m;
    const double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lambda < 1e-12) {
        r.p_value = 1.0;
        return r;
    }
    double p = 0.0, sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    r.p_value = std::clamp(2.0 * p, 0.0, 1.0);
    return r;
}

double quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    // Plotting positions i/(n+1), i = 1..n; linear interpolation, clamped.
    double r = p * static_cast<double>(n + 1);
    if (r <= 1.0) return sorted.front();
    if (r >= static_cast<double>(n)) return sorted.back();
    std::size_t lo = static_cast<std::size_t>(std::floor(r));
    double f = r - static_cast<double>(lo);
    return sorted[lo - 1] * (1.0 - f) + sorted[lo] * f;
}

std::vector<std::pair<double, double>> qq_pairs(const std::vector<double>& xs,
                                                const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw ValidationError("qq_pairs: empty input");
    std::vector<double> a = xs, b = ys;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t k = std::min(a.size(), b.size());
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        double p = static_cast<double>(i) / static_cast<double>(k + 1);
        pairs.emplace_back(quantile(a, p), quantile(b, p));
    }
    return pairs;
}

}  // namespace nsc
