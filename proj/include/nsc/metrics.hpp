#pragma once

#include <vector>

#include "nsc/grid.hpp"

namespace nsc {

struct DescriptorRow {
    int sequence_id = -1;
    int frame = -1;
    double volume = 0.0;        // um^3
    double surface_area = 0.0;  // um^2
    double sphericity = 0.0;    // 1 for a perfect sphere, larger otherwise
};

struct KsResult {
    double statistic = 0.0;  // sup-distance of empirical CDFs
    double p_value = 1.0;
    std::size_t n = 0, m = 0;
};

// Intersection over union of two occupancy grids; 1 when both are empty.
double jaccard(const VoxelGrid& a, const VoxelGrid& b);

// Volume by voxel counting, surface area from the marching-cubes mesh
// scaled to physical units, sphericity as area over the area of the
// equal-volume sphere. voxel_size_um is the physical per-axis voxel extent.
DescriptorRow descriptors(const VoxelGrid& sdf, const Vec3& voxel_size_um);

// Two-sample KS test; p-value from the asymptotic Kolmogorov series with
// effective size nm/(n+m).
KsResult ks_two_sample(const std::vector<double>& xs, const std::vector<double>& ys);

// Matched empirical quantiles at k/(K+1), K = min(n, m), with linear
// interpolation; intended for external QQ plotting.
std::vector<std::pair<double, double>> qq_pairs(const std::vector<double>& xs,
                                                const std::vector<double>& ys);

// Empirical quantile of a sorted sample with plotting positions i/(n+1).
double quantile(const std::vector<double>& sorted, double p);

}  // namespace nsc
