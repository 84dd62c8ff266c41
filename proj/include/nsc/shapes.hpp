#pragma once

#include <cmath>

#include "nsc/common.hpp"

namespace nsc {

// Exact sphere SDF: ||p - center|| - radius.
inline double sphere_sdf(const Vec3& center, double radius, const Vec3& p) {
    double dx = p[0] - center[0], dy = p[1] - center[1], dz = p[2] - center[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz) - radius;
}

// Capsule SDF: distance to the segment [a,b] minus radius.
inline double capsule_sdf(const Vec3& a, const Vec3& b, double radius, const Vec3& p) {
    double abx = b[0] - a[0], aby = b[1] - a[1], abz = b[2] - a[2];
    double apx = p[0] - a[0], apy = p[1] - a[1], apz = p[2] - a[2];
    double ab2 = abx * abx + aby * aby + abz * abz;
    double h = ab2 > 0.0 ? (apx * abx + apy * aby + apz * abz) / ab2 : 0.0;
    h = std::fmin(std::fmax(h, 0.0), 1.0);
    double dx = apx - h * abx, dy = apy - h * aby, dz = apz - h * abz;
    return std::sqrt(dx * dx + dy * dy + dz * dz) - radius;
}

// Log-sum-exp smooth minimum; equals hard min as k -> 0 and is bounded by
// [min - k*ln(n), min].
inline double smooth_min(double a, double b, double k) {
    double m = std::fmin(a, b);
    return m - k * std::log(std::exp(-(a - m) / k) + std::exp(-(b - m) / k));
}

}  // namespace nsc
