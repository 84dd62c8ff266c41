#include "nsc/synthetic.hpp"

#include <cmath>

#include "nsc/rng.hpp"
#include "nsc/shapes.hpp"

namespace nsc {

SequenceKind sequence_kind_from_string(const std::string& s) {
    if (s == "growth") return SequenceKind::growth;
    if (s == "mitosis") return SequenceKind::mitosis;
    if (s == "protrusions") return SequenceKind::protrusions;
    throw ValidationError("unknown sequence kind: " + s);
}

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::growth: return "growth";
        case SequenceKind::mitosis: return "mitosis";
        case SequenceKind::protrusions: return "protrusions";
    }
    return "?";
}

void SequenceSpec::validate() const {
    if (frames < 2) throw ValidationError("sequence spec: frames must be >= 2");
    if (initial_radius <= 0.0) throw ValidationError("sequence spec: radius must be positive");
    if (protrusion_count < 0) throw ValidationError("sequence spec: protrusion count < 0");
    if (smoothing <= 0.0) throw ValidationError("sequence spec: smoothing must be positive");
}

namespace {

// Fraction of the time span elapsed at t in [-1,1].
inline double progress(double t) { return (t + 1.0) * 0.5; }

void check_inside_unit_box(double reach) {
    if (reach >= 1.0) throw ValidationError("sequence spec: shape escapes domain");
}

}  // namespace

SpaceTimeField make_sequence(const SequenceSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case SequenceKind::growth: {
            const double r0 = spec.initial_radius, g = spec.growth_rate;
            check_inside_unit_box(std::max(r0, r0 + g));
            return [r0, g](double x, double y, double z, double t) {
                return sphere_sdf({0, 0, 0}, r0 + g * progress(t), {x, y, z});
            };
        }
        case SequenceKind::mitosis: {
            const double r = spec.initial_radius, s = spec.separation_rate;
            const double k = spec.smoothing;
            check_inside_unit_box(r + std::max(0.0, s));
            return [r, s, k](double x, double y, double z, double t) {
                const double off = s * progress(t);
                double a = sphere_sdf({-off, 0, 0}, r, {x, y, z});
                double b = sphere_sdf({+off, 0, 0}, r, {x, y, z});
                return smooth_min(a, b, k);
            };
        }
        case SequenceKind::protrusions: {
            const double r0 = spec.initial_radius, g = spec.growth_rate;
            const double len = spec.protrusion_length, w = spec.protrusion_width;
            const double k = spec.smoothing;
            const double r_max = std::max(r0, r0 + g);
            check_inside_unit_box(r_max + len + w);

            // Deterministic anchor directions on the sphere.
            Rng rng(spec.rng_seed);
            std::vector<Vec3> dirs;
            for (int i = 0; i < spec.protrusion_count; ++i) {
                double u = rng.uniform(-1.0, 1.0);
                double phi = rng.uniform(0.0, 2.0 * M_PI);
                double q = std::sqrt(std::max(0.0, 1.0 - u * u));
                dirs.push_back({q * std::cos(phi), q * std::sin(phi), u});
            }
            return [r0, g, len, w, k, dirs](double x, double y, double z, double t) {
                const double p = progress(t);
                const double r = r0 + g * p;
                const Vec3 pt{x, y, z};
                double d = sphere_sdf({0, 0, 0}, r, pt);
                for (const Vec3& dir : dirs) {
                    Vec3 a{dir[0] * r * 0.5, dir[1] * r * 0.5, dir[2] * r * 0.5};
                    double reach = r + len * p;
                    Vec3 b{dir[0] * reach, dir[1] * reach, dir[2] * reach};
                    d = smooth_min(d, capsule_sdf(a, b, w, pt), k);
                }
                return d;
            };
        }
    }
    throw ValidationError("unreachable sequence kind");
}

std::vector<SdfSampleSet> build_dataset(const std::vector<SequenceSpec>& specs,
                                        std::array<int, 3> grid_dims, int frames,
                                        std::int64_t sample_count, double near_fraction,
                                        double band, std::uint64_t seed) {
    if (specs.empty()) throw ValidationError("build_dataset: no sequence specs");
    std::vector<SdfSampleSet> out;
    out.reserve(specs.size());
    const Domain dom;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        SpaceTimeField field = make_sequence(specs[i]);
        std::vector<VoxelGrid> grids;
        grids.reserve(static_cast<std::size_t>(frames));
        for (int f = 0; f < frames; ++f) {
            const double t = frame_time(f, frames, dom.time_lo, dom.time_hi);
            grids.push_back(voxelize_sdf(
                [&field, t](double x, double y, double z) { return field(x, y, z, t); },
                grid_dims, dom));
            grids.back().time_index = f;
        }
        out.push_back(sample_sdf_points(grids, sample_count, near_fraction, band,
                                        derive_seed(seed, i),
                                        static_cast<std::uint32_t>(i)));
    }
    return out;
}

}  // namespace nsc
