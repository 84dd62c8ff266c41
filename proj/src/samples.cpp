#include "nsc/samples.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "nsc/rng.hpp"

namespace nsc {

namespace {
constexpr char kMagic[4] = {'S', 'D', 'F', '4'};
constexpr std::uint32_t kVersion = 1;
static_assert(sizeof(SdfSample) == 20, "SDF4 records are 5 packed float32");
}  // namespace

SdfSampleSet sample_sdf_points(const std::vector<VoxelGrid>& sdf_grids,
                               std::int64_t count, double near_fraction,
                               double band, std::uint64_t rng_seed,
                               std::uint32_t sequence_id) {
    if (count <= 0) throw ValidationError("sample_sdf_points: count must be positive");
    if (sdf_grids.empty()) throw ValidationError("sample_sdf_points: empty grid sequence");
    if (near_fraction < 0.0 || near_fraction > 1.0)
        throw ValidationError("sample_sdf_points: near_fraction outside [0,1]");
    if (band <= 0.0) throw ValidationError("sample_sdf_points: band must be positive");

    const int frames = static_cast<int>(sdf_grids.size());
    const Domain& dom = sdf_grids.front().domain;
    const std::int64_t near_count =
        static_cast<std::int64_t>(std::llround(near_fraction * static_cast<double>(count)));

    Rng rng(rng_seed);
    SdfSampleSet set;
    set.sequence_id = sequence_id;
    set.samples.reserve(static_cast<std::size_t>(count));

    auto draw_point = [&](const VoxelGrid& g, Vec3& p) {
        for (int a = 0; a < 3; ++a) p[a] = rng.uniform(dom.spatial_lo[a], dom.spatial_hi[a]);
        return trilinear(g, p);
    };

    // Pulls a uniform draw toward the surface along the interpolated field's
    // gradient, aiming at a random offset inside the band.
    auto pull_to_band = [&](const VoxelGrid& g, Vec3& p, double sdf) {
        Vec3 h = g.spacing();
        Vec3 grad;
        double norm2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            Vec3 lo = p, hi = p;
            lo[a] -= 0.5 * h[a];
            hi[a] += 0.5 * h[a];
            grad[a] = (trilinear(g, hi) - trilinear(g, lo)) / h[a];
            norm2 += grad[a] * grad[a];
        }
        if (norm2 < 1e-24) return sdf;
        const double target = rng.uniform(-band, band);
        const double step = (sdf - target) / norm2;
        for (int a = 0; a < 3; ++a) {
            p[a] -= step * grad[a];
            p[a] = std::min(std::max(p[a], dom.spatial_lo[a]), dom.spatial_hi[a]);
        }
        return trilinear(g, p);
    };

    for (std::int64_t i = 0; i < count; ++i) {
        const int frame = static_cast<int>(i % frames);  // covers every timepoint
        const VoxelGrid& g = sdf_grids[static_cast<std::size_t>(frame)];
        const double t = frame_time(frame, frames, dom.time_lo, dom.time_hi);
        Vec3 p;
        double sdf = draw_point(g, p);
        if (i < near_count) {
            for (int attempts = 0; std::abs(sdf) >= band && attempts < 100; ++attempts) {
                sdf = pull_to_band(g, p, sdf);
                if (std::abs(sdf) >= band) sdf = draw_point(g, p);
            }
            if (std::abs(sdf) >= band) set.uniform_fallback = true;
        }
        set.samples.push_back({static_cast<float>(p[0]), static_cast<float>(p[1]),
                               static_cast<float>(p[2]), static_cast<float>(t),
                               static_cast<float>(sdf)});
    }
    return set;
}

void save_sample_set(const SdfSampleSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kMagic, 4);
    std::uint32_t version = kVersion;
    std::uint64_t count = set.samples.size();
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&set.sequence_id), sizeof set.sequence_id);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(set.samples.data()),
              static_cast<std::streamsize>(count * sizeof(SdfSample)));
    if (!out) throw IoError("write failed: " + path);
}

SdfSampleSet load_sample_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[4];
    std::uint32_t version = 0;
    SdfSampleSet set;
    std::uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&set.sequence_id), sizeof set.sequence_id);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not an SDF4 file: " + path);
    if (version != kVersion) throw IoError("unsupported SDF4 version in " + path);
    set.samples.resize(count);
    in.read(reinterpret_cast<char*>(set.samples.data()),
            static_cast<std::streamsize>(count * sizeof(SdfSample)));
    if (!in) throw IoError("truncated SDF4 file: " + path);
    return set;
}

}  // namespace nsc
