#include "nsc/generate.hpp"

#include "nsc/rng.hpp"

namespace nsc {

Vec<double> sample_latent(int dim, double stddev, std::uint64_t seed) {
    if (dim < 1) throw ValidationError("sample_latent: dim must be >= 1");
    if (stddev < 0.0) throw ValidationError("sample_latent: stddev must be >= 0");
    Rng rng(seed);
    Vec<double> z(dim);
    for (int i = 0; i < dim; ++i) z(i) = rng.normal(0.0, stddev);
    return z;
}

Vec<double> perturb_latent(const Vec<double>& code, double stddev, std::uint64_t seed) {
    if (stddev < 0.0) throw ValidationError("perturb_latent: stddev must be >= 0");
    return code + sample_latent(static_cast<int>(code.size()), stddev, seed);
}

VoxelGrid evaluate_frame(const AutoDecoderParams<double>& params, const NetworkConfig& cfg,
                         const Vec<double>& z, std::array<int, 3> dims, double t) {
    VoxelGrid g;
    g.dims = dims;
    g.domain = Domain{};
    g.values.resize(g.size());
    const int nx = dims[0], ny = dims[1], nz = dims[2];
#pragma omp parallel for schedule(static)
    for (int zi = 0; zi < nz; ++zi) {
        // One batched forward per slab keeps the inner work in GEMMs.
        Mat<double> coords(4, static_cast<Eigen::Index>(nx) * ny);
        Eigen::Index col = 0;
        for (int yi = 0; yi < ny; ++yi)
            for (int xi = 0; xi < nx; ++xi, ++col) {
                Vec3 c = g.center(xi, yi, zi);
                coords(0, col) = c[0];
                coords(1, col) = c[1];
                coords(2, col) = c[2];
                coords(3, col) = t;
            }
        auto vals = forward_batch<double>(params, cfg, coords, z);
        col = 0;
        for (int yi = 0; yi < ny; ++yi)
            for (int xi = 0; xi < nx; ++xi, ++col) g.at(xi, yi, zi) = vals(col);
    }
    return g;
}

VoxelGrid evaluate_frame_serial(const AutoDecoderParams<double>& params,
                                const NetworkConfig& cfg, const Vec<double>& z,
                                std::array<int, 3> dims, double t) {
    VoxelGrid g;
    g.dims = dims;
    g.domain = Domain{};
    g.values.resize(g.size());
    for (int zi = 0; zi < dims[2]; ++zi)
        for (int yi = 0; yi < dims[1]; ++yi)
            for (int xi = 0; xi < dims[0]; ++xi)
                g.at(xi, yi, zi) = forward<double>(params, cfg, g.center(xi, yi, zi), t, z);
    return g;
}

std::vector<VoxelGrid> generate_sequence(const AutoDecoderParams<double>& params,
                                         const NetworkConfig& cfg, const Vec<double>& z,
                                         std::array<int, 3> dims, int frames, double t_lo,
                                         double t_hi) {
    if (frames < 1) throw ValidationError("generate_sequence: frames must be >= 1");
    for (int d : dims)
        if (d < 2) throw ValidationError("generate_sequence: dims must be >= 2 per axis");
    std::vector<VoxelGrid> out;
    out.reserve(static_cast<std::size_t>(frames));
    for (int k = 0; k < frames; ++k) {
        double t = frame_time(k, frames, t_lo, t_hi);
        out.push_back(evaluate_frame(params, cfg, z, dims, t));
        out.back().time_index = k;
    }
    return out;
}

std::vector<VoxelGrid> temporal_superresolve(const AutoDecoderParams<double>& params,
                                             const NetworkConfig& cfg, const Vec<double>& z,
                                             std::array<int, 3> dims, int out_frames,
                                             double t_lo, double t_hi) {
    if (out_frames < 2) throw ValidationError("temporal_superresolve: out_frames must be >= 2");
    return generate_sequence(params, cfg, z, dims, out_frames, t_lo, t_hi);
}

}  // namespace nsc
