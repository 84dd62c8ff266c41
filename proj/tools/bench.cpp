// Micro-benchmark comparing the OpenMP kernels against their serial
// reference implementations: dense network evaluation, voxelization, and
// the exact EDT vs the brute-force scan.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "nsc/edt.hpp"
#include "nsc/generate.hpp"
#include "nsc/network.hpp"
#include "nsc/shapes.hpp"
#include "nsc/threads.hpp"

using namespace nsc;
using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    set_thread_count(threads);
    std::printf("threads: %d\n", thread_count());

    {
        NetworkConfig cfg;
        cfg.hidden_layers = 7;
        cfg.hidden_width = 96;
        cfg.latent_dim = 64;
        cfg.latent_injection_layers = {1, 5};
        auto params = init_params<double>(cfg, 1, 1);
        Vec<double> z = params.latent_codes.row(0).transpose();
        const std::array<int, 3> dims{48, 48, 48};

        auto t0 = Clock::now();
        auto serial = evaluate_frame_serial(params, cfg, z, dims, 0.0);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = evaluate_frame(params, cfg, z, dims, 0.0);
        double tp = seconds_since(t0);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < serial.values.size(); ++i)
            max_diff = std::max(max_diff, std::abs(serial.values[i] - parallel.values[i]));
        std::printf("network eval %dx%dx%d: serial %.3fs, batched+omp %.3fs (%.1fx), max diff %.2e\n",
                    dims[0], dims[1], dims[2], ts, tp, ts / tp, max_diff);
    }

    {
        const std::array<int, 3> dims{128, 128, 128};
        auto field = [](double x, double y, double z) {
            return sphere_sdf({0, 0, 0}, 0.6, {x, y, z});
        };
        auto t0 = Clock::now();
        auto serial = voxelize_sdf_serial(field, dims, Domain{});
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = voxelize_sdf(field, dims, Domain{});
        double tp = seconds_since(t0);
        bool identical = serial.values == parallel.values;
        std::printf("voxelize %d^3: serial %.3fs, omp %.3fs (%.1fx), bit-identical: %s\n",
                    dims[0], ts, tp, ts / tp, identical ? "yes" : "NO");
    }

    {
        const std::array<int, 3> dims{16, 16, 16};
        VoxelGrid mask;
        mask.dims = dims;
        mask.values.resize(mask.size());
        for (int z = 0; z < dims[2]; ++z)
            for (int y = 0; y < dims[1]; ++y)
                for (int x = 0; x < dims[0]; ++x) {
                    Vec3 c = mask.center(x, y, z);
                    mask.at(x, y, z) = sphere_sdf({0, 0, 0}, 0.5, c) < 0 ? 1.0 : 0.0;
                }
        auto t0 = Clock::now();
        auto brute = signed_distance_transform_reference(mask);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto fast = signed_distance_transform(mask);
        double tp = seconds_since(t0);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < brute.values.size(); ++i)
            max_diff = std::max(max_diff, std::abs(brute.values[i] - fast.values[i]));
        std::printf("edt %d^3: brute force %.3fs, separable+omp %.3fs (%.1fx), max diff %.2e\n",
                    dims[0], ts, tp, ts / tp, max_diff);
    }
    return 0;
}
