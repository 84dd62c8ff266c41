#include <doctest.h>

#include <cmath>

#include "nsc/generate.hpp"

using namespace nsc;

namespace {

NetworkConfig probe_net() {
    NetworkConfig cfg;
    cfg.hidden_layers = 3;
    cfg.hidden_width = 12;
    cfg.latent_dim = 6;
    cfg.latent_injection_layers = {1, 3};
    return cfg;
}

}  // namespace

TEST_CASE("sample_latent: zero stddev is the zero code, draws are deterministic") {
    auto z = sample_latent(16, 0.0, 4);
    CHECK(z.size() == 16);
    CHECK(z.isZero());
    auto a = sample_latent(16, 0.1, 4);
    auto b = sample_latent(16, 0.1, 4);
    CHECK(a == b);
    CHECK(a != sample_latent(16, 0.1, 5));
}

TEST_CASE("sample_latent: empirical stddev of many draws matches") {
    const int dim = 100, draws = 1000;
    double sum_sq = 0.0;
    for (int d = 0; d < draws; ++d)
        sum_sq += sample_latent(dim, 0.1, static_cast<std::uint64_t>(d)).squaredNorm();
    double stddev = std::sqrt(sum_sq / (dim * draws));
    CHECK(stddev == doctest::Approx(0.1).epsilon(0.03));
}

TEST_CASE("perturb_latent: expected squared displacement is dim * sigma^2") {
    Vec<double> base = Vec<double>::Constant(64, 0.7);
    double acc = 0.0;
    const int draws = 2000;
    for (int d = 0; d < draws; ++d)
        acc += (perturb_latent(base, 0.05, static_cast<std::uint64_t>(d)) - base).squaredNorm();
    CHECK(acc / draws == doctest::Approx(64 * 0.05 * 0.05).epsilon(0.05));
    CHECK(perturb_latent(base, 0.0, 1) == base);
}

TEST_CASE("generate_sequence: frame count, metadata, and frames=1 midpoint") {
    auto cfg = probe_net();
    auto p = init_params<double>(cfg, 1, 8);
    Vec<double> z = p.latent_codes.row(0).transpose();
    auto frames = generate_sequence(p, cfg, z, {12, 12, 12}, 4);
    REQUIRE(frames.size() == 4);
    for (int f = 0; f < 4; ++f) {
        CHECK(frames[static_cast<std::size_t>(f)].time_index == f);
        CHECK(frames[static_cast<std::size_t>(f)].dims == std::array<int, 3>{12, 12, 12});
    }
    // A single frame over a collapsed span sits exactly at that timepoint.
    auto single = generate_sequence(p, cfg, z, {8, 8, 8}, 1, 0.25, 0.25);
    auto direct = evaluate_frame(p, cfg, z, {8, 8, 8}, 0.25);
    CHECK(single[0].values == direct.values);
    CHECK_THROWS_AS(generate_sequence(p, cfg, z, {8, 8, 8}, 0), ValidationError);
    CHECK_THROWS_AS(generate_sequence(p, cfg, z, {1, 8, 8}, 2), ValidationError);
}

TEST_CASE("evaluate_frame: parallel and serial paths agree to tight tolerance") {
    auto cfg = probe_net();
    auto p = init_params<double>(cfg, 1, 15);
    Vec<double> z = p.latent_codes.row(0).transpose();
    auto fast = evaluate_frame(p, cfg, z, {16, 16, 16}, 0.3);
    auto ref = evaluate_frame_serial(p, cfg, z, {16, 16, 16}, 0.3);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
        CHECK(std::isfinite(fast.values[i]));
        max_diff = std::max(max_diff, std::abs(fast.values[i] - ref.values[i]));
    }
    CHECK(max_diff <= 1e-12);
    auto again = evaluate_frame(p, cfg, z, {16, 16, 16}, 0.3);
    CHECK(fast.values == again.values);
}

TEST_CASE("temporal_superresolve: shared timepoints reproduce the coarse frames") {
    auto cfg = probe_net();
    auto p = init_params<double>(cfg, 1, 23);
    Vec<double> z = p.latent_codes.row(0).transpose();
    auto coarse = generate_sequence(p, cfg, z, {10, 10, 10}, 3);
    auto fine = temporal_superresolve(p, cfg, z, {10, 10, 10}, 5);
    // frames 0, 2, 4 of the 5-frame grid land on the 3-frame timepoints
    CHECK(fine[0].values == coarse[0].values);
    CHECK(fine[2].values == coarse[1].values);
    CHECK(fine[4].values == coarse[2].values);
    CHECK_THROWS_AS(temporal_superresolve(p, cfg, z, {10, 10, 10}, 1), ValidationError);
}
