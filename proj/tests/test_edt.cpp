#include <doctest.h>

#include <cmath>

#include "nsc/edt.hpp"
#include "nsc/rng.hpp"

using namespace nsc;

namespace {

VoxelGrid make_mask(std::array<int, 3> dims) {
    VoxelGrid m;
    m.dims = dims;
    m.values.assign(m.size(), 0.0);
    return m;
}

}  // namespace

TEST_CASE("edt: single center voxel follows the half-voxel face convention") {
    auto m = make_mask({3, 3, 3});
    m.at(1, 1, 1) = 1.0;
    auto sdf = signed_distance_transform(m);
    const double h = m.spacing()[0];  // 2/3
    CHECK(sdf.at(1, 1, 1) == doctest::Approx(-0.5 * h).epsilon(1e-12));
    CHECK(sdf.at(0, 1, 1) == doctest::Approx(0.5 * h).epsilon(1e-12));
    CHECK(sdf.at(2, 1, 1) == doctest::Approx(0.5 * h).epsilon(1e-12));
    CHECK(sdf.at(1, 0, 1) == doctest::Approx(0.5 * h).epsilon(1e-12));
}

TEST_CASE("edt: inverted corner voxel has opposite sign to the interior") {
    auto m = make_mask({4, 4, 4});
    for (double& v : m.values) v = 1.0;
    m.at(0, 0, 0) = 0.0;
    auto sdf = signed_distance_transform(m);
    CHECK(sdf.at(0, 0, 0) > 0.0);
    for (int z = 0; z < 4; ++z)
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                if (!(x == 0 && y == 0 && z == 0)) CHECK(sdf.at(x, y, z) < 0.0);
}

TEST_CASE("edt: degenerate masks are rejected") {
    auto empty = make_mask({3, 3, 3});
    CHECK_THROWS_WITH_AS(signed_distance_transform(empty), "edt: degenerate mask",
                         ValidationError);
    for (double& v : empty.values) v = 1.0;
    CHECK_THROWS_AS(signed_distance_transform(empty), ValidationError);
}

TEST_CASE("edt: matches the brute-force oracle on 100 random masks up to 16^3") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<int, 3> dims{2 + static_cast<int>(rng.integer(15)),
                                2 + static_cast<int>(rng.integer(15)),
                                2 + static_cast<int>(rng.integer(15))};
        auto m = make_mask(dims);
        double density = rng.uniform(0.05, 0.95);
        for (double& v : m.values) v = rng.uniform() < density ? 1.0 : 0.0;
        bool has0 = false, has1 = false;
        for (double v : m.values) (v == 0.0 ? has0 : has1) = true;
        if (!has0 || !has1) continue;

        auto fast = signed_distance_transform(m);
        auto brute = signed_distance_transform_reference(m);
        for (std::size_t i = 0; i < fast.values.size(); ++i)
            CHECK(std::abs(fast.values[i] - brute.values[i]) <= 1e-9);
    }
}

TEST_CASE("edt: sign flips only across the mask boundary") {
    Rng rng(5);
    auto m = make_mask({10, 10, 10});
    for (double& v : m.values) v = rng.uniform() < 0.4 ? 1.0 : 0.0;
    m.at(0, 0, 0) = 0.0;
    m.at(5, 5, 5) = 1.0;
    auto sdf = signed_distance_transform(m);
    for (std::size_t i = 0; i < sdf.values.size(); ++i)
        CHECK(((sdf.values[i] < 0.0) == (m.values[i] == 1.0)));
}

TEST_CASE("edt: output is 1-Lipschitz across adjacent voxels up to tolerance") {
    Rng rng(11);
    auto m = make_mask({12, 12, 12});
    for (double& v : m.values) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
    m.at(0, 0, 0) = 0.0;
    m.at(6, 6, 6) = 1.0;
    auto sdf = signed_distance_transform(m);
    Vec3 h = sdf.spacing();
    for (int z = 0; z < 12; ++z)
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x + 1 < 12; ++x)
                CHECK(std::abs(sdf.at(x + 1, y, z) - sdf.at(x, y, z)) <= h[0] + 1e-9);
}
