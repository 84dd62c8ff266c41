#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "nsc/mesh.hpp"
#include "nsc/shapes.hpp"

using namespace nsc;

namespace {

VoxelGrid sphere_grid(double r, int dims = 64) {
    return voxelize_sdf(
        [r](double x, double y, double z) { return sphere_sdf({0, 0, 0}, r, {x, y, z}); },
        {dims, dims, dims}, Domain{});
}

// Euler characteristic V - E + F over unique undirected edges.
int euler_characteristic(const TriangleMesh& m) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            auto a = t[static_cast<std::size_t>(e)], b = t[static_cast<std::size_t>((e + 1) % 3)];
            edges[{std::min(a, b), std::max(a, b)}]++;
        }
    return static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(m.triangles.size());
}

bool watertight(const TriangleMesh& m) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            auto a = t[static_cast<std::size_t>(e)], b = t[static_cast<std::size_t>((e + 1) % 3)];
            edges[{std::min(a, b), std::max(a, b)}]++;
        }
    for (const auto& [k, c] : edges)
        if (c != 2) return false;
    return true;
}

}  // namespace

TEST_CASE("marching cubes: all-positive grid yields the empty mesh") {
    auto g = voxelize_sdf([](double, double, double) { return 1.0; }, {8, 8, 8}, Domain{});
    auto m = marching_cubes(g);
    CHECK(m.vertices.empty());
    CHECK(m.triangles.empty());
}

TEST_CASE("marching cubes: sphere comes out round, watertight, and genus zero") {
    auto g = sphere_grid(0.5);
    auto m = marching_cubes(g);
    REQUIRE(!m.vertices.empty());
    m.validate();
    double h = g.spacing()[0];
    for (const auto& v : m.vertices) {
        double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        CHECK(std::abs(r - 0.5) <= h);
    }
    CHECK(watertight(m));
    CHECK(euler_characteristic(m) == 2);
    CHECK(mesh_component_count(m) == 1);
}

TEST_CASE("marching cubes: sphere area and signed volume match closed forms") {
    auto g = sphere_grid(0.5);
    auto m = marching_cubes(g);
    CHECK(mesh_surface_area(m) == doctest::Approx(4.0 * M_PI * 0.25).epsilon(0.03));
    CHECK(mesh_signed_volume(m) ==
          doctest::Approx(4.0 / 3.0 * M_PI * 0.125).epsilon(0.03));
}

TEST_CASE("marching cubes: two separated spheres give two components") {
    auto g = voxelize_sdf(
        [](double x, double y, double z) {
            return std::min(sphere_sdf({-0.45, 0, 0}, 0.22, {x, y, z}),
                            sphere_sdf({0.45, 0, 0}, 0.22, {x, y, z}));
        },
        {64, 64, 64}, Domain{});
    auto m = marching_cubes(g);
    CHECK(mesh_component_count(m) == 2);
    CHECK(watertight(m));
}

TEST_CASE("marching cubes: shifting by iso equals extracting at iso") {
    auto g = sphere_grid(0.4, 32);
    auto at_iso = marching_cubes(g, 0.07);
    VoxelGrid shifted = g;
    for (double& v : shifted.values) v -= 0.07;
    auto at_zero = marching_cubes(shifted, 0.0);
    REQUIRE(at_iso.vertices.size() == at_zero.vertices.size());
    REQUIRE(at_iso.triangles.size() == at_zero.triangles.size());
    for (std::size_t i = 0; i < at_iso.vertices.size(); ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(at_iso.vertices[i][static_cast<std::size_t>(a)] ==
                  doctest::Approx(at_zero.vertices[i][static_cast<std::size_t>(a)])
                      .epsilon(1e-9));
    CHECK(at_iso.triangles == at_zero.triangles);
}

TEST_CASE("mesh utilities: right triangle area and per-axis scaling") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    CHECK(mesh_surface_area(m) == doctest::Approx(0.5).epsilon(1e-12));
    auto s = scale_mesh(m, {2.0, 3.0, 1.0});
    CHECK(s.vertices[1] == Vec3{2, 0, 0});
    CHECK(s.vertices[2] == Vec3{0, 3, 0});
    CHECK(mesh_surface_area(s) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mesh validate rejects bad indices and degenerate triangles") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 5}};
    CHECK_THROWS_AS(m.validate(), ValidationError);
    m.triangles = {{0, 1, 1}};
    CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("OBJ and binary mesh files round-trip") {
    auto g = sphere_grid(0.35, 24);
    auto m = marching_cubes(g);
    m.sequence_id = 3;
    m.frame = 7;
    auto dir = std::filesystem::temp_directory_path() / "nsc_mesh_test";
    std::filesystem::create_directories(dir);

    auto obj_path = (dir / "s.obj").string();
    export_obj(m, obj_path);
    auto from_obj = import_obj(obj_path);
    REQUIRE(from_obj.vertices.size() == m.vertices.size());
    CHECK(from_obj.triangles == m.triangles);
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(from_obj.vertices[i][static_cast<std::size_t>(a)] ==
                  doctest::Approx(m.vertices[i][static_cast<std::size_t>(a)]).epsilon(1e-8));

    auto bin_path = (dir / "s.msh").string();
    save_mesh_binary(m, bin_path);
    auto from_bin = load_mesh_binary(bin_path);
    CHECK(from_bin.triangles == m.triangles);
    REQUIRE(from_bin.vertices.size() == m.vertices.size());
    // Binary payload stores f32 coordinates.
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(from_bin.vertices[i][static_cast<std::size_t>(a)] ==
                  doctest::Approx(m.vertices[i][static_cast<std::size_t>(a)]).epsilon(1e-6));
    std::filesystem::remove_all(dir);
}

TEST_CASE("marching cubes: identical inputs give identical meshes") {
    auto g = sphere_grid(0.45, 40);
    auto a = marching_cubes(g);
    auto b = marching_cubes(g);
    CHECK(a.vertices == b.vertices);
    CHECK(a.triangles == b.triangles);
}
