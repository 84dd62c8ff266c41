#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nsc/gridio.hpp"
#include "nsc/manifest.hpp"
#include "nsc/sha256.hpp"
#include "nsc/shapes.hpp"

using namespace nsc;

namespace {

std::filesystem::path scratch_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("sha256 matches the FIPS test vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256_file streams the same digest as the in-memory path") {
    auto dir = scratch_dir("nsc_sha_test");
    auto path = (dir / "blob.bin").string();
    std::string payload(100000, 'x');
    for (std::size_t i = 0; i < payload.size(); ++i)
        payload[i] = static_cast<char>(i * 31 % 251);
    std::ofstream(path, std::ios::binary).write(payload.data(),
                                                static_cast<std::streamsize>(payload.size()));
    CHECK(sha256_file(path) == sha256_hex(payload));
    std::filesystem::remove_all(dir);
}

TEST_CASE("grid files: f32 SDF round-trip preserves metadata and payload") {
    auto g = voxelize_sdf(
        [](double x, double y, double z) { return sphere_sdf({0, 0, 0}, 0.4, {x, y, z}); },
        {12, 10, 8}, Domain{});
    g.time_index = 4;
    g.voxel_size_nm = {250.0, 250.0, 300.0};
    auto dir = scratch_dir("nsc_grid_test");
    auto path = (dir / "frame.json").string();
    save_grid(g, path, "f32");
    auto loaded = load_grid(path);
    CHECK(loaded.dims == g.dims);
    CHECK(loaded.time_index == 4);
    CHECK(loaded.voxel_size_nm == std::array<double, 3>{250.0, 250.0, 300.0});
    REQUIRE(loaded.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(loaded.values[i] == doctest::Approx(g.values[i]).epsilon(1e-6));
    std::filesystem::remove_all(dir);
}

TEST_CASE("grid files: u8 occupancy round-trips exactly and is byte-stable") {
    auto sdf = voxelize_sdf(
        [](double x, double y, double z) { return sphere_sdf({0, 0, 0}, 0.5, {x, y, z}); },
        {16, 16, 16}, Domain{});
    auto occ = occupancy_from_sdf(sdf);
    auto dir = scratch_dir("nsc_occ_test");
    // Same basename in two directories: headers embed the payload filename.
    std::filesystem::create_directories(dir / "x");
    std::filesystem::create_directories(dir / "y");
    auto p1 = (dir / "x" / "a.json").string(), p2 = (dir / "y" / "a.json").string();
    save_grid(occ, p1, "u8");
    auto loaded = load_grid(p1);
    CHECK(loaded.values == occ.values);
    save_grid(loaded, p2, "u8");
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp((dir / "x" / "a.raw").string()) == slurp((dir / "y" / "a.raw").string()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("grid files: malformed headers are rejected as validation errors") {
    auto dir = scratch_dir("nsc_badgrid_test");
    auto path = (dir / "bad.json").string();
    std::ofstream(path) << "{\"dims\": [4, 4]}";
    CHECK_THROWS_AS(load_grid(path), ValidationError);
    std::ofstream(path) << "not json at all";
    CHECK_THROWS_AS(load_grid(path), ValidationError);
    CHECK_THROWS_AS(load_grid((dir / "missing.json").string()), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run manifest serializes its digest entries and config snapshot") {
    auto dir = scratch_dir("nsc_manifest_test");
    auto in_path = (dir / "input.bin").string();
    std::ofstream(in_path, std::ios::binary) << "payload";
    RunManifest man("train", "{\"epochs\": 10}", 1234);
    man.add_input(in_path);
    man.add_timing("total", 12.5);
    auto path = (dir / "manifest.json").string();
    man.write(path);
    auto text = slurp(path);
    std::string s(text.begin(), text.end());
    CHECK(s.find("\"train\"") != std::string::npos);
    CHECK(s.find(sha256_hex("payload")) != std::string::npos);
    CHECK(s.find("1234") != std::string::npos);
    CHECK(s.find(version_string()) != std::string::npos);
    std::filesystem::remove_all(dir);
}
