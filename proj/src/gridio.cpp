#include "nsc/gridio.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

namespace nsc {

namespace {

using nlohmann::json;

std::string payload_name(const std::string& header_path) {
    std::filesystem::path p(header_path);
    p.replace_extension(".raw");
    return p.filename().string();
}

}  // namespace

void save_grid(const VoxelGrid& grid, const std::string& path, const std::string& dtype) {
    grid.validate();
    if (dtype != "u8" && dtype != "f32")
        throw ValidationError("save_grid: dtype must be u8 or f32");

    json header{{"dims", grid.dims},
                {"voxel_size_nm", grid.voxel_size_nm},
                {"time_index", grid.time_index},
                {"dtype", dtype},
                {"order", "x-fastest"},
                {"payload", payload_name(path)},
                {"domain",
                 {{"spatial_lo", grid.domain.spatial_lo},
                  {"spatial_hi", grid.domain.spatial_hi},
                  {"time_lo", grid.domain.time_lo},
                  {"time_hi", grid.domain.time_hi}}}};
    std::ofstream hdr(path, std::ios::binary);
    if (!hdr) throw IoError("cannot open for writing: " + path);
    hdr << header.dump(2) << "\n";
    if (!hdr) throw IoError("write failed: " + path);

    std::filesystem::path raw_path = std::filesystem::path(path).parent_path() / payload_name(path);
    std::ofstream raw(raw_path, std::ios::binary);
    if (!raw) throw IoError("cannot open for writing: " + raw_path.string());
    if (dtype == "u8") {
        std::vector<std::uint8_t> bytes(grid.values.size());
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            double v = grid.values[i];
            if (v != 0.0 && v != 1.0)
                throw ValidationError("save_grid: u8 grids must hold 0/1 occupancy");
            bytes[i] = static_cast<std::uint8_t>(v);
        }
        raw.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        std::vector<float> floats(grid.values.begin(), grid.values.end());
        raw.write(reinterpret_cast<const char*>(floats.data()),
                  static_cast<std::streamsize>(floats.size() * sizeof(float)));
    }
    if (!raw) throw IoError("write failed: " + raw_path.string());
}

VoxelGrid load_grid(const std::string& path) {
    std::ifstream hdr(path);
    if (!hdr) throw IoError("cannot open: " + path);
    json header = json::parse(hdr, nullptr, false);
    if (header.is_discarded()) throw ValidationError("malformed grid header: " + path);

    VoxelGrid grid;
    try {
        auto dims = header.at("dims").get<std::vector<int>>();
        if (dims.size() != 3) throw ValidationError("grid header: dims must have 3 entries");
        grid.dims = {dims[0], dims[1], dims[2]};
        auto vs = header.at("voxel_size_nm").get<std::vector<double>>();
        if (vs.size() != 3)
            throw ValidationError("grid header: voxel_size_nm must have 3 entries");
        grid.voxel_size_nm = {vs[0], vs[1], vs[2]};
        grid.time_index = header.at("time_index").get<int>();
        if (header.value("order", "x-fastest") != "x-fastest")
            throw ValidationError("grid header: unsupported order in " + path);
        if (header.contains("domain")) {
            const auto& d = header["domain"];
            auto lo = d.at("spatial_lo").get<std::vector<double>>();
            auto hi = d.at("spatial_hi").get<std::vector<double>>();
            grid.domain.spatial_lo = {lo[0], lo[1], lo[2]};
            grid.domain.spatial_hi = {hi[0], hi[1], hi[2]};
            grid.domain.time_lo = d.at("time_lo").get<double>();
            grid.domain.time_hi = d.at("time_hi").get<double>();
        }
    } catch (const json::exception& e) {
        throw ValidationError("malformed grid header " + path + ": " + e.what());
    }

    std::string dtype = header.at("dtype").get<std::string>();
    std::string payload = header.value("payload", payload_name(path));
    std::filesystem::path raw_path = std::filesystem::path(path).parent_path() / payload;
    std::ifstream raw(raw_path, std::ios::binary);
    if (!raw) throw IoError("cannot open payload: " + raw_path.string());

    const std::size_t n = static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
    grid.values.resize(n);
    if (dtype == "u8") {
        std::vector<std::uint8_t> bytes(n);
        raw.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
        if (!raw) throw IoError("truncated payload: " + raw_path.string());
        for (std::size_t i = 0; i < n; ++i) grid.values[i] = bytes[i] ? 1.0 : 0.0;
    } else if (dtype == "f32") {
        std::vector<float> floats(n);
        raw.read(reinterpret_cast<char*>(floats.data()),
                 static_cast<std::streamsize>(n * sizeof(float)));
        if (!raw) throw IoError("truncated payload: " + raw_path.string());
        for (std::size_t i = 0; i < n; ++i) grid.values[i] = floats[i];
    } else {
        throw ValidationError("grid header: unsupported dtype " + dtype);
    }
    grid.validate();
    return grid;
}

}  // namespace nsc
