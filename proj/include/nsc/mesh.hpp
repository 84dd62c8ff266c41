#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nsc/grid.hpp"

namespace nsc {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    int sequence_id = -1;
    int frame = -1;

    void validate() const;
};

// Zero (or iso) level set of an SDF grid via marching cubes. Vertices sit on
// cell edges by linear interpolation; welding is by exact edge identity, so
// closed surfaces away from the domain boundary come out watertight.
// Triangles are wound so normals point toward increasing SDF (outward).
TriangleMesh marching_cubes(const VoxelGrid& grid, double iso = 0.0);

double mesh_surface_area(const TriangleMesh& mesh);

// Divergence-theorem volume; positive for outward-oriented closed surfaces.
double mesh_signed_volume(const TriangleMesh& mesh);

// Connected components over shared-vertex adjacency.
int mesh_component_count(const TriangleMesh& mesh);

// Per-axis scale, e.g. normalized -> physical units.
TriangleMesh scale_mesh(const TriangleMesh& mesh, const Vec3& factors);

// Wavefront OBJ, 1-based indices, 9 significant digits, LF endings.
void export_obj(const TriangleMesh& mesh, const std::string& path);
TriangleMesh import_obj(const std::string& path);

// Binary dump: magic "MSH1", u64 vertex count, u64 triangle count,
// f32 xyz per vertex, u32 index triples.
void save_mesh_binary(const TriangleMesh& mesh, const std::string& path);
TriangleMesh load_mesh_binary(const std::string& path);

}  // namespace nsc
