#include "nsc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "nsc/mc_tables.hpp"

namespace nsc {

void TriangleMesh::validate() const {
    for (const auto& t : triangles) {
        for (auto i : t)
            if (i >= vertices.size()) throw ValidationError("mesh: vertex index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw ValidationError("mesh: degenerate triangle");
    }
}

namespace {

// Bourke corner/edge numbering.
constexpr int kCornerOff[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                  {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Canonical edge id: (base corner, axis) in the corner lattice. Shared edges
// of neighboring cells map to the same id, which is what makes welding exact.
std::uint64_t edge_key(const VoxelGrid& g, int cx, int cy, int cz, int edge) {
    const int* a = kCornerOff[kEdgeCorners[edge][0]];
    const int* b = kCornerOff[kEdgeCorners[edge][1]];
    int ax = cx + std::min(a[0], b[0]);
    int ay = cy + std::min(a[1], b[1]);
    int az = cz + std::min(a[2], b[2]);
    int axis = (a[0] != b[0]) ? 0 : (a[1] != b[1]) ? 1 : 2;
    return (static_cast<std::uint64_t>((static_cast<std::uint64_t>(az) * g.dims[1] + ay) *
                                       g.dims[0] +
                                       ax)) *
               3 +
           axis;
}

Vec3 edge_vertex(const VoxelGrid& g, std::uint64_t key, double iso) {
    int axis = static_cast<int>(key % 3);
    std::uint64_t c = key / 3;
    int ax = static_cast<int>(c % g.dims[0]);
    c /= g.dims[0];
    int ay = static_cast<int>(c % g.dims[1]);
    int az = static_cast<int>(c / g.dims[1]);
    int bx = ax + (axis == 0), by = ay + (axis == 1), bz = az + (axis == 2);
    double va = g.at(ax, ay, az), vb = g.at(bx, by, bz);
    double t = (vb == va) ? 0.5 : (iso - va) / (vb - va);
    t = std::clamp(t, 0.0, 1.0);
    Vec3 pa = g.center(ax, ay, az), pb = g.center(bx, by, bz);
    return {pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]),
            pa[2] + t * (pb[2] - pa[2])};
}

}  // namespace

TriangleMesh marching_cubes(const VoxelGrid& grid, double iso) {
    grid.validate();
    for (int d : grid.dims)
        if (d < 2) throw ValidationError("marching_cubes: dims must be >= 2 per axis");

    const int cx = grid.dims[0] - 1, cy = grid.dims[1] - 1, cz = grid.dims[2] - 1;
    // Per-slab triangle emission as canonical edge-key triples; welding
    // happens afterwards in slab order, so thread scheduling cannot change
    // the result.
    std::vector<std::vector<std::array<std::uint64_t, 3>>> slabs(
        static_cast<std::size_t>(cz));
#pragma omp parallel for schedule(static)
    for (int z = 0; z < cz; ++z) {
        auto& local = slabs[static_cast<std::size_t>(z)];
        for (int y = 0; y < cy; ++y)
            for (int x = 0; x < cx; ++x) {
                int cube = 0;
                for (int i = 0; i < 8; ++i) {
                    double v = grid.at(x + kCornerOff[i][0], y + kCornerOff[i][1],
                                       z + kCornerOff[i][2]);
                    if (v < iso) cube |= 1 << i;
                }
                if (kMcEdgeTable[cube] == 0) continue;
                const int* tri = kMcTriTable[cube];
                for (int i = 0; tri[i] != -1; i += 3) {
                    // Table order winds inward for our inside-negative
                    // convention; swap two corners for outward normals.
                    std::array<std::uint64_t, 3> keys{
                        edge_key(grid, x, y, z, tri[i]),
                        edge_key(grid, x, y, z, tri[i + 2]),
                        edge_key(grid, x, y, z, tri[i + 1])};
                    if (keys[0] == keys[1] || keys[1] == keys[2] || keys[0] == keys[2])
                        continue;  // iso passes through a corner
                    local.push_back(keys);
                }
            }
    }

    TriangleMesh mesh;
    std::unordered_map<std::uint64_t, std::uint32_t> index_of;
    for (const auto& slab : slabs)
        for (const auto& keys : slab) {
            std::array<std::uint32_t, 3> tri;
            for (int i = 0; i < 3; ++i) {
                auto [it, inserted] =
                    index_of.try_emplace(keys[i], static_cast<std::uint32_t>(mesh.vertices.size()));
                if (inserted) mesh.vertices.push_back(edge_vertex(grid, keys[i], iso));
                tri[i] = it->second;
            }
            mesh.triangles.push_back(tri);
        }
    return mesh;
}

double mesh_surface_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
        double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
        double nx = uy * vz - uz * vy;
        double ny = uz * vx - ux * vz;
        double nz = ux * vy - uy * vx;
        area += 0.5 * std::sqrt(nx * nx + ny * ny + nz * nz);
    }
    return area;
}

double mesh_signed_volume(const TriangleMesh& mesh) {
    double vol = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        vol += (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                a[2] * (b[0] * c[1] - b[1] * c[0])) /
               6.0;
    }
    return vol;
}

int mesh_component_count(const TriangleMesh& mesh) {
    std::vector<std::uint32_t> parent(mesh.vertices.size());
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& t : mesh.triangles) {
        parent[find(t[1])] = find(t[0]);
        parent[find(t[2])] = find(t[0]);
    }
    int count = 0;
    std::vector<bool> used(mesh.vertices.size(), false);
    for (const auto& t : mesh.triangles)
        for (auto i : t) used[i] = true;
    for (std::uint32_t v = 0; v < parent.size(); ++v)
        if (used[v] && find(v) == v) ++count;
    return count;
}

TriangleMesh scale_mesh(const TriangleMesh& mesh, const Vec3& factors) {
    TriangleMesh out = mesh;
    for (auto& v : out.vertices)
        for (int a = 0; a < 3; ++a) v[a] *= factors[a];
    return out;
}

void export_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on all platforms
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "# nsc mesh: " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
        << " triangles\n";
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
        out << buf;
    }
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!out) throw IoError("write failed: " + path);
}

TriangleMesh import_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    TriangleMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec3 v;
            ss >> v[0] >> v[1] >> v[2];
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> t;
            ss >> t[0] >> t[1] >> t[2];
            for (auto& i : t) --i;
            mesh.triangles.push_back(t);
        }
    }
    return mesh;
}

void save_mesh_binary(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write("MSH1", 4);
    std::uint64_t nv = mesh.vertices.size(), nt = mesh.triangles.size();
    out.write(reinterpret_cast<const char*>(&nv), sizeof nv);
    out.write(reinterpret_cast<const char*>(&nt), sizeof nt);
    for (const auto& v : mesh.vertices) {
        float f[3] = {static_cast<float>(v[0]), static_cast<float>(v[1]),
                      static_cast<float>(v[2])};
        out.write(reinterpret_cast<const char*>(f), sizeof f);
    }
    for (const auto& t : mesh.triangles)
        out.write(reinterpret_cast<const char*>(t.data()), 3 * sizeof(std::uint32_t));
    if (!out) throw IoError("write failed: " + path);
}

TriangleMesh load_mesh_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    std::uint64_t nv = 0, nt = 0;
    in.read(reinterpret_cast<char*>(&nv), sizeof nv);
    in.read(reinterpret_cast<char*>(&nt), sizeof nt);
    if (!in || std::memcmp(magic, "MSH1", 4) != 0)
        throw IoError("not an MSH1 file: " + path);
    TriangleMesh mesh;
    mesh.vertices.resize(nv);
    mesh.triangles.resize(nt);
    for (auto& v : mesh.vertices) {
        float f[3];
        in.read(reinterpret_cast<char*>(f), sizeof f);
        v = {f[0], f[1], f[2]};
    }
    for (auto& t : mesh.triangles)
        in.read(reinterpret_cast<char*>(t.data()), 3 * sizeof(std::uint32_t));
    if (!in) throw IoError("truncated MSH1 file: " + path);
    return mesh;
}

}  // namespace nsc
