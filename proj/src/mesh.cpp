#include "patchfem/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "patchfem/errors.hpp"

namespace patchfem {

const char* to_string(EdgeLock lock) {
    switch (lock) {
        case EdgeLock::Free: return "free";
        case EdgeLock::InterfaceLocked: return "interface";
        case EdgeLock::StrategySet: return "strategy";
    }
    return "?";
}

PatchMesh PatchMesh::from_triangles(std::vector<Point2> vertices,
                                    const std::vector<std::array<std::size_t, 3>>& triangles) {
    PatchMesh mesh;
    mesh.vertices_ = std::move(vertices);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_ids;
    std::vector<int> uses;
    mesh.patches_.reserve(triangles.size());
    for (const auto& tri : triangles) {
        Patch patch;
        patch.v = tri;
        for (std::size_t vid : tri) {
            if (vid >= mesh.vertices_.size()) throw std::out_of_range("from_triangles: vertex index");
        }
        if (!(triangle_area(mesh.patch_triangle_of(patch)) > 0.0)) {
            throw DegenerateTriangle("from_triangles: patch is not counterclockwise");
        }
        for (int k = 0; k < 3; ++k) {
            const std::size_t a = tri[k];
            const std::size_t b = tri[(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, mesh.edges_.size());
            if (inserted) {
                Edge edge;
                edge.v = {key.first, key.second};
                mesh.edges_.push_back(edge);
                uses.push_back(0);
            }
            patch.e[k] = it->second;
            ++uses[it->second];
        }
        mesh.patches_.push_back(patch);
    }
    for (std::size_t i = 0; i < mesh.edges_.size(); ++i) {
        if (uses[i] > 2) throw std::invalid_argument("from_triangles: non-manifold edge");
        mesh.edges_[i].boundary = uses[i] == 1;
    }
    for (std::size_t p = 0; p < mesh.patches_.size(); ++p) {
        mesh.h_max_ = std::max(mesh.h_max_, mesh.patch_diameter(p));
    }
    return mesh;
}

Triangle2 PatchMesh::patch_triangle_of(const Patch& patch) const {
    return {{vertices_[patch.v[0]], vertices_[patch.v[1]], vertices_[patch.v[2]]}};
}

Point2 PatchMesh::edge_node(std::size_t edge_id) const {
    const Edge& e = edges_[edge_id];
    return (1.0 - e.t) * vertices_[e.v[0]] + e.t * vertices_[e.v[1]];
}

Triangle2 PatchMesh::patch_triangle(std::size_t patch_id) const {
    return patch_triangle_of(patches_[patch_id]);
}

double PatchMesh::patch_diameter(std::size_t patch_id) const {
    const Triangle2 t = patch_triangle(patch_id);
    return std::max({norm(t.v[1] - t.v[0]), norm(t.v[2] - t.v[1]), norm(t.v[0] - t.v[2])});
}

double PatchMesh::local_edge_param(std::size_t patch_id, int local_edge) const {
    const Patch& p = patches_[patch_id];
    const Edge& e = edges_[p.e[local_edge]];
    return e.v[0] == p.v[local_edge] ? e.t : 1.0 - e.t;
}

double PatchMesh::to_edge_param(std::size_t patch_id, int local_edge, double local_t) const {
    const Patch& p = patches_[patch_id];
    const Edge& e = edges_[p.e[local_edge]];
    return e.v[0] == p.v[local_edge] ? local_t : 1.0 - local_t;
}

PatchParams PatchMesh::params(std::size_t patch_id) const {
    // P5 = (1-q) v0 + q v2 while local edge 2 runs v2 -> v0.
    return {1.0 - local_edge_param(patch_id, 2), local_edge_param(patch_id, 1),
            local_edge_param(patch_id, 0)};
}

void PatchMesh::set_edge_param(std::size_t edge_id, double t, EdgeLock lock) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("set_edge_param: t must lie in (0,1)");
    edges_[edge_id].t = t;
    edges_[edge_id].lock = lock;
}

void PatchMesh::reset_edge_params() {
    for (Edge& e : edges_) {
        e.t = 0.5;
        e.lock = EdgeLock::Free;
    }
}

PatchMesh build_structured_mesh(int n, const Rectangle& domain) {
    if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
    const auto stride = static_cast<std::size_t>(n) + 1;
    std::vector<Point2> vertices;
    vertices.reserve(stride * stride);
    const double dx = (domain.xmax - domain.xmin) / n;
    const double dy = (domain.ymax - domain.ymin) / n;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            // Pin the last row/column so the boundary is exact.
            const double x = i == n ? domain.xmax : domain.xmin + i * dx;
            const double y = j == n ? domain.ymax : domain.ymin + j * dy;
            vertices.push_back({x, y});
        }
    }
    std::vector<std::array<std::size_t, 3>> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t bl = j * stride + i;
            const std::size_t br = bl + 1;
            const std::size_t tl = bl + stride;
            const std::size_t tr = tl + 1;
            triangles.push_back({bl, br, tr});
            triangles.push_back({bl, tr, tl});
        }
    }
    PatchMesh mesh = PatchMesh::from_triangles(std::move(vertices), triangles);
    mesh.n_ = n;
    mesh.domain_ = domain;
    return mesh;
}

PatchMesh refine(const PatchMesh& mesh) {
    if (mesh.resolution() < 1) throw std::invalid_argument("refine: mesh is not structured");
    return build_structured_mesh(2 * mesh.resolution(), mesh.domain());
}

LocalNodes local_nodes(const PatchMesh& mesh, std::size_t patch_id) {
    const Patch& patch = mesh.patches()[patch_id];
    LocalNodes nodes;
    for (int k = 0; k < 3; ++k) {
        nodes.p[k] = mesh.vertices()[patch.v[k]];
        nodes.p[3 + k] = mesh.edge_node(patch.e[k]);
    }
    return nodes;
}

LocalNodes local_nodes(const Triangle2& macro, const PatchParams& params) {
    const auto& v = macro.v;
    return {{v[0], v[1], v[2], (1.0 - params.s) * v[0] + params.s * v[1],
             (1.0 - params.r) * v[1] + params.r * v[2], (1.0 - params.q) * v[0] + params.q * v[2]}};
}

}  // namespace patchfem
