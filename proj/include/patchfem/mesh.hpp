#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "patchfem/geometry.hpp"

namespace patchfem {

enum class EdgeLock { Free, InterfaceLocked, StrategySet };

const char* to_string(EdgeLock lock);

/// Mesh edge carrying the single adjustable node of that edge. `v[0] < v[1]`
/// and `t` is measured from v[0]; the node sits at (1-t) v[0] + t v[1].
struct Edge {
    std::array<std::size_t, 2> v{};
    bool boundary = false;
    double t = 0.5;
    EdgeLock lock = EdgeLock::Free;
};

/// Macro triangle. Local edge k runs from v[k] to v[(k+1)%3].
struct Patch {
    std::array<std::size_t, 3> v{};
    std::array<std::size_t, 3> e{};
};

struct Rectangle {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

/// The six nodes of a patch: P0..P2 are the vertices, P3 lies on v0-v1, P4
/// on v1-v2 and P5 on v0-v2. In reference coordinates (v0=(0,0), v1=(1,0),
/// v2=(0,1)) they are P3=(s,0), P4=(1-r,r), P5=(0,q).
struct LocalNodes {
    std::array<Point2, 6> p;

    Triangle2 macro() const { return {{p[0], p[1], p[2]}}; }
};

/// Local parameters (q, r, s) of one patch.
struct PatchParams {
    double q = 0.5;
    double r = 0.5;
    double s = 0.5;
};

class PatchMesh {
public:
    /// Triangles must be counterclockwise; edges are registered in order of
    /// first appearance.
    static PatchMesh from_triangles(std::vector<Point2> vertices,
                                    const std::vector<std::array<std::size_t, 3>>& triangles);

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Patch>& patches() const { return patches_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_patches() const { return patches_.size(); }
    double h_max() const { return h_max_; }

    /// Grid resolution for structured meshes, 0 otherwise.
    int resolution() const { return n_; }
    const Rectangle& domain() const { return domain_; }

    Point2 edge_node(std::size_t edge_id) const;
    Triangle2 patch_triangle(std::size_t patch_id) const;
    double patch_diameter(std::size_t patch_id) const;

    /// Parameter of the patch's local edge k, measured from v[k] to v[k+1].
    double local_edge_param(std::size_t patch_id, int local_edge) const;
    /// Converts a parameter measured from v[k] to v[k+1] into edge storage.
    double to_edge_param(std::size_t patch_id, int local_edge, double local_t) const;

    PatchParams params(std::size_t patch_id) const;

    void set_edge_param(std::size_t edge_id, double t, EdgeLock lock);
    void reset_edge_params();

private:
    friend PatchMesh build_structured_mesh(int n, const Rectangle& domain);

    Triangle2 patch_triangle_of(const Patch& patch) const;

    std::vector<Point2> vertices_;
    std::vector<Edge> edges_;
    std::vector<Patch> patches_;
    double h_max_ = 0.0;
    int n_ = 0;
    Rectangle domain_;
};

/// n x n squares, each split along its bottom-left to top-right diagonal.
PatchMesh build_structured_mesh(int n, const Rectangle& domain = {});

/// Global refinement of a structured mesh (regenerates at 2n).
PatchMesh refine(const PatchMesh& mesh);

LocalNodes local_nodes(const PatchMesh& mesh, std::size_t patch_id);

/// Node positions for explicit parameters, in the same local convention.
LocalNodes local_nodes(const Triangle2& macro, const PatchParams& params);

}  // namespace patchfem
