#include "patchfem/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "patchfem/errors.hpp"
#include "patchfem/kernels.hpp"

namespace patchfem {

namespace {

std::array<Point2, 3> barycentric_gradients(const Triangle2& t) {
    const double two_area = 2.0 * triangle_area(t);
    const auto& v = t.v;
    return {Point2{(v[1].y - v[2].y) / two_area, (v[2].x - v[1].x) / two_area},
            Point2{(v[2].y - v[0].y) / two_area, (v[0].x - v[2].x) / two_area},
            Point2{(v[0].y - v[1].y) / two_area, (v[1].x - v[0].x) / two_area}};
}

}  // namespace

DofMap DofMap::build(const PatchMesh& mesh) {
    DofMap map;
    map.num_vertices = mesh.num_vertices();
    map.num_dofs = mesh.num_vertices() + mesh.num_edges();
    map.boundary.assign(map.num_dofs, false);
    map.positions.reserve(map.num_dofs);
    map.positions.insert(map.positions.end(), mesh.vertices().begin(), mesh.vertices().end());
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        map.positions.push_back(mesh.edge_node(e));
        const Edge& edge = mesh.edges()[e];
        if (edge.boundary) {
            map.boundary[map.num_vertices + e] = true;
            map.boundary[edge.v[0]] = true;
            map.boundary[edge.v[1]] = true;
        }
    }
    map.patch_dofs.reserve(mesh.num_patches());
    for (const Patch& p : mesh.patches()) {
        map.patch_dofs.push_back({p.v[0], p.v[1], p.v[2], map.num_vertices + p.e[0], map.num_vertices + p.e[1],
                                  map.num_vertices + p.e[2]});
    }
    return map;
}

double PatchQuadrature::total_weight() const {
    double sum = 0.0;
    for (const auto& s : sub) {
        for (double w : s.weights) sum += w;
    }
    return sum;
}

PatchQuadrature patch_quadrature(const LocalNodes& nodes, const Topology& topology,
                                 const std::array<Side, 4>& sides, const QuadRule& base) {
    PatchQuadrature pq;
    for (int i = 0; i < 4; ++i) {
        const auto& idx = topology[i];
        SubQuadrature& sq = pq.sub[i];
        sq.triangle = {{nodes.p[idx[0]], nodes.p[idx[1]], nodes.p[idx[2]]}};
        sq.side = sides[i];
        if (is_degenerate(sq.triangle)) throw DegenerateTriangle("patch_quadrature: degenerate subtriangle");
        // Equals macro map after reference-patch subtriangle map; built from
        // the physical vertices directly to avoid an inverse map.
        const AffineMap full = affine_map_between(kReferenceTriangle, sq.triangle);
        const double scale = std::abs(full.jacobian());
        sq.points.reserve(base.points.size());
        sq.weights.reserve(base.weights.size());
        for (std::size_t k = 0; k < base.points.size(); ++k) {
            sq.points.push_back(full(base.points[k]));
            sq.weights.push_back(base.weights[k] * scale);
        }
    }
    return pq;
}

Mat3 local_stiffness(const Triangle2& tri, double kappa) {
    if (is_degenerate(tri)) throw DegenerateTriangle("local_stiffness: degenerate triangle");
    const auto g = barycentric_gradients(tri);
    const double scale = kappa * std::abs(triangle_area(tri));
    Mat3 k{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) k[a][b] = scale * dot(g[a], g[b]);
    }
    return k;
}

std::array<double, 3> barycentric(const Triangle2& tri, Point2 x) {
    const double two_area = 2.0 * triangle_area(tri);
    const auto& v = tri.v;
    const double l1 = cross(v[2] - v[0], x - v[0]) / -two_area;
    const double l2 = cross(v[1] - v[0], x - v[0]) / two_area;
    return {1.0 - l1 - l2, l1, l2};
}

std::array<double, 3> local_load(const SubQuadrature& quad, const std::function<double(Point2)>& f) {
    std::array<double, 3> out{};
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
        const double fw = quad.weights[q] * f(quad.points[q]);
        const auto lam = barycentric(quad.triangle, quad.points[q]);
        for (int a = 0; a < 3; ++a) out[a] += fw * lam[a];
    }
    return out;
}

const char* to_string(Mode mode) { return mode == Mode::Adapted ? "adapted" : "baseline"; }

PatchContribution patch_contribution(const PatchMesh& mesh, const PatchConfig& config, std::size_t patch_id,
                                     const ProblemSpec& problem, Mode mode) {
    const LocalNodes nodes = local_nodes(mesh, patch_id);
    const PatchQuadrature pq = patch_quadrature(nodes, config.topology, config.sides, reference_quad_rule(2));
    const std::function<double(Point2)> f = [&problem](Point2 x) { return problem.f(x); };
    PatchContribution out;
    for (int i = 0; i < 4; ++i) {
        const SubQuadrature& sq = pq.sub[i];
        double kappa = problem.kappa(sq.side);
        if (mode == Mode::Baseline) {
            double integral = 0.0;
            double area = 0.0;
            for (std::size_t q = 0; q < sq.points.size(); ++q) {
                integral += sq.weights[q] * problem.kappa_at(sq.points[q]);
                area += sq.weights[q];
            }
            kappa = integral / area;
        }
        const Mat3 k = local_stiffness(sq.triangle, kappa);
        const auto load = local_load(sq, f);
        const auto& idx = config.topology[i];
        for (int a = 0; a < 3; ++a) {
            out.load[idx[a]] += load[a];
            for (int b = 0; b < 3; ++b) out.stiffness[idx[a]][idx[b]] += k[a][b];
        }
    }
    return out;
}

LinearSystem assemble(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                      Mode mode) {
    const DofMap dofs = DofMap::build(mesh);
    const auto contributions = kernels::omp::patch_contributions(mesh, configs, problem, mode);

    LinearSystem sys;
    sys.rhs.assign(dofs.num_dofs, 0.0);
    std::vector<Triplet> triplets;
    triplets.reserve(36 * contributions.size());
    for (std::size_t p = 0; p < contributions.size(); ++p) {
        const auto& c = contributions[p];
        const auto& d = dofs.patch_dofs[p];
        for (int a = 0; a < 6; ++a) {
            sys.rhs[d[a]] += c.load[a];
            for (int b = 0; b < 6; ++b) {
                if (c.stiffness[a][b] != 0.0 || a == b) triplets.push_back({d[a], d[b], c.stiffness[a][b]});
            }
        }
    }
    sys.matrix = SparseMatrix::from_triplets(dofs.num_dofs, std::move(triplets));

    std::vector<double> g(dofs.num_dofs, 0.0);
    for (std::size_t i = 0; i < dofs.num_dofs; ++i) {
        if (dofs.boundary[i]) {
            g[i] = problem.u(dofs.positions[i]);
            sys.dirichlet.emplace_back(i, g[i]);
        } else {
            ++sys.num_free;
        }
    }
    if (sys.num_free == 0) throw EmptySystem("assemble: every unknown is prescribed by boundary data");

    const auto& rp = sys.matrix.row_ptr();
    const auto& cols = sys.matrix.cols();
    auto& vals = sys.matrix.values();
    for (std::size_t i = 0; i < dofs.num_dofs; ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t j = cols[k];
            if (!dofs.boundary[i] && dofs.boundary[j]) sys.rhs[i] -= vals[k] * g[j];
        }
    }
    for (std::size_t i = 0; i < dofs.num_dofs; ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t j = cols[k];
            if (dofs.boundary[i] || dofs.boundary[j]) vals[k] = (i == j) ? 1.0 : 0.0;
        }
        if (dofs.boundary[i]) sys.rhs[i] = g[i];
    }
    return sys;
}

std::vector<double> interpolate_nodal(const ProblemSpec& problem, const PatchMesh& mesh) {
    std::vector<double> values;
    values.reserve(mesh.num_vertices() + mesh.num_edges());
    for (const Point2& v : mesh.vertices()) values.push_back(problem.u(v));
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) values.push_back(problem.u(mesh.edge_node(e)));
    return values;
}

ErrorNorms patch_error_squared(const PatchMesh& mesh, const PatchConfig& config, std::size_t patch_id,
                               const ProblemSpec& problem, std::span<const double> uh) {
    const LocalNodes nodes = local_nodes(mesh, patch_id);
    const PatchQuadrature pq = patch_quadrature(nodes, config.topology, config.sides, reference_quad_rule(5));
    const Patch& patch = mesh.patches()[patch_id];
    const std::size_t nv = mesh.num_vertices();
    const std::array<std::size_t, 6> dofs{patch.v[0], patch.v[1], patch.v[2],
                                          nv + patch.e[0], nv + patch.e[1], nv + patch.e[2]};
    ErrorNorms out;
    for (int i = 0; i < 4; ++i) {
        const SubQuadrature& sq = pq.sub[i];
        const auto& idx = config.topology[i];
        const std::array<double, 3> u_nodes{uh[dofs[idx[0]]], uh[dofs[idx[1]]], uh[dofs[idx[2]]]};
        const auto grads = barycentric_gradients(sq.triangle);
        const Point2 grad_uh = u_nodes[0] * grads[0] + u_nodes[1] * grads[1] + u_nodes[2] * grads[2];
        for (std::size_t q = 0; q < sq.points.size(); ++q) {
            const Point2 x = sq.points[q];
            const auto lam = barycentric(sq.triangle, x);
            const double e = problem.u(x) - (lam[0] * u_nodes[0] + lam[1] * u_nodes[1] + lam[2] * u_nodes[2]);
            const Point2 ge = problem.grad_u(x) - grad_uh;
            out.l2 += sq.weights[q] * e * e;
            out.h1_semi += sq.weights[q] * dot(ge, ge);
        }
    }
    return out;
}

ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh) {
    return kernels::omp::error_norms(mesh, configs, problem, uh);
}

}  // namespace patchfem
