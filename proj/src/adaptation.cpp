#include "patchfem/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>

#include "patchfem/csv.hpp"
#include "patchfem/errors.hpp"

namespace patchfem {

CutClass CutClass::edge_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a > 2 || b > 2) throw std::invalid_argument("edge_edge: bad edge pair");
    CutClass c;
    c.kind = CutKind::EdgeEdge;
    c.edges = {std::min(a, b), std::max(a, b)};
    return c;
}

CutClass CutClass::vertex_edge(int vertex) {
    if (vertex < 0 || vertex > 2) throw std::invalid_argument("vertex_edge: bad vertex");
    CutClass c;
    c.kind = CutKind::VertexEdge;
    c.vertex = vertex;
    return c;
}

std::array<int, 2> CutClass::interface_nodes() const {
    switch (kind) {
        case CutKind::EdgeEdge: return {3 + edges[0], 3 + edges[1]};
        case CutKind::VertexEdge: return {vertex, 3 + cut_edge()};
        case CutKind::Uncut: break;
    }
    throw std::logic_error("interface_nodes: patch is not cut");
}

std::string to_string(const CutClass& cut) {
    switch (cut.kind) {
        case CutKind::Uncut: return "uncut";
        case CutKind::EdgeEdge:
            return "edge-edge:" + std::to_string(cut.edges[0]) + "-" + std::to_string(cut.edges[1]);
        case CutKind::VertexEdge: return "vertex-edge:" + std::to_string(cut.vertex);
    }
    return "?";
}

Classification classify_patch(const PatchMesh& mesh, std::size_t patch_id, const LevelSet& ls) {
    const Patch& patch = mesh.patches()[patch_id];
    const double scale = mesh.patch_diameter(patch_id);
    Classification c;
    for (int k = 0; k < 3; ++k) {
        c.vertex_hit[k] = vertex_hits(ls, mesh.vertices()[patch.v[k]], scale);
    }
    int crossed_edges = 0;
    for (int k = 0; k < 3; ++k) {
        const Edge& edge = mesh.edges()[patch.e[k]];
        // Always intersect in storage orientation so both neighbours agree.
        const SegmentCut cut =
            segment_crossings(ls, mesh.vertices()[edge.v[0]], mesh.vertices()[edge.v[1]]);
        const bool forward = edge.v[0] == patch.v[k];
        const int start = forward ? k : (k + 1) % 3;
        const int end = forward ? (k + 1) % 3 : k;
        if (cut.hits_start) c.vertex_hit[start] = true;
        if (cut.hits_end) c.vertex_hit[end] = true;
        if (cut.params.size() > 1) {
            throw RefinementRequired(patch_id, "interface crosses local edge " + std::to_string(k) + " twice");
        }
        if (cut.params.size() == 1) {
            const double t = cut.params.front();
            c.edge_t[k] = t;
            c.local_t[k] = forward ? t : 1.0 - t;
            ++crossed_edges;
        }
    }
    const int hits = int(c.vertex_hit[0]) + int(c.vertex_hit[1]) + int(c.vertex_hit[2]);

    if (crossed_edges == 0) {
        // Touching a vertex, or running through two vertices, does not cut.
        return c;
    }
    if (crossed_edges == 2 && hits == 0) {
        int a = -1;
        int b = -1;
        for (int k = 0; k < 3; ++k) {
            if (!c.local_t[k]) continue;
            (a < 0 ? a : b) = k;
        }
        c.cut = CutClass::edge_edge(a, b);
        return c;
    }
    if (crossed_edges == 1 && hits == 1) {
        const int vertex = c.vertex_hit[0] ? 0 : (c.vertex_hit[1] ? 1 : 2);
        const CutClass candidate = CutClass::vertex_edge(vertex);
        if (c.local_t[candidate.cut_edge()]) {
            c.cut = candidate;
            return c;
        }
        throw RefinementRequired(patch_id, "interface passes a vertex and an adjacent edge");
    }
    throw RefinementRequired(patch_id, std::to_string(crossed_edges) + " edge crossings and " +
                                           std::to_string(hits) + " vertex hits");
}

Strategy strategy_from_int(int value) {
    if (value < 1 || value > 3) throw std::invalid_argument("strategy must be 1, 2 or 3");
    return static_cast<Strategy>(value);
}

int to_int(Strategy s) { return static_cast<int>(s); }

PartialParams determined_params(const Classification& c) {
    PartialParams p;
    if (c.cut.kind == CutKind::Uncut) return p;
    if (c.local_t[0]) p.s = *c.local_t[0];
    if (c.local_t[1]) p.r = *c.local_t[1];
    // Local edge 2 runs v2 -> v0, q is measured from v0.
    if (c.local_t[2]) p.q = 1.0 - *c.local_t[2];
    return p;
}

PatchParams free_params_two_edges(Strategy strategy, const PartialParams& fixed, StrategyScope scope) {
    if (fixed.num_fixed() != 2) throw std::invalid_argument("free_params_two_edges: need two fixed parameters");
    PatchParams out{fixed.q.value_or(0.5), fixed.r.value_or(0.5), fixed.s.value_or(0.5)};
    if (strategy == Strategy::Midpoint) return out;
    const bool product = strategy == Strategy::Product;
    const bool always = scope == StrategyScope::Always;
    if (!fixed.r) {
        if (always || (out.q > 0.5 && out.s > 0.5)) out.r = product ? (1.0 - out.s) * (1.0 - out.q) : 1.0 - out.s;
    } else if (!fixed.q) {
        if (always || (out.s < 0.5 && out.r > 0.5)) out.q = product ? (1.0 - out.r) * out.s : out.s;
    } else {
        if (always || (out.q < 0.5 && out.r < 0.5)) out.s = product ? out.q * out.r : 1.0 - out.r;
    }
    return out;
}

PatchParams free_params_vertex_edge(Strategy strategy, const PartialParams& fixed) {
    if (fixed.num_fixed() != 1) throw std::invalid_argument("free_params_vertex_edge: need one fixed parameter");
    PatchParams out{fixed.q.value_or(0.5), fixed.r.value_or(0.5), fixed.s.value_or(0.5)};
    if (strategy == Strategy::Midpoint) return out;
    // Each case of the table only consults the cut-determined value; the
    // branches depending on the other free value fall back to 1/2.
    if (fixed.r) {
        const double r = *fixed.r;
        out.q = r > 0.5 ? r : 0.5;
        out.s = r < 0.5 ? 1.0 - r : 0.5;
    } else if (fixed.q) {
        const double q = *fixed.q;
        out.r = q > 0.5 ? q : 0.5;
        out.s = q < 0.5 ? q : 0.5;
    } else {
        const double s = *fixed.s;
        out.r = s > 0.5 ? 1.0 - s : 0.5;
        out.q = s < 0.5 ? s : 0.5;
    }
    return out;
}

PatchParams requested_params(Strategy strategy, const Classification& c) {
    switch (c.cut.kind) {
        case CutKind::EdgeEdge: return free_params_two_edges(strategy, determined_params(c));
        case CutKind::VertexEdge: return free_params_vertex_edge(strategy, determined_params(c));
        case CutKind::Uncut: break;
    }
    return {};
}

ResolveReport resolve_edge_params(PatchMesh& mesh, std::span<const Classification> classes,
                                  Strategy strategy) {
    if (classes.size() != mesh.num_patches()) throw std::invalid_argument("resolve_edge_params: size mismatch");
    mesh.reset_edge_params();
    for (std::size_t p = 0; p < classes.size(); ++p) {
        if (classes[p].cut.kind == CutKind::Uncut) continue;
        for (int k = 0; k < 3; ++k) {
            if (classes[p].edge_t[k]) {
                mesh.set_edge_param(mesh.patches()[p].e[k], *classes[p].edge_t[k], EdgeLock::InterfaceLocked);
            }
        }
    }
    ResolveReport report;
    for (std::size_t p = 0; p < classes.size(); ++p) {
        const Classification& c = classes[p];
        if (c.cut.kind == CutKind::Uncut) continue;
        const PatchParams want = requested_params(strategy, c);
        const std::array<double, 3> local_want{want.s, want.r, 1.0 - want.q};
        for (int k = 0; k < 3; ++k) {
            if (c.local_t[k]) continue;
            const std::size_t e = mesh.patches()[p].e[k];
            const double t = mesh.to_edge_param(p, k, local_want[k]);
            const Edge& edge = mesh.edges()[e];
            if (edge.lock == EdgeLock::Free) {
                mesh.set_edge_param(e, t, EdgeLock::StrategySet);
            } else if (edge.t != t) {
                report.conflicts.push_back({p, e, edge.t, t});
            }
        }
    }
    return report;
}

const Topology& subtriangle_topology(const CutClass& cut) {
    // The inner triangle of A starts at P4 so that the three points of the
    // degree-2 rule land in the order of the worked quadrature example.
    static const Topology config_a{{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {4, 5, 3}}};
    static const Topology config_b{{{0, 4, 5}, {0, 3, 4}, {3, 1, 4}, {5, 4, 2}}};
    static const Topology config_c{{{0, 3, 5}, {3, 1, 5}, {5, 1, 4}, {5, 4, 2}}};
    static const Topology config_d{{{0, 3, 5}, {5, 3, 2}, {3, 4, 2}, {3, 1, 4}}};
    if (cut.kind != CutKind::VertexEdge) return config_a;
    switch (cut.vertex) {
        case 0: return config_b;
        case 1: return config_c;
        default: return config_d;
    }
}

std::array<Triangle2, 4> subtriangles(const LocalNodes& nodes, const Topology& topology) {
    std::array<Triangle2, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i] = {{nodes.p[topology[i][0]], nodes.p[topology[i][1]], nodes.p[topology[i][2]]}};
    }
    return out;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

Side side_of_value(double phi, double tol) {
    if (std::abs(phi) <= tol) return Side::Omega2;
    return phi < 0.0 ? Side::Omega1 : Side::Omega2;
}

Side other(Side s) { return s == Side::Omega1 ? Side::Omega2 : Side::Omega1; }

}  // namespace

std::array<Side, 4> side_labels(const LocalNodes& nodes, const CutClass& cut, const LevelSet& ls) {
    const Topology& topo = subtriangle_topology(cut);
    const auto tris = subtriangles(nodes, topo);
    const Triangle2 macro = nodes.macro();
    const double scale =
        std::max({norm(macro.v[1] - macro.v[0]), norm(macro.v[2] - macro.v[1]), norm(macro.v[0] - macro.v[2])});
    const double tol = kSnapTolerance * scale;
    std::array<Side, 4> sides{};
    if (cut.kind == CutKind::Uncut) {
        for (int i = 0; i < 4; ++i) sides[i] = side_of_value(ls(tris[i].centroid()), tol);
        return sides;
    }
    // Split along the straight segment between the two cut points; the
    // vertex farthest from the interface fixes which half is which.
    const auto ends = cut.interface_nodes();
    const Point2 a = nodes.p[ends[0]];
    const Point2 dir = nodes.p[ends[1]] - a;
    int ref = 0;
    double ref_phi = ls(macro.v[0]);
    for (int k = 1; k < 3; ++k) {
        const double phi = ls(macro.v[k]);
        if (std::abs(phi) > std::abs(ref_phi)) {
            ref = k;
            ref_phi = phi;
        }
    }
    const int ref_side = sign_of(cross(dir, macro.v[ref] - a));
    const Side ref_label = ref_phi < 0.0 ? Side::Omega1 : Side::Omega2;
    for (int i = 0; i < 4; ++i) {
        const int s = sign_of(cross(dir, tris[i].centroid() - a));
        sides[i] = s == ref_side ? ref_label : other(ref_label);
    }
    return sides;
}

std::vector<Classification> classify_all(const PatchMesh& mesh, const LevelSet& ls) {
    const auto n = static_cast<std::ptrdiff_t>(mesh.num_patches());
    std::vector<Classification> classes(mesh.num_patches());
    std::vector<std::exception_ptr> errors(mesh.num_patches());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
        try {
            classes[p] = classify_patch(mesh, static_cast<std::size_t>(p), ls);
        } catch (...) {
            errors[p] = std::current_exception();
        }
    }
    // Report the lowest offending patch, independent of thread count.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return classes;
}

std::vector<PatchConfig> build_configs(const PatchMesh& mesh, std::span<const Classification> classes,
                                       const LevelSet& ls) {
    std::vector<PatchConfig> configs(mesh.num_patches());
    const auto n = static_cast<std::ptrdiff_t>(mesh.num_patches());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto p = static_cast<std::size_t>(i);
        PatchConfig& cfg = configs[p];
        cfg.cut = classes[p].cut;
        cfg.params = mesh.params(p);
        cfg.topology = subtriangle_topology(cfg.cut);
        cfg.sides = side_labels(local_nodes(mesh, p), cfg.cut, ls);
    }
    return configs;
}

Adaptation adapt(PatchMesh& mesh, const LevelSet& ls, Strategy strategy) {
    Adaptation result;
    result.classes = classify_all(mesh, ls);
    result.report = resolve_edge_params(mesh, result.classes, strategy);
    result.configs = build_configs(mesh, result.classes, ls);
    return result;
}

std::vector<PatchConfig> uniform_configs(PatchMesh& mesh, const LevelSet& ls) {
    mesh.reset_edge_params();
    const std::vector<Classification> none(mesh.num_patches());
    return build_configs(mesh, none, ls);
}

std::array<double, 3> angle_cosines_two_edges(double q, double r, double s) {
    const double l_45 = std::sqrt((q - r) * (q - r) + (r - 1.0) * (r - 1.0));
    const double l_34 = std::sqrt((1.0 - r - s) * (1.0 - r - s) + r * r);
    const double l_35 = std::sqrt(s * s + q * q);
    return {((1.0 - r) * (1.0 - r - s) + r * (r - q)) / (l_45 * l_34),
            (s * (1.0 - r) + q * (q - r)) / (l_45 * l_35),
            (s * (s - 1.0 + r) + r * q) / (l_34 * l_35)};
}

std::array<double, 6> angle_cosines_vertex_edge(VertexCase which, double q, double r, double s) {
    const double sq2 = std::sqrt(2.0);
    if (which == VertexCase::LowerLeft) {
        const double l_04 = std::sqrt((1.0 - r) * (1.0 - r) + r * r);
        const double l_45 = std::sqrt((1.0 - r) * (1.0 - r) + (r - q) * (r - q));
        const double l_34 = std::sqrt(r * r + (s - 1.0 + r) * (s - 1.0 + r));
        return {(q - r) / l_45,
                r / l_04,
                ((1.0 - r) * (1.0 - r) + r * (r - q)) / (l_04 * l_45),
                (1.0 - r) / l_04,
                (s - 1.0 + r) / l_34,
                ((1.0 - r) * (1.0 - r - s) + r * r) / (l_04 * l_34)};
    }
    const double l_15 = std::sqrt(1.0 + q * q);
    const double l_35 = std::sqrt(s * s + q * q);
    const double l_45 = std::sqrt((1.0 - r) * (1.0 - r) + (r - q) * (r - q));
    return {-s / l_35,
            1.0 / l_15,
            (s + q * q) / (l_15 * l_35),
            (1.0 + q) / (sq2 * l_15),
            // (P1 - P5) . (P4 - P5) = (1-r) + q(q-r)
            ((1.0 - r) + q * (q - r)) / (l_15 * l_45),
            (2.0 * r - 1.0 - q) / (sq2 * l_45)};
}

std::array<Triangle2, 4> reference_subtriangles(const CutClass& cut, const PatchParams& params) {
    return subtriangles(local_nodes(kReferenceTriangle, params), subtriangle_topology(cut));
}

double reference_max_angle(const CutClass& cut, const PatchParams& params) {
    double m = 0.0;
    for (const auto& t : reference_subtriangles(cut, params)) m = std::max(m, max_interior_angle(t));
    return m;
}

AngleAudit max_angle_audit(const PatchMesh& mesh, std::span<const PatchConfig> configs) {
    AngleAudit audit;
    audit.patches.resize(configs.size());
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto p = static_cast<std::size_t>(i);
        PatchAngleRecord& rec = audit.patches[p];
        rec.patch_id = p;
        rec.cut = configs[p].cut;
        rec.params = configs[p].params;
        for (const auto& t : subtriangles(local_nodes(mesh, p), configs[p].topology)) {
            rec.max_angle_deg = std::max(rec.max_angle_deg, max_interior_angle(t));
        }
        rec.reference_max_angle_deg = reference_max_angle(rec.cut, rec.params);
    }
    for (const auto& rec : audit.patches) {
        audit.global_max_deg = std::max(audit.global_max_deg, rec.max_angle_deg);
        audit.reference_global_max_deg = std::max(audit.reference_global_max_deg, rec.reference_max_angle_deg);
        const auto bin = std::min<std::size_t>(17, static_cast<std::size_t>(rec.max_angle_deg / 10.0));
        ++audit.histogram[bin];
    }
    return audit;
}

void write_angle_csv(std::ostream& out, const AngleAudit& audit) {
    out << "patch_id,cut_class,q,r,s,max_angle_deg\n";
    for (const auto& rec : audit.patches) {
        out << rec.patch_id << ',' << to_string(rec.cut) << ',' << format_double(rec.params.q) << ','
            << format_double(rec.params.r) << ',' << format_double(rec.params.s) << ','
            << format_double(rec.max_angle_deg) << '\n';
    }
}

}  // namespace patchfem
