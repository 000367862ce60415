#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "patchfem/adaptation.hpp"
#include "patchfem/errors.hpp"

using namespace patchfem;

namespace {

PatchMesh single_patch(Point2 a, Point2 b, Point2 c) { return PatchMesh::from_triangles({a, b, c}, {{0, 1, 2}}); }

const LevelSet kCircle{Circle{{0, 0}, 0.5}};

std::vector<CutClass> all_cut_cases() {
    return {CutClass::edge_edge(0, 1), CutClass::edge_edge(0, 2), CutClass::edge_edge(1, 2),
            CutClass::vertex_edge(0), CutClass::vertex_edge(1), CutClass::vertex_edge(2)};
}

// Which side of the line a->b the point lies on: +1, -1 or 0.
int side_of(Point2 a, Point2 b, Point2 p) {
    const double c = cross(b - a, p - a);
    return c > 1e-14 ? 1 : (c < -1e-14 ? -1 : 0);
}

}  // namespace

TEST(Classify, FarPatchIsUncut) {
    const PatchMesh m = single_patch({0.8, 0.8}, {0.9, 0.8}, {0.8, 0.9});
    EXPECT_EQ(classify_patch(m, 0, kCircle).cut.kind, CutKind::Uncut);
}

TEST(Classify, EdgeEdgeExample) {
    const PatchMesh m = single_patch({0.4, 0}, {0.6, 0}, {0.4, 0.2});
    const Classification c = classify_patch(m, 0, kCircle);
    EXPECT_EQ(c.cut, CutClass::edge_edge(0, 1));
    ASSERT_TRUE(c.local_t[0].has_value());
    ASSERT_TRUE(c.local_t[1].has_value());
    EXPECT_FALSE(c.local_t[2].has_value());
    EXPECT_NEAR(*c.local_t[0], 0.5, 1e-14);
    // Edge 1 from (0.6,0) to (0.4,0.2): |x| = 1/2 solved by hand.
    const double t = *c.local_t[1];
    const Point2 x = (1 - t) * Point2{0.6, 0} + t * Point2{0.4, 0.2};
    EXPECT_NEAR(norm(x), 0.5, 1e-14);
}

TEST(Classify, VertexEdgeExample) {
    const PatchMesh m = single_patch({0.5, 0}, {0.6, 0.3}, {0.2, 0.1});
    const Classification c = classify_patch(m, 0, kCircle);
    EXPECT_EQ(c.cut, CutClass::vertex_edge(0));
    EXPECT_EQ(c.cut.cut_edge(), 1);
    EXPECT_TRUE(c.vertex_hit[0]);
    EXPECT_TRUE(c.local_t[1].has_value());
}

TEST(Classify, TwoVerticesOnInterfaceIsUncut) {
    const PatchMesh m = single_patch({-1, 0}, {1, 0}, {0, 1});
    EXPECT_EQ(classify_patch(m, 0, LevelSet(HorizontalLine{0.0})).cut.kind, CutKind::Uncut);
}

TEST(Classify, DoubleCrossingRequiresRefinement) {
    const PatchMesh m = single_patch({-0.6, 0.3}, {0.6, 0.3}, {0, 1});
    try {
        classify_patch(m, 0, kCircle);
        FAIL() << "expected RefinementRequired";
    } catch (const RefinementRequired& e) {
        EXPECT_EQ(e.patch_id(), 0u);
    }
}

TEST(Classify, ClassifyAllReportsLowestOffendingPatch) {
    const PatchMesh m = PatchMesh::from_triangles({{2, 2}, {3, 2}, {2, 3}, {-0.6, 0.3}, {0.6, 0.3}, {0, 1}},
                                                  {{0, 1, 2}, {3, 4, 5}});
    try {
        classify_all(m, kCircle);
        FAIL() << "expected RefinementRequired";
    } catch (const RefinementRequired& e) {
        EXPECT_EQ(e.patch_id(), 1u);
    }
}

TEST(CutClassText, Formats) {
    EXPECT_EQ(to_string(CutClass::uncut()), "uncut");
    EXPECT_EQ(to_string(CutClass::edge_edge(2, 0)), "edge-edge:0-2");
    EXPECT_EQ(to_string(CutClass::vertex_edge(1)), "vertex-edge:1");
}

TEST(DeterminedParams, LocalEdgeConventions) {
    Classification c;
    c.cut = CutClass::edge_edge(0, 1);
    c.local_t[0] = 0.5;
    c.local_t[1] = 0.3;
    PartialParams p = determined_params(c);
    EXPECT_EQ(p.s, 0.5);
    EXPECT_EQ(p.r, 0.3);
    EXPECT_FALSE(p.q.has_value());

    // Edge 2 runs v2 -> v0 while q is measured from v0 towards v2.
    Classification d;
    d.cut = CutClass::edge_edge(1, 2);
    d.local_t[1] = 0.6;
    d.local_t[2] = 0.25;
    p = determined_params(d);
    EXPECT_EQ(p.r, 0.6);
    EXPECT_EQ(p.q, 0.75);
    EXPECT_FALSE(p.s.has_value());
}

TEST(DeterminedParams, ParamsReproduceCrossingPoint) {
    // A mesh-level check that the determined q places P5 on the crossing.
    const PatchMesh m = single_patch({0.45, 0.3}, {0.2, 0.1}, {0.5, 0.1});
    const Classification c = classify_patch(m, 0, kCircle);
    ASSERT_EQ(c.cut.kind, CutKind::EdgeEdge);
    const PartialParams fixed = determined_params(c);
    const LocalNodes nodes = local_nodes(m.patch_triangle(0), free_params_two_edges(Strategy::Midpoint, fixed));
    for (int node : c.cut.interface_nodes()) EXPECT_NEAR(kCircle(nodes.p[node]), 0.0, 1e-14);
}

TEST(FreeParamsTwoEdges, MidpointStrategy) {
    const PatchParams p = free_params_two_edges(Strategy::Midpoint, PartialParams{0.7, 0.9, std::nullopt});
    EXPECT_EQ(p.s, 0.5);
    EXPECT_EQ(p.q, 0.7);
    EXPECT_EQ(p.r, 0.9);
}

TEST(FreeParamsTwoEdges, FormulasWhenAppliedEverywhere) {
    const auto always = StrategyScope::Always;
    EXPECT_NEAR(free_params_two_edges(Strategy::Complement, {0.7, 0.9, std::nullopt}, always).s, 0.1, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Product, {0.8, std::nullopt, 0.3}, always).r, 0.14, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Complement, {std::nullopt, 0.6, 0.2}, always).q, 0.2, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Product, {std::nullopt, 0.6, 0.2}, always).q, 0.08, 1e-15);
}

TEST(FreeParamsTwoEdges, RegimeRestricted) {
    // Outside the regime the free parameter stays at 1/2.
    EXPECT_EQ(free_params_two_edges(Strategy::Complement, {0.7, 0.9, std::nullopt}).s, 0.5);
    EXPECT_EQ(free_params_two_edges(Strategy::Product, {0.8, std::nullopt, 0.3}).r, 0.5);
    // Inside it the formulas apply.
    EXPECT_NEAR(free_params_two_edges(Strategy::Complement, {0.7, std::nullopt, 0.8}).r, 0.2, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Product, {0.7, std::nullopt, 0.8}).r, 0.06, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Complement, {std::nullopt, 0.8, 0.3}).q, 0.3, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Product, {std::nullopt, 0.8, 0.3}).q, 0.06, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Complement, {0.2, 0.3, std::nullopt}).s, 0.7, 1e-15);
    EXPECT_NEAR(free_params_two_edges(Strategy::Product, {0.2, 0.3, std::nullopt}).s, 0.06, 1e-15);
}

TEST(FreeParamsTwoEdges, RequiresTwoFixed) {
    EXPECT_THROW(free_params_two_edges(Strategy::Complement, {0.5, std::nullopt, std::nullopt}),
                 std::invalid_argument);
}

TEST(FreeParamsVertexEdge, CaseTable) {
    PatchParams p = free_params_vertex_edge(Strategy::Complement, {std::nullopt, 0.8, std::nullopt});
    EXPECT_EQ(p.q, 0.8);
    EXPECT_EQ(p.s, 0.5);
    p = free_params_vertex_edge(Strategy::Product, {std::nullopt, 0.3, std::nullopt});
    EXPECT_EQ(p.q, 0.5);
    EXPECT_NEAR(p.s, 0.7, 1e-15);
    p = free_params_vertex_edge(Strategy::Midpoint, {0.9, std::nullopt, std::nullopt});
    EXPECT_EQ(p.r, 0.5);
    EXPECT_EQ(p.s, 0.5);
    p = free_params_vertex_edge(Strategy::Complement, {0.9, std::nullopt, std::nullopt});
    EXPECT_EQ(p.r, 0.9);
    EXPECT_EQ(p.s, 0.5);
    p = free_params_vertex_edge(Strategy::Complement, {0.2, std::nullopt, std::nullopt});
    EXPECT_EQ(p.r, 0.5);
    EXPECT_EQ(p.s, 0.2);
    p = free_params_vertex_edge(Strategy::Complement, {std::nullopt, std::nullopt, 0.7});
    EXPECT_NEAR(p.r, 0.3, 1e-15);
    EXPECT_EQ(p.q, 0.5);
    p = free_params_vertex_edge(Strategy::Complement, {std::nullopt, std::nullopt, 0.4});
    EXPECT_EQ(p.r, 0.5);
    EXPECT_EQ(p.q, 0.4);
}

TEST(StrategyParsing, AcceptsOneToThree) {
    EXPECT_EQ(strategy_from_int(1), Strategy::Midpoint);
    EXPECT_EQ(strategy_from_int(3), Strategy::Product);
    EXPECT_EQ(to_int(Strategy::Complement), 2);
    EXPECT_THROW(strategy_from_int(4), std::invalid_argument);
    EXPECT_THROW(strategy_from_int(0), std::invalid_argument);
}

TEST(ResolveEdgeParams, NoCutLeavesMidpoints) {
    PatchMesh m = build_structured_mesh(4);
    const auto classes = classify_all(m, LevelSet(Circle{{5, 5}, 0.5}));
    const ResolveReport report = resolve_edge_params(m, classes, Strategy::Product);
    EXPECT_TRUE(report.conflicts.empty());
    for (const Edge& e : m.edges()) {
        EXPECT_EQ(e.t, 0.5);
        EXPECT_EQ(e.lock, EdgeLock::Free);
    }
}

TEST(ResolveEdgeParams, InterfaceNodesLieOnInterface) {
    PatchMesh m = build_structured_mesh(16);
    const auto classes = classify_all(m, kCircle);
    resolve_edge_params(m, classes, Strategy::Complement);
    int locked = 0;
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
        if (m.edges()[e].lock == EdgeLock::InterfaceLocked) {
            ++locked;
            EXPECT_NEAR(kCircle(m.edge_node(e)), 0.0, 1e-14);
        }
    }
    EXPECT_GT(locked, 0);
}

TEST(ResolveEdgeParams, LowerPatchWinsSharedFreeEdge) {
    // Two patches share the edge p-q, which lies inside the circle; each
    // patch is cut through its two other edges and wants to move p-q.
    const Point2 p{-0.2, 0.0}, q{0.25, 0.0}, a{0.99, -1.17}, b{-0.74, 1.3};
    PatchMesh m = PatchMesh::from_triangles({p, q, a, b}, {{0, 2, 1}, {0, 1, 3}});
    const auto classes = classify_all(m, kCircle);
    ASSERT_EQ(classes[0].cut, CutClass::edge_edge(0, 1));
    ASSERT_EQ(classes[1].cut, CutClass::edge_edge(1, 2));

    const auto shared = m.patches()[0].e[2];
    ASSERT_EQ(shared, m.patches()[1].e[0]);
    const PatchParams want0 = requested_params(Strategy::Complement, classes[0]);
    const PatchParams want1 = requested_params(Strategy::Complement, classes[1]);
    const double t0 = m.to_edge_param(0, 2, 1.0 - want0.q);
    const double t1 = m.to_edge_param(1, 0, want1.s);
    ASSERT_NE(t0, t1) << "setup must make the two requests differ";

    const ResolveReport report = resolve_edge_params(m, classes, Strategy::Complement);
    EXPECT_EQ(m.edges()[shared].t, t0);
    EXPECT_EQ(m.edges()[shared].lock, EdgeLock::StrategySet);
    ASSERT_EQ(report.conflicts.size(), 1u);
    EXPECT_EQ(report.conflicts[0].patch_id, 1u);
    EXPECT_EQ(report.conflicts[0].edge_id, shared);
    EXPECT_EQ(report.conflicts[0].kept, t0);
    EXPECT_EQ(report.conflicts[0].wanted, t1);
}

TEST(ResolveEdgeParams, Idempotent) {
    for (int s = 1; s <= 3; ++s) {
        PatchMesh m = build_structured_mesh(32);
        const auto classes = classify_all(m, kCircle);
        resolve_edge_params(m, classes, strategy_from_int(s));
        const auto first = m.edges();
        resolve_edge_params(m, classes, strategy_from_int(s));
        for (std::size_t e = 0; e < first.size(); ++e) {
            EXPECT_EQ(first[e].t, m.edges()[e].t);
            EXPECT_EQ(first[e].lock, m.edges()[e].lock);
        }
    }
}

TEST(Topology, UniformSubdivisionIsCongruent) {
    const auto tris = subtriangles(local_nodes(kReferenceTriangle, {}), subtriangle_topology(CutClass::uncut()));
    for (const auto& t : tris) {
        EXPECT_NEAR(triangle_area(t), 0.125, 1e-16);
        const auto a = interior_angles(t);
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_NEAR(sorted[0], 45.0, 1e-12);
        EXPECT_NEAR(sorted[1], 45.0, 1e-12);
        EXPECT_NEAR(sorted[2], 90.0, 1e-12);
    }
}

TEST(Topology, TilesPatchForRandomParams) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
    const CutClass cases[] = {CutClass::uncut(), CutClass::vertex_edge(0), CutClass::vertex_edge(1),
                              CutClass::vertex_edge(2)};
    for (int it = 0; it < 10000; ++it) {
        const Triangle2 macro = oracle::random_triangle(rng);
        const PatchParams params{u(rng), u(rng), u(rng)};
        const LocalNodes nodes = local_nodes(macro, params);
        const double area = triangle_area(macro);
        for (const CutClass& c : cases) {
            double sum = 0.0;
            for (const auto& t : subtriangles(nodes, subtriangle_topology(c))) {
                const double a = oracle::shoelace(t);
                EXPECT_GT(a, 0.0);
                sum += a;
            }
            EXPECT_NEAR(sum, area, 1e-12 * area);
        }
    }
}

TEST(Topology, InterfaceSegmentIsASubtriangleEdge) {
    for (const CutClass& c : all_cut_cases()) {
        const auto ends = c.interface_nodes();
        const Topology& topo = subtriangle_topology(c);
        int sharing = 0;
        for (const auto& tri : topo) {
            const bool has0 = std::find(tri.begin(), tri.end(), ends[0]) != tri.end();
            const bool has1 = std::find(tri.begin(), tri.end(), ends[1]) != tri.end();
            if (has0 && has1) ++sharing;
        }
        EXPECT_EQ(sharing, 2) << to_string(c);
    }
}

TEST(Topology, ExampleSeparations) {
    // Edges 1 and 2 cut: nodes 4 and 5; T2 alone on the vertex-2 side.
    const PatchParams mid{};
    const LocalNodes n = local_nodes(kReferenceTriangle, mid);
    {
        const auto tris = subtriangles(n, subtriangle_topology(CutClass::edge_edge(1, 2)));
        const int s2 = side_of(n.p[5], n.p[4], tris[2].centroid());
        for (int i : {0, 1, 3}) EXPECT_EQ(side_of(n.p[5], n.p[4], tris[i].centroid()), -s2);
    }
    {
        const auto tris = subtriangles(n, subtriangle_topology(CutClass::vertex_edge(0)));
        const int s0 = side_of(n.p[0], n.p[4], tris[0].centroid());
        EXPECT_EQ(side_of(n.p[0], n.p[4], tris[3].centroid()), s0);
        EXPECT_EQ(side_of(n.p[0], n.p[4], tris[1].centroid()), -s0);
        EXPECT_EQ(side_of(n.p[0], n.p[4], tris[2].centroid()), -s0);
    }
}

TEST(SideLabels, UncutInsideCircle) {
    const LocalNodes n = local_nodes(oracle::tri({0, 0}, {0.1, 0}, {0, 0.1}), {});
    for (Side s : side_labels(n, CutClass::uncut(), kCircle)) EXPECT_EQ(s, Side::Omega1);
}

TEST(SideLabels, EdgeEdgeCutGivesVertexTwoItsSide) {
    // Horizontal interface through the upper half of the reference patch.
    const LevelSet ls(HorizontalLine{0.6});
    const PatchParams params{0.6, 0.6, 0.5};
    const LocalNodes n = local_nodes(kReferenceTriangle, params);
    const auto sides = side_labels(n, CutClass::edge_edge(1, 2), ls);
    EXPECT_EQ(sides[2], Side::Omega2);
    EXPECT_EQ(sides[0], Side::Omega1);
    EXPECT_EQ(sides[1], Side::Omega1);
    EXPECT_EQ(sides[3], Side::Omega1);
}

TEST(SideLabels, CutPatchesOfAdaptedCircleMeshAreConsistent) {
    for (int s = 1; s <= 3; ++s) {
        PatchMesh m = build_structured_mesh(32);
        const Adaptation ad = adapt(m, kCircle, strategy_from_int(s));
        int cut = 0;
        for (std::size_t p = 0; p < m.num_patches(); ++p) {
            const PatchConfig& cfg = ad.configs[p];
            const LocalNodes nodes = local_nodes(m, p);
            const auto tris = subtriangles(nodes, cfg.topology);
            if (cfg.cut.kind == CutKind::Uncut) {
                for (int i = 0; i < 4; ++i) {
                    EXPECT_EQ(cfg.sides[i], kCircle(tris[i].centroid()) < 0 ? Side::Omega1 : Side::Omega2);
                }
                continue;
            }
            ++cut;
            const auto ends = cfg.cut.interface_nodes();
            const Point2 a = nodes.p[ends[0]], b = nodes.p[ends[1]];
            // Interface alignment: both ends are subtriangle vertices, the
            // midpoint lies on a subtriangle edge.
            const Point2 mid = 0.5 * (a + b);
            bool on_edge = false;
            for (const auto& t : tris) {
                for (int k = 0; k < 3; ++k) {
                    const Point2 u = t.v[k], v = t.v[(k + 1) % 3];
                    if (std::abs(cross(v - u, mid - u)) <= 1e-12 * norm(v - u) * norm(v - u) &&
                        dot(mid - u, v - u) >= 0 && dot(mid - v, u - v) >= 0) {
                        on_edge = true;
                    }
                }
            }
            EXPECT_TRUE(on_edge) << "patch " << p;
            std::map<int, Side> label_of_side;
            for (int i = 0; i < 4; ++i) {
                const int side = side_of(a, b, tris[i].centroid());
                ASSERT_NE(side, 0);
                const auto [it, inserted] = label_of_side.emplace(side, cfg.sides[i]);
                if (!inserted) EXPECT_EQ(it->second, cfg.sides[i]) << "patch " << p;
            }
            ASSERT_EQ(label_of_side.size(), 2u);
            EXPECT_NE(label_of_side[1], label_of_side[-1]);
            // The label agrees with phi at the vertex farthest from the interface.
            int far = 0;
            for (int k = 1; k < 3; ++k) {
                if (std::abs(kCircle(nodes.p[k])) > std::abs(kCircle(nodes.p[far]))) far = k;
            }
            EXPECT_EQ(label_of_side[side_of(a, b, nodes.p[far])],
                      kCircle(nodes.p[far]) < 0 ? Side::Omega1 : Side::Omega2);
        }
        EXPECT_GT(cut, 0);
    }
}

TEST(AngleCosines, TwoEdgeMidpointValues) {
    const auto c = angle_cosines_two_edges(0.5, 0.5, 0.5);
    EXPECT_NEAR(c[0], 0.0, 1e-15);
    EXPECT_NEAR(c[1], 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c[2], 1 / std::sqrt(2.0), 1e-15);
    EXPECT_GE(angle_cosines_two_edges(0.9, 0.1, 0.9)[0], -1 / std::sqrt(2.0));
}

TEST(AngleCosines, TwoEdgeMatchGeometry) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(1e-3, 1 - 1e-3);
    for (int it = 0; it < 10000; ++it) {
        const double q = u(rng), r = u(rng), s = u(rng);
        const Point2 p3{s, 0}, p4{1 - r, r}, p5{0, q};
        const auto c = angle_cosines_two_edges(q, r, s);
        EXPECT_NEAR(c[0], oracle::cosine_at(p4, p5, p3), 1e-12);
        EXPECT_NEAR(c[1], oracle::cosine_at(p5, p4, p3), 1e-12);
        EXPECT_NEAR(c[2], oracle::cosine_at(p3, p4, p5), 1e-12);
    }
}

TEST(AngleCosines, VertexEdgeExamples) {
    EXPECT_NEAR(angle_cosines_vertex_edge(VertexCase::LowerLeft, 0.3, 0.5, 0.7)[1], 1 / std::sqrt(2.0), 1e-15);
    // With s = 1/2, the only value used when q is the fixed parameter.
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(1e-3, 1 - 1e-3);
    for (int it = 0; it < 1000; ++it) {
        EXPECT_GE(angle_cosines_vertex_edge(VertexCase::LowerRight, u(rng), u(rng), 0.5)[2],
                  1 / std::sqrt(2.0) - 1e-15);
    }
}

TEST(AngleCosines, VertexEdgeMatchGeometry) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1e-3, 1 - 1e-3);
    for (int it = 0; it < 10000; ++it) {
        const double q = u(rng), r = u(rng), s = u(rng);
        const Point2 p0{0, 0}, p1{1, 0}, p3{s, 0}, p4{1 - r, r}, p5{0, q};
        const auto ll = angle_cosines_vertex_edge(VertexCase::LowerLeft, q, r, s);
        EXPECT_NEAR(ll[0], oracle::cosine_at(p5, p0, p4), 1e-12);
        EXPECT_NEAR(ll[1], oracle::cosine_at(p0, p4, p5), 1e-12);
        EXPECT_NEAR(ll[2], oracle::cosine_at(p4, p5, p0), 1e-12);
        EXPECT_NEAR(ll[3], oracle::cosine_at(p0, p3, p4), 1e-12);
        EXPECT_NEAR(ll[4], oracle::cosine_at(p3, p4, p0), 1e-12);
        EXPECT_NEAR(ll[5], oracle::cosine_at(p4, p0, p3), 1e-12);
        const auto lr = angle_cosines_vertex_edge(VertexCase::LowerRight, q, r, s);
        EXPECT_NEAR(lr[0], oracle::cosine_at(p3, p1, p5), 1e-12);
        EXPECT_NEAR(lr[1], oracle::cosine_at(p1, p5, p3), 1e-12);
        EXPECT_NEAR(lr[2], oracle::cosine_at(p5, p3, p1), 1e-12);
        EXPECT_NEAR(lr[3], oracle::cosine_at(p1, p4, p5), 1e-12);
        EXPECT_NEAR(lr[4], oracle::cosine_at(p5, p1, p4), 1e-12);
        EXPECT_NEAR(lr[5], oracle::cosine_at(p4, p5, p1), 1e-12);
    }
}

TEST(AngleCosines, Beta4WithSwappedDifferenceIsNotAnAngle) {
    // The variant (1-r) + q(r-q) in the numerator disagrees with geometry.
    const double q = 0.3, r = 0.6;
    const double variant = ((1 - r) + q * (r - q)) /
                           (std::sqrt(1 + q * q) * std::sqrt((1 - r) * (1 - r) + (r - q) * (r - q)));
    const double library = angle_cosines_vertex_edge(VertexCase::LowerRight, q, r, 0.5)[4];
    const double geometric = oracle::cosine_at({0, q}, {1, 0}, {1 - r, r});
    EXPECT_NEAR(library, geometric, 1e-14);
    EXPECT_GT(std::abs(variant - geometric), 1e-2);
}

TEST(MaxAngle, UniformMeshIsNinetyDegrees) {
    PatchMesh m = build_structured_mesh(8);
    const auto configs = uniform_configs(m, kCircle);
    const AngleAudit audit = max_angle_audit(m, configs);
    EXPECT_NEAR(audit.global_max_deg, 90.0, 1e-10);
    EXPECT_NEAR(audit.reference_global_max_deg, 90.0, 1e-10);
    std::size_t total = 0;
    for (auto c : audit.histogram) total += c;
    EXPECT_EQ(total, m.num_patches());
}

TEST(MaxAngle, UnadjustedThinCutApproachesStraightAngle) {
    const double a = reference_max_angle(CutClass::edge_edge(1, 2), PatchParams{1e-4, 1e-4, 0.5});
    EXPECT_GT(a, 179.0);
}

TEST(MaxAngle, BoundHoldsForAdjustingStrategies) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(1e-9, 1 - 1e-9);
    for (int it = 0; it < 10000; ++it) {
        const double x = u(rng), y = u(rng);
        for (Strategy st : {Strategy::Complement, Strategy::Product}) {
            EXPECT_LE(reference_max_angle(CutClass::edge_edge(0, 1),
                                          free_params_two_edges(st, {std::nullopt, x, y})),
                      kMaxAngleBoundDeg + 1e-9);
            EXPECT_LE(reference_max_angle(CutClass::edge_edge(0, 2),
                                          free_params_two_edges(st, {x, std::nullopt, y})),
                      kMaxAngleBoundDeg + 1e-9);
            EXPECT_LE(reference_max_angle(CutClass::edge_edge(1, 2),
                                          free_params_two_edges(st, {x, y, std::nullopt})),
                      kMaxAngleBoundDeg + 1e-9);
        }
    }
}

TEST(MaxAngle, FormulasAppliedEverywhereCanViolateBound) {
    // r free, s small: r = 1 - s pushes P4 onto v2 next to P5.
    const PatchParams p =
        free_params_two_edges(Strategy::Complement, {0.05, std::nullopt, 0.01}, StrategyScope::Always);
    EXPECT_GT(reference_max_angle(CutClass::edge_edge(0, 2), p), kMaxAngleBoundDeg);
}

TEST(AngleCsv, HeaderAndRows) {
    PatchMesh m = build_structured_mesh(2);
    const auto configs = uniform_configs(m, kCircle);
    std::ostringstream out;
    write_angle_csv(out, max_angle_audit(m, configs));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "patch_id,cut_class,q,r,s,max_angle_deg");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 8);
}
