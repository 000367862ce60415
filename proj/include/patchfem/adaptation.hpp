#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchfem/levelset.hpp"
#include "patchfem/mesh.hpp"

namespace patchfem {

enum class CutKind { Uncut, EdgeEdge, VertexEdge };

/// How the interface passes through one patch.
struct CutClass {
    CutKind kind = CutKind::Uncut;
    std::array<int, 2> edges{-1, -1};  // EdgeEdge: distinct local edges, ascending
    int vertex = -1;                   // VertexEdge: the local vertex on the interface

    static CutClass uncut() { return {}; }
    static CutClass edge_edge(int a, int b);
    static CutClass vertex_edge(int vertex);

    /// VertexEdge: the local edge opposite the cut vertex.
    int cut_edge() const { return (vertex + 1) % 3; }
    /// Local node indices (0..5) of the two ends of the discrete interface.
    std::array<int, 2> interface_nodes() const;

    friend bool operator==(const CutClass&, const CutClass&) = default;
};

std::string to_string(const CutClass& cut);

/// Result of intersecting one patch with the interface.
struct Classification {
    CutClass cut;
    /// Interior crossing on local edge k, measured from v[k] to v[k+1].
    std::array<std::optional<double>, 3> local_t;
    /// Same crossing in edge storage orientation.
    std::array<std::optional<double>, 3> edge_t;
    std::array<bool, 3> vertex_hit{};
};

/// Throws RefinementRequired for cuts the patch method cannot represent.
Classification classify_patch(const PatchMesh& mesh, std::size_t patch_id, const LevelSet& ls);

enum class Strategy { Midpoint = 1, Complement = 2, Product = 3 };

/// Parses 1, 2, 3; throws std::invalid_argument otherwise.
Strategy strategy_from_int(int value);
int to_int(Strategy s);

struct PartialParams {
    std::optional<double> q, r, s;

    int num_fixed() const { return int(q.has_value()) + int(r.has_value()) + int(s.has_value()); }
};

/// Parameters pinned by the interface crossings of a cut patch.
PartialParams determined_params(const Classification& c);

/// Where the S2/S3 formulas for a free parameter apply. Regime: only while the
/// two fixed values push the interface towards the edge carrying the free
/// node (r free: q, s > 1/2; q free: s < 1/2 < r; s free: q, r < 1/2), 1/2
/// elsewhere. Always: in every two-edge cut.
enum class StrategyScope { Regime, Always };

/// Two edges cut: exactly one of q, r, s is free.
PatchParams free_params_two_edges(Strategy strategy, const PartialParams& fixed,
                                  StrategyScope scope = StrategyScope::Regime);

/// Vertex and opposite edge cut: exactly one of q, r, s is fixed.
PatchParams free_params_vertex_edge(Strategy strategy, const PartialParams& fixed);

/// Full parameter set a cut patch asks for under `strategy`; 1/2 for uncut.
PatchParams requested_params(Strategy strategy, const Classification& c);

struct EdgeConflict {
    std::size_t patch_id = 0;
    std::size_t edge_id = 0;
    double kept = 0.0;    // edge storage orientation
    double wanted = 0.0;  // edge storage orientation
};

struct ResolveReport {
    std::vector<EdgeConflict> conflicts;
};

/// Resets all edge parameters, writes interface crossings, then assigns the
/// strategy's free parameters patch by patch in ascending id. Locked edges
/// are never overwritten; disagreeing requests are reported as conflicts.
ResolveReport resolve_edge_params(PatchMesh& mesh, std::span<const Classification> classes,
                                  Strategy strategy);

/// Four counterclockwise triples over local nodes 0..5.
using Topology = std::array<std::array<int, 3>, 4>;

/// Configuration A for uncut and edge-edge patches; B, C, D for a cut
/// through vertex 0, 1, 2.
const Topology& subtriangle_topology(const CutClass& cut);

enum class Side { Omega1 = 1, Omega2 = 2 };

std::array<Triangle2, 4> subtriangles(const LocalNodes& nodes, const Topology& topology);

/// Subdomain of each subtriangle. Cut patches are split along the discrete
/// interface segment; uncut patches use the sign of phi at each centroid
/// (ties go to Omega2).
std::array<Side, 4> side_labels(const LocalNodes& nodes, const CutClass& cut, const LevelSet& ls);

struct PatchConfig {
    CutClass cut;
    PatchParams params;
    Topology topology{};
    std::array<Side, 4> sides{};
};

struct Adaptation {
    std::vector<Classification> classes;
    std::vector<PatchConfig> configs;
    ResolveReport report;
};

std::vector<Classification> classify_all(const PatchMesh& mesh, const LevelSet& ls);

std::vector<PatchConfig> build_configs(const PatchMesh& mesh, std::span<const Classification> classes,
                                       const LevelSet& ls);

/// classify_all + resolve_edge_params + build_configs.
Adaptation adapt(PatchMesh& mesh, const LevelSet& ls, Strategy strategy);

/// Unfitted layout: midpoint subdivision of every patch regardless of the
/// interface. Resets the mesh's edge parameters.
std::vector<PatchConfig> uniform_configs(PatchMesh& mesh, const LevelSet& ls);

/// Cosines of the inner subtriangle (s,0), (1-r,r), (0,q) of configuration A:
/// {angle at (1-r,r), angle at (0,q), angle at (s,0)}.
std::array<double, 3> angle_cosines_two_edges(double q, double r, double s);

enum class VertexCase { LowerLeft, LowerRight };

/// LowerLeft (configuration B): {a1, b1, g1} are the angles of T0=(0,4,5) at
/// P5, P0, P4 and {a2, b2, g2} those of T1=(0,3,4) at P0, P3, P4.
/// LowerRight (configuration C): {a3, b3, g3} are the angles of T1=(3,1,5) at
/// P3, P1, P5 and {a4, b4, g4} those of T2=(5,1,4) at P1, P5, P4.
std::array<double, 6> angle_cosines_vertex_edge(VertexCase which, double q, double r, double s);

/// Subtriangles of the reference patch for the given cut and parameters.
std::array<Triangle2, 4> reference_subtriangles(const CutClass& cut, const PatchParams& params);
double reference_max_angle(const CutClass& cut, const PatchParams& params);

inline constexpr double kMaxAngleBoundDeg = 162.0;

struct PatchAngleRecord {
    std::size_t patch_id = 0;
    CutClass cut;
    PatchParams params;
    double max_angle_deg = 0.0;            // physical subtriangles
    double reference_max_angle_deg = 0.0;  // reference patch
};

struct AngleAudit {
    std::vector<PatchAngleRecord> patches;
    double global_max_deg = 0.0;
    double reference_global_max_deg = 0.0;
    /// Physical max angle per patch in 10 degree bins.
    std::array<std::size_t, 18> histogram{};
};

AngleAudit max_angle_audit(const PatchMesh& mesh, std::span<const PatchConfig> configs);

/// Columns patch_id,cut_class,q,r,s,max_angle_deg.
void write_angle_csv(std::ostream& out, const AngleAudit& audit);

}  // namespace patchfem
