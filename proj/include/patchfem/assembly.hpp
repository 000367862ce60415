#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "patchfem/adaptation.hpp"
#include "patchfem/geometry.hpp"
#include "patchfem/mesh.hpp"
#include "patchfem/problems.hpp"
#include "patchfem/sparse.hpp"

namespace patchfem {

/// One unknown per mesh vertex followed by one per edge node.
struct DofMap {
    std::size_t num_vertices = 0;
    std::size_t num_dofs = 0;
    std::vector<bool> boundary;
    std::vector<Point2> positions;
    /// Local node order P0..P5 of LocalNodes.
    std::vector<std::array<std::size_t, 6>> patch_dofs;

    static DofMap build(const PatchMesh& mesh);
};

struct LinearSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    /// Prescribed boundary values; their rows and columns are eliminated.
    std::vector<std::pair<std::size_t, double>> dirichlet;
    std::size_t num_free = 0;
};

struct SubQuadrature {
    Triangle2 triangle;
    std::vector<Point2> points;
    std::vector<double> weights;
    Side side = Side::Omega2;
};

/// Composite rule over the four subtriangles of one patch.
struct PatchQuadrature {
    std::array<SubQuadrature, 4> sub;

    double total_weight() const;
};

/// Maps `base` onto each subtriangle through the reference configuration and
/// the macro element map; weights scale with |det| of the composed map.
PatchQuadrature patch_quadrature(const LocalNodes& nodes, const Topology& topology,
                                 const std::array<Side, 4>& sides, const QuadRule& base);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// kappa * area * grad(lambda_a) . grad(lambda_b)
Mat3 local_stiffness(const Triangle2& tri, double kappa);

std::array<double, 3> barycentric(const Triangle2& tri, Point2 x);

/// Entries sum_q w_q f(x_q) lambda_a(x_q).
std::array<double, 3> local_load(const SubQuadrature& quad, const std::function<double(Point2)>& f);

enum class Mode { Adapted, Baseline };

const char* to_string(Mode mode);

/// Per-patch dense contribution in local node order P0..P5.
struct PatchContribution {
    std::array<std::array<double, 6>, 6> stiffness{};
    std::array<double, 6> load{};
};

/// Adapted: constant kappa per subtriangle from its side label. Baseline:
/// kappa sampled at quadrature points from the true level set, so the mesh
/// ignores the interface.
PatchContribution patch_contribution(const PatchMesh& mesh, const PatchConfig& config, std::size_t patch_id,
                                     const ProblemSpec& problem, Mode mode);

/// Global system with boundary values from the analytic solution, eliminated
/// symmetrically. Throws EmptySystem when no free unknown remains.
LinearSystem assemble(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                      Mode mode);

/// Analytic solution at every vertex and edge node.
std::vector<double> interpolate_nodal(const ProblemSpec& problem, const PatchMesh& mesh);

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};

/// Squared error contributions of one patch, degree-5 rule per subtriangle;
/// the analytic branch is picked by the true level set at each point.
ErrorNorms patch_error_squared(const PatchMesh& mesh, const PatchConfig& config, std::size_t patch_id,
                               const ProblemSpec& problem, std::span<const double> uh);

ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh);

}  // namespace patchfem
