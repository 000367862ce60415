#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "patchfem/adaptation.hpp"
#include "patchfem/assembly.hpp"
#include "patchfem/mesh.hpp"
#include "patchfem/problems.hpp"

namespace patchfem {

enum class ProblemKind { Circle, Horizontal, Tilted };

/// "circle", "horizontal", "tilted"; throws std::invalid_argument otherwise.
ProblemKind problem_kind_from_string(const std::string& name);
const char* to_string(ProblemKind kind);

struct RunConfig {
    ProblemKind problem = ProblemKind::Circle;
    int n = 16;
    Strategy strategy = Strategy::Complement;
    Mode mode = Mode::Adapted;
    double eps = 0.5;
    double alpha = 0.0;

    /// Throws std::invalid_argument when n < 2, eps outside [0,1] or alpha
    /// outside [0,pi].
    void validate() const;
};

/// The horizontal interface sits at eps * (2/n), one cell width scaled by eps.
ProblemSpec make_problem(const RunConfig& config);

inline constexpr int kMaxRefinementRetries = 3;

struct RunResult {
    RunConfig config;  // n is the resolution actually solved on
    int retries = 0;
    double h = 0.0;    // longest mesh edge
    std::size_t ndofs = 0;
    ErrorNorms errors;
    int cg_iters = 0;
    double max_angle_deg = 0.0;
    PatchMesh mesh;
    std::vector<PatchConfig> configs;
    std::vector<double> solution;
};

/// Mesh, adaptation, assembly, CG and error evaluation. A cut that needs
/// refinement doubles n, at most kMaxRefinementRetries times.
RunResult run_solve(const RunConfig& config);

void write_solve_header(std::ostream& out);
void write_solve_row(std::ostream& out, const RunResult& run);

struct ConvergenceResult {
    std::vector<RunResult> runs;
    std::optional<double> l2_rate;
    std::optional<double> h1_rate;
};

/// Rates are fitted against h when at least two levels are given.
ConvergenceResult run_convergence(const RunConfig& base, std::span<const int> levels);

/// Level rows followed by `problem,mode,strategy,rate,,,L2rate,H1rate,,`.
void write_convergence_csv(std::ostream& out, const ConvergenceResult& result);

enum class SweepParam { Eps, Alpha };

/// Horizontal sweeps eps, tilted sweeps alpha; the circle has no parameter.
SweepParam sweep_param_for(ProblemKind kind);

/// eps in steps of 0.025 on [0,1]; alpha in steps of pi/64 on [0,pi].
std::vector<double> default_sweep_values(SweepParam param);
std::vector<int> default_sweep_levels();
std::vector<int> default_convergence_levels();

struct SweepPoint {
    double value = 0.0;
    int n = 0;
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Cartesian product of values and levels, sorted by (value, n).
std::vector<SweepPoint> run_sweep(const RunConfig& base, SweepParam param, std::span<const double> values,
                                  std::span<const int> levels);

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);

/// Adapts (with the same refinement retries as run_solve) and audits angles.
AngleAudit run_angles(const RunConfig& config);

/// {vertices, edges, patches, subtriangles}; see README for the layout.
nlohmann::json mesh_to_json(const PatchMesh& mesh, std::span<const PatchConfig> configs);

}  // namespace patchfem
