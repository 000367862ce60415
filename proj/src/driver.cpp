#include "patchfem/driver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "patchfem/csv.hpp"
#include "patchfem/errors.hpp"
#include "patchfem/solver.hpp"

namespace patchfem {

ProblemKind problem_kind_from_string(const std::string& name) {
    if (name == "circle") return ProblemKind::Circle;
    if (name == "horizontal") return ProblemKind::Horizontal;
    if (name == "tilted") return ProblemKind::Tilted;
    throw std::invalid_argument("unknown problem '" + name + "'");
}

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Circle: return "circle";
        case ProblemKind::Horizontal: return "horizontal";
        case ProblemKind::Tilted: return "tilted";
    }
    return "?";
}

void RunConfig::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0,1]");
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi)) throw std::invalid_argument("alpha must lie in [0,pi]");
}

ProblemSpec make_problem(const RunConfig& config) {
    switch (config.problem) {
        case ProblemKind::Circle: return circle_problem();
        case ProblemKind::Horizontal: return horizontal_problem(config.eps, 2.0 / config.n);
        case ProblemKind::Tilted: return tilted_problem(config.alpha);
    }
    throw std::invalid_argument("unknown problem");
}

namespace {

struct Prepared {
    PatchMesh mesh;
    std::vector<PatchConfig> configs;
    int n = 0;
    int retries = 0;
};

Prepared prepare(const RunConfig& config, const ProblemSpec& problem) {
    Prepared out;
    out.n = config.n;
    for (;; ++out.retries) {
        out.mesh = build_structured_mesh(out.n, problem.domain);
        try {
            if (config.mode == Mode::Baseline) {
                out.configs = uniform_configs(out.mesh, problem.levelset);
            } else {
                out.configs = adapt(out.mesh, problem.levelset, config.strategy).configs;
            }
            return out;
        } catch (const RefinementRequired& e) {
            if (out.retries == kMaxRefinementRetries) {
                throw RefinementRequired(e.patch_id(), "still unresolved at n=" + std::to_string(out.n) + " after " +
                                                           std::to_string(out.retries) + " refinements (" +
                                                           e.what() + ")");
            }
            out.n *= 2;
        }
    }
}

std::optional<double> fitted_rate(const std::vector<RunResult>& runs, double ErrorNorms::*norm) {
    if (runs.size() < 2) return std::nullopt;
    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : runs) pairs.emplace_back(r.h, r.errors.*norm);
    return convergence_rate(pairs);
}

}  // namespace

RunResult run_solve(const RunConfig& config) {
    config.validate();
    const ProblemSpec problem = make_problem(config);
    Prepared prep = prepare(config, problem);

    RunResult result;
    result.config = config;
    result.config.n = prep.n;
    result.retries = prep.retries;
    result.h = prep.mesh.h_max();

    const LinearSystem system = assemble(prep.mesh, prep.configs, problem, config.mode);
    result.ndofs = system.matrix.size();
    SolveReport report = cg_solve(system);
    result.cg_iters = report.iterations;
    result.errors = error_norms(prep.mesh, prep.configs, problem, report.solution);
    result.max_angle_deg = max_angle_audit(prep.mesh, prep.configs).global_max_deg;
    result.solution = std::move(report.solution);
    result.mesh = std::move(prep.mesh);
    result.configs = std::move(prep.configs);
    return result;
}

void write_solve_header(std::ostream& out) {
    out << "problem,mode,strategy,n,h,ndofs,L2,H1,cg_iters,max_angle_deg\n";
}

void write_solve_row(std::ostream& out, const RunResult& run) {
    out << to_string(run.config.problem) << ',' << to_string(run.config.mode) << ',' << to_int(run.config.strategy)
        << ',' << run.config.n << ',' << format_double(run.h) << ',' << run.ndofs << ','
        << format_double(run.errors.l2) << ',' << format_double(run.errors.h1_semi) << ',' << run.cg_iters << ','
        << format_double(run.max_angle_deg) << '\n';
}

ConvergenceResult run_convergence(const RunConfig& base, std::span<const int> levels) {
    if (levels.empty()) throw std::invalid_argument("at least one level is required");
    ConvergenceResult result;
    for (int n : levels) {
        RunConfig config = base;
        config.n = n;
        result.runs.push_back(run_solve(config));
    }
    result.l2_rate = fitted_rate(result.runs, &ErrorNorms::l2);
    result.h1_rate = fitted_rate(result.runs, &ErrorNorms::h1_semi);
    return result;
}

void write_convergence_csv(std::ostream& out, const ConvergenceResult& result) {
    write_solve_header(out);
    for (const auto& run : result.runs) write_solve_row(out, run);
    if (result.runs.empty()) return;
    const RunConfig& c = result.runs.front().config;
    const auto rate = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    out << to_string(c.problem) << ',' << to_string(c.mode) << ',' << to_int(c.strategy) << ",rate,,,"
        << rate(result.l2_rate) << ',' << rate(result.h1_rate) << ",,\n";
}

SweepParam sweep_param_for(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Horizontal: return SweepParam::Eps;
        case ProblemKind::Tilted: return SweepParam::Alpha;
        case ProblemKind::Circle: break;
    }
    throw std::invalid_argument("the circle problem has no sweep parameter");
}

std::vector<double> default_sweep_values(SweepParam param) {
    std::vector<double> values;
    if (param == SweepParam::Eps) {
        for (int i = 0; i <= 40; ++i) values.push_back(i / 40.0);
    } else {
        for (int i = 0; i <= 64; ++i) values.push_back(i * std::numbers::pi / 64.0);
        values.back() = std::numbers::pi;
    }
    return values;
}

std::vector<int> default_sweep_levels() { return {16, 32, 64}; }

std::vector<int> default_convergence_levels() { return {8, 16, 32, 64, 128}; }

std::vector<SweepPoint> run_sweep(const RunConfig& base, SweepParam param, std::span<const double> values,
                                  std::span<const int> levels) {
    if (values.empty()) throw std::invalid_argument("empty sweep value grid");
    if (levels.empty()) throw std::invalid_argument("empty sweep level list");
    std::vector<SweepPoint> points;
    for (double v : values) {
        for (int n : levels) points.push_back({v, n, 0.0, 0.0});
    }
    std::sort(points.begin(), points.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.value != b.value ? a.value < b.value : a.n < b.n; });
    for (auto& point : points) {
        RunConfig config = base;
        config.n = point.n;
        (param == SweepParam::Eps ? config.eps : config.alpha) = point.value;
        const RunResult run = run_solve(config);
        point.l2 = run.errors.l2;
        point.h1 = run.errors.h1_semi;
    }
    return points;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
    out << "param_value,n,L2,H1\n";
    for (const auto& p : points) {
        out << format_double(p.value) << ',' << p.n << ',' << format_double(p.l2) << ',' << format_double(p.h1)
            << '\n';
    }
}

AngleAudit run_angles(const RunConfig& config) {
    config.validate();
    const ProblemSpec problem = make_problem(config);
    const Prepared prep = prepare(config, problem);
    return max_angle_audit(prep.mesh, prep.configs);
}

nlohmann::json mesh_to_json(const PatchMesh& mesh, std::span<const PatchConfig> configs) {
    nlohmann::json doc;
    auto& vertices = doc["vertices"] = nlohmann::json::array();
    for (const Point2& v : mesh.vertices()) vertices.push_back({v.x, v.y});
    auto& edges = doc["edges"] = nlohmann::json::array();
    for (const Edge& e : mesh.edges()) edges.push_back({e.v[0], e.v[1], e.t, to_string(e.lock)});
    auto& patches = doc["patches"] = nlohmann::json::array();
    for (const Patch& p : mesh.patches()) patches.push_back({p.v[0], p.v[1], p.v[2], p.e[0], p.e[1], p.e[2]});
    auto& subs = doc["subtriangles"] = nlohmann::json::array();
    for (std::size_t p = 0; p < configs.size() && p < mesh.num_patches(); ++p) {
        const auto tris = subtriangles(local_nodes(mesh, p), configs[p].topology);
        for (int i = 0; i < 4; ++i) {
            nlohmann::json corners = nlohmann::json::array();
            for (const Point2& c : tris[i].v) corners.push_back({c.x, c.y});
            subs.push_back({{"patch", p},
                            {"vertices", corners},
                            {"side", static_cast<int>(configs[p].sides[i])}});
        }
    }
    return doc;
}

}  // namespace patchfem
