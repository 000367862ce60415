#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patchfem/driver.hpp"
#include "patchfem/errors.hpp"
#include "patchfem/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string problem = "circle";
    int n = 16;
    std::vector<int> sweep_n;
    std::vector<int> levels;
    int strategy = 2;
    std::string mode = "adapted";
    double eps = 0.5;
    double alpha = 0.0;
    std::string values;
    std::string out;
    std::string dump_mesh;
};

// Usage problems detected after CLI11 has accepted the arguments.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

patchfem::RunConfig to_config(const Options& o) {
    patchfem::RunConfig c;
    try {
        c.problem = patchfem::problem_kind_from_string(o.problem);
        c.strategy = patchfem::strategy_from_int(o.strategy);
        c.n = o.n;
        c.eps = o.eps;
        c.alpha = o.alpha;
        if (o.mode == "adapted") {
            c.mode = patchfem::Mode::Adapted;
        } else if (o.mode == "baseline") {
            c.mode = patchfem::Mode::Baseline;
        } else {
            throw std::invalid_argument("mode must be 'adapted' or 'baseline'");
        }
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void dump_mesh(const std::string& path, const patchfem::PatchMesh& mesh,
               const std::vector<patchfem::PatchConfig>& configs) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << patchfem::mesh_to_json(mesh, configs).dump(1) << '\n';
}

int cmd_solve(const Options& o) {
    const auto config = to_config(o);
    const auto run = patchfem::run_solve(config);
    Output out(o.out);
    patchfem::write_solve_header(out.stream());
    patchfem::write_solve_row(out.stream(), run);
    dump_mesh(o.dump_mesh, run.mesh, run.configs);
    if (run.retries > 0) std::cerr << "note: refined to n=" << run.config.n << '\n';
    return kExitOk;
}

int cmd_convergence(const Options& o) {
    const auto config = to_config(o);
    const auto levels = o.levels.empty() ? patchfem::default_convergence_levels() : o.levels;
    for (int n : levels) {
        if (n < 2) throw UsageError("levels must be at least 2");
    }
    const auto result = patchfem::run_convergence(config, levels);
    Output out(o.out);
    patchfem::write_convergence_csv(out.stream(), result);
    if (!result.l2_rate) std::cerr << "note: a single level gives no convergence rate\n";
    return kExitOk;
}

// Comma separated doubles; empty or malformed entries are usage errors.
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const char* first = text.data() + start;
        const char* last = text.data() + end;
        double v = 0.0;
        const auto res = std::from_chars(first, last, v);
        if (first == last || res.ec != std::errc{} || res.ptr != last) {
            throw UsageError("bad entry in --values: '" + std::string(first, last) + "'");
        }
        out.push_back(v);
        if (end == text.size()) return out;
        start = end + 1;
    }
}

int cmd_sweep(const Options& o, bool values_given) {
    const auto config = to_config(o);
    patchfem::SweepParam param{};
    try {
        param = patchfem::sweep_param_for(config.problem);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto values = values_given ? parse_values(o.values) : patchfem::default_sweep_values(param);
    const auto levels = o.sweep_n.empty() ? patchfem::default_sweep_levels() : o.sweep_n;
    for (double v : values) {
        const double hi = param == patchfem::SweepParam::Eps ? 1.0 : std::acos(-1.0);
        if (!(v >= 0.0 && v <= hi)) throw UsageError("sweep value out of range");
    }
    for (int n : levels) {
        if (n < 2) throw UsageError("n must be at least 2");
    }
    const auto points = patchfem::run_sweep(config, param, values, levels);
    Output out(o.out);
    patchfem::write_sweep_csv(out.stream(), points);
    return kExitOk;
}

int cmd_angles(const Options& o) {
    const auto config = to_config(o);
    const auto audit = patchfem::run_angles(config);
    Output out(o.out);
    patchfem::write_angle_csv(out.stream(), audit);
    std::cerr << "max angle " << audit.global_max_deg << " deg (reference patch " << audit.reference_global_max_deg
              << " deg)\n";
    if (audit.reference_global_max_deg > patchfem::kMaxAngleBoundDeg + 1e-9) {
        std::cerr << "error: angle bound of " << patchfem::kMaxAngleBoundDeg << " deg exceeded\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locally adapted patch finite elements for 2D interface problems"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&o](CLI::App* sub) {
        sub->add_option("--problem", o.problem, "circle | horizontal | tilted")->capture_default_str();
        sub->add_option("--strategy", o.strategy, "free parameter strategy 1, 2 or 3")->capture_default_str();
        sub->add_option("--mode", o.mode, "adapted | baseline")->capture_default_str();
        sub->add_option("--eps", o.eps, "horizontal interface offset in cell widths")->capture_default_str();
        sub->add_option("--alpha", o.alpha, "tilted interface angle in radians")->capture_default_str();
        sub->add_option("--out", o.out, "output CSV path (default stdout)");
    };

    auto* solve = app.add_subcommand("solve", "solve one problem and print a CSV row");
    common(solve);
    solve->add_option("--n", o.n, "cells per side")->capture_default_str();
    solve->add_option("--dump-mesh", o.dump_mesh, "write the adapted mesh as JSON");

    auto* convergence = app.add_subcommand("convergence", "solve on several levels and fit rates");
    common(convergence);
    convergence->add_option("--levels", o.levels, "comma separated n values (default 8,16,32,64,128)")
        ->delimiter(',');

    auto* sweep = app.add_subcommand("sweep", "sweep eps (horizontal) or alpha (tilted)");
    common(sweep);
    sweep->add_option("--n", o.sweep_n, "comma separated n values (default 16,32,64)")->delimiter(',');
    auto* values_opt = sweep->add_option("--values", o.values, "comma separated parameter values");

    auto* angles = app.add_subcommand("angles", "audit subtriangle angles");
    common(angles);
    angles->add_option("--n", o.n, "cells per side")->capture_default_str();
    angles->add_option("--dump-mesh", o.dump_mesh, "write the adapted mesh as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*convergence) return cmd_convergence(o);
        if (*sweep) return cmd_sweep(o, values_opt->count() > 0);
        if (*angles) return cmd_angles(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const patchfem::RefinementRequired& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const patchfem::NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
