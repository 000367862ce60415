#include "patchfem/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "patchfem/errors.hpp"

namespace patchfem {

ProblemSpec circle_problem(double radius) {
    ProblemSpec p;
    p.name = "circle";
    p.kappa1 = kDefaultKappa1;
    p.kappa2 = kDefaultKappa2;
    p.levelset = LevelSet(Circle{{0.0, 0.0}, radius});
    const double k1 = p.kappa1;
    const double k2 = p.kappa2;
    p.u1 = [k2](Point2 x) {
        const double r2 = dot(x, x);
        return -2.0 * k2 * r2 * r2;
    };
    p.u2 = [k1, k2](Point2 x) { return -k1 * dot(x, x) + 0.25 * k1 - 0.125 * k2; };
    p.grad1 = [k2](Point2 x) { return (-8.0 * k2 * dot(x, x)) * x; };
    p.grad2 = [k1](Point2 x) { return (-2.0 * k1) * x; };
    p.f1 = [k1, k2](Point2 x) { return 32.0 * k1 * k2 * dot(x, x); };
    p.f2 = [k1, k2](Point2) { return 4.0 * k1 * k2; };
    return p;
}

ProblemSpec horizontal_problem(double eps, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("horizontal_problem: h must be positive");
    ProblemSpec p;
    p.name = "horizontal";
    p.kappa1 = kDefaultKappa1;
    p.kappa2 = kDefaultKappa2;
    const double y0 = eps * h;
    p.levelset = LevelSet(HorizontalLine{y0});
    const double ratio = p.kappa2 / p.kappa1;
    p.u1 = [=](Point2 x) {
        const double d = x.y - y0;
        return ratio * d - d * d;
    };
    p.u2 = [=](Point2 x) {
        const double d = x.y - y0;
        return d - d * d;
    };
    p.grad1 = [=](Point2 x) { return Point2{0.0, ratio - 2.0 * (x.y - y0)}; };
    p.grad2 = [=](Point2 x) { return Point2{0.0, 1.0 - 2.0 * (x.y - y0)}; };
    const double f1 = 2.0 * p.kappa1;
    const double f2 = 2.0 * p.kappa2;
    p.f1 = [f1](Point2) { return f1; };
    p.f2 = [f2](Point2) { return f2; };
    return p;
}

ProblemSpec tilted_problem(double alpha) {
    ProblemSpec p;
    p.name = "tilted";
    p.kappa1 = kDefaultKappa1;
    p.kappa2 = kDefaultKappa2;
    p.levelset = LevelSet(TiltedLine{alpha});
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const double k = p.kappa2 / p.kappa1;
    const double k1 = p.kappa1;
    const double k2 = p.kappa2;
    auto d = [c, s](Point2 x) { return c * x.y - s * x.x; };
    const Point2 grad_d{-s, c};
    p.u1 = [=](Point2 x) { return std::sin(k * d(x)); };
    p.u2 = [=](Point2 x) { return std::sin(d(x)); };
    p.grad1 = [=](Point2 x) { return (k * std::cos(k * d(x))) * grad_d; };
    p.grad2 = [=](Point2 x) { return std::cos(d(x)) * grad_d; };
    p.f1 = [=](Point2 x) { return k1 * k * k * std::sin(k * d(x)); };
    p.f2 = [=](Point2 x) { return k2 * std::sin(d(x)); };
    return p;
}

namespace {

std::vector<Point2> interface_samples(const ProblemSpec& problem, int n) {
    std::vector<Point2> pts;
    pts.reserve(n);
    const Rectangle& dom = problem.domain;
    const auto& shape = problem.levelset.shape();
    if (const auto* c = std::get_if<Circle>(&shape)) {
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * std::numbers::pi * (i + 0.5) / n;
            pts.push_back(c->center + c->radius * Point2{std::cos(th), std::sin(th)});
        }
    } else if (const auto* l = std::get_if<HorizontalLine>(&shape)) {
        for (int i = 0; i < n; ++i) {
            pts.push_back({dom.xmin + (dom.xmax - dom.xmin) * (i + 0.5) / n, l->y0});
        }
    } else {
        const auto& t = std::get<TiltedLine>(shape);
        const Point2 dir{std::cos(t.alpha), std::sin(t.alpha)};
        double tmax = std::numeric_limits<double>::infinity();
        if (std::abs(dir.x) > 0.0) tmax = std::min(tmax, std::min(dom.xmax, -dom.xmin) / std::abs(dir.x));
        if (std::abs(dir.y) > 0.0) tmax = std::min(tmax, std::min(dom.ymax, -dom.ymin) / std::abs(dir.y));
        for (int i = 0; i < n; ++i) {
            pts.push_back((-tmax + 2.0 * tmax * (i + 0.5) / n) * dir);
        }
    }
    return pts;
}

}  // namespace

JumpReport verify_jump_conditions(const ProblemSpec& problem, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("verify_jump_conditions: need at least one sample");
    JumpReport report;
    for (const Point2 x : interface_samples(problem, n_samples)) {
        Point2 n = problem.levelset.gradient(x);
        n = (1.0 / norm(n)) * n;
        const double value_jump = problem.u2(x) - problem.u1(x);
        const double flux_jump = problem.kappa2 * dot(problem.grad2(x), n) - problem.kappa1 * dot(problem.grad1(x), n);
        report.max_value_jump = std::max(report.max_value_jump, std::abs(value_jump));
        report.max_flux_jump = std::max(report.max_flux_jump, std::abs(flux_jump));
        ++report.samples;
    }
    return report;
}

ResidualReport pde_residual_check(const ProblemSpec& problem, int points_per_side, double step,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Rectangle& dom = problem.domain;
    std::uniform_real_distribution<double> ux(dom.xmin + step, dom.xmax - step);
    std::uniform_real_distribution<double> uy(dom.ymin + step, dom.ymax - step);
    ResidualReport report;
    for (Side side : {Side::Omega1, Side::Omega2}) {
        const auto& u = side == Side::Omega1 ? problem.u1 : problem.u2;
        const auto& f = side == Side::Omega1 ? problem.f1 : problem.f2;
        const double kappa = problem.kappa(side);
        double worst = 0.0;
        int found = 0;
        for (int attempt = 0; found < points_per_side && attempt < 1000 * points_per_side; ++attempt) {
            const Point2 x{ux(rng), uy(rng)};
            if (problem.side(x) != side) continue;
            ++found;
            const double lap = (u({x.x + step, x.y}) + u({x.x - step, x.y}) + u({x.x, x.y + step}) +
                                u({x.x, x.y - step}) - 4.0 * u(x)) /
                               (step * step);
            const double fx = f(x);
            worst = std::max(worst, std::abs(-kappa * lap - fx) / std::max(1.0, std::abs(fx)));
        }
        (side == Side::Omega1 ? report.max_rel_error_omega1 : report.max_rel_error_omega2) = worst;
    }
    return report;
}

double convergence_rate(std::span<const std::pair<double, double>> h_error) {
    if (h_error.size() < 2) throw InsufficientData("convergence_rate: need at least two (h, error) pairs");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [h, e] : h_error) {
        if (!(h > 0.0) || !(e > 0.0)) throw std::invalid_argument("convergence_rate: h and error must be positive");
        const double x = std::log(h);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(h_error.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InsufficientData("convergence_rate: all h values coincide");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace patchfem
