#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "patchfem/adaptation.hpp"
#include "patchfem/levelset.hpp"
#include "patchfem/mesh.hpp"

namespace patchfem {

/// Manufactured interface problem -div(kappa grad u) = f with Dirichlet data
/// g = u on the boundary. Branch 1 lives where phi < 0.
struct ProblemSpec {
    std::string name;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    LevelSet levelset{HorizontalLine{0.0}};
    Rectangle domain;

    std::function<double(Point2)> u1, u2;
    std::function<Point2(Point2)> grad1, grad2;
    std::function<double(Point2)> f1, f2;

    Side side(Point2 x) const { return levelset(x) < 0.0 ? Side::Omega1 : Side::Omega2; }
    double kappa(Side s) const { return s == Side::Omega1 ? kappa1 : kappa2; }
    double kappa_at(Point2 x) const { return kappa(side(x)); }
    double u(Point2 x) const { return side(x) == Side::Omega1 ? u1(x) : u2(x); }
    Point2 grad_u(Point2 x) const { return side(x) == Side::Omega1 ? grad1(x) : grad2(x); }
    double f(Point2 x) const { return side(x) == Side::Omega1 ? f1(x) : f2(x); }
};

inline double kappa_of(Side side, const ProblemSpec& problem) { return problem.kappa(side); }

inline constexpr double kDefaultKappa1 = 0.1;
inline constexpr double kDefaultKappa2 = 1.0;

/// u1 = -2 k2 |x|^4 inside the circle, u2 = -k1 |x|^2 + k1/4 - k2/8 outside.
/// Only radius 1/2 makes both interface conditions hold; other radii are
/// useful as a negative control.
ProblemSpec circle_problem(double radius = 0.5);

/// Interface x2 = eps * h with d = x2 - eps h: u1 = (k2/k1) d - d^2,
/// u2 = d - d^2.
ProblemSpec horizontal_problem(double eps, double h);

/// d = cos(alpha) x2 - sin(alpha) x1: u1 = sin((k2/k1) d), u2 = sin(d).
ProblemSpec tilted_problem(double alpha);

struct JumpReport {
    double max_value_jump = 0.0;
    double max_flux_jump = 0.0;
    int samples = 0;

    bool valid(double tol = 1e-10) const { return max_value_jump <= tol && max_flux_jump <= tol; }
};

/// Samples n_samples points of the interface inside the domain.
JumpReport verify_jump_conditions(const ProblemSpec& problem, int n_samples);

struct ResidualReport {
    /// max |(-div(k grad u_i))_fd - f_i| / max(1, |f_i|) per subdomain.
    double max_rel_error_omega1 = 0.0;
    double max_rel_error_omega2 = 0.0;
};

/// Five-point finite-difference check of -div(kappa grad u) = f at random
/// points of each subdomain.
ResidualReport pde_residual_check(const ProblemSpec& problem, int points_per_side, double step,
                                  std::uint64_t seed = 7);

/// Least-squares slope of log(error) over log(h). Needs at least two pairs.
double convergence_rate(std::span<const std::pair<double, double>> h_error);

}  // namespace patchfem
