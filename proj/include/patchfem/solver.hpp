#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "patchfem/assembly.hpp"
#include "patchfem/errors.hpp"

namespace patchfem {

struct SolveReport {
    std::vector<double> solution;
    int iterations = 0;
    double relative_residual = 0.0;
    /// ||r_k|| / ||b|| after each iteration, starting with the initial residual.
    std::vector<double> residual_history;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}

    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

inline constexpr double kDefaultTolerance = 1e-10;

/// Jacobi-preconditioned conjugate gradients. Starts from the prescribed
/// boundary values, so Dirichlet rows hold from the first iterate on.
/// max_iter = 0 selects 10 * size.
SolveReport cg_solve(const LinearSystem& system, double tol = kDefaultTolerance, int max_iter = 0);

inline constexpr std::size_t kDenseOracleLimit = 5000;

/// LU factorization of the densified free block; testing aid only.
std::vector<double> dense_solve_oracle(const LinearSystem& system);

}  // namespace patchfem
