#include "patchfem/solver.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "patchfem/kernels.hpp"

namespace patchfem {

namespace k = kernels::omp;

SolveReport cg_solve(const LinearSystem& system, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tolerance must be positive");
    const SparseMatrix& a = system.matrix;
    const std::size_t n = a.size();
    if (system.rhs.size() != n) throw std::invalid_argument("cg_solve: rhs size mismatch");
    if (max_iter <= 0) max_iter = static_cast<int>(10 * n);

    SolveReport report;
    report.solution.assign(n, 0.0);
    for (const auto& [i, value] : system.dirichlet) report.solution[i] = value;

    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw SingularSystem("cg_solve: non-positive diagonal entry");
        d = 1.0 / d;
    }

    std::vector<double> r(n), z(n), p(n), ap(n);
    k::spmv(a, report.solution, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - ap[i];

    const double b_norm = std::sqrt(k::dot(system.rhs, system.rhs));
    const double scale = b_norm > 0.0 ? b_norm : 1.0;
    double res = std::sqrt(k::dot(r, r)) / scale;
    report.residual_history.push_back(res);
    report.relative_residual = res;
    if (res <= tol) return report;

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = k::dot(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        k::spmv(a, p, ap);
        const double pap = k::dot(p, ap);
        if (!(pap > 0.0)) throw SingularSystem("cg_solve: matrix is not positive definite");
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            report.solution[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res = std::sqrt(k::dot(r, r)) / scale;
        report.iterations = it;
        report.relative_residual = res;
        report.residual_history.push_back(res);
        if (res <= tol) return report;

        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = k::dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NonConvergence("cg_solve: no convergence after " + std::to_string(max_iter) +
                             " iterations (relative residual " + std::to_string(res) + ")",
                         std::move(report));
}

std::vector<double> dense_solve_oracle(const LinearSystem& system) {
    const SparseMatrix& a = system.matrix;
    const std::size_t n = a.size();
    if (n > kDenseOracleLimit) throw std::invalid_argument("dense_solve_oracle: system too large");

    std::vector<bool> fixed(n, false);
    std::vector<double> x(n, 0.0);
    for (const auto& [i, value] : system.dirichlet) {
        fixed[i] = true;
        x[i] = value;
    }
    std::vector<std::ptrdiff_t> index(n, -1);
    std::ptrdiff_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!fixed[i]) index[i] = m++;
    }
    if (m == 0) return x;

    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m);
    const auto& rp = a.row_ptr();
    const auto& cols = a.cols();
    const auto& vals = a.values();
    for (std::size_t i = 0; i < n; ++i) {
        if (index[i] < 0) continue;
        rhs(index[i]) = system.rhs[i];
        for (std::size_t kk = rp[i]; kk < rp[i + 1]; ++kk) {
            const std::size_t j = cols[kk];
            if (index[j] >= 0) {
                dense(index[i], index[j]) += vals[kk];
            } else {
                rhs(index[i]) -= vals[kk] * x[j];
            }
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
    if (!(lu.rcond() > 1e-14)) throw SingularSystem("dense_solve_oracle: matrix is singular");
    const Eigen::VectorXd y = lu.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) {
        if (index[i] >= 0) x[i] = y(index[i]);
    }
    return x;
}

}  // namespace patchfem
