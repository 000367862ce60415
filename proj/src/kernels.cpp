#include "patchfem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace patchfem::kernels {

namespace {

void check_configs(const PatchMesh& mesh, std::span<const PatchConfig> configs) {
    if (configs.size() != mesh.num_patches()) throw std::invalid_argument("one configuration per patch is required");
}

double block_dot(std::span<const double> a, std::span<const double> b, std::size_t block) {
    const std::size_t first = block * kDotBlock;
    const std::size_t last = std::min(a.size(), first + kDotBlock);
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += a[i] * b[i];
    return sum;
}

std::size_t num_blocks(std::size_t n) { return (n + kDotBlock - 1) / kDotBlock; }

ErrorNorms finish(std::span<const ErrorNorms> parts) {
    ErrorNorms total;
    for (const ErrorNorms& p : parts) {
        total.l2 += p.l2;
        total.h1_semi += p.h1_semi;
    }
    total.l2 = std::sqrt(total.l2);
    total.h1_semi = std::sqrt(total.h1_semi);
    return total;
}

// Runs body(i) for i in [0, n) in parallel; the lowest-index exception wins.
template <class Body>
void parallel_for(std::size_t n, Body body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < num_blocks(a.size()); ++k) sum += block_dot(a, b, k);
    return sum;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    const auto& rp = a.row_ptr();
    const auto& cols = a.cols();
    const auto& vals = a.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        double sum = 0.0;
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

std::vector<PatchContribution> patch_contributions(const PatchMesh& mesh, std::span<const PatchConfig> configs,
                                                   const ProblemSpec& problem, Mode mode) {
    check_configs(mesh, configs);
    std::vector<PatchContribution> out(mesh.num_patches());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = patch_contribution(mesh, configs[p], p, problem, mode);
    return out;
}

ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh) {
    check_configs(mesh, configs);
    std::vector<ErrorNorms> parts(mesh.num_patches());
    for (std::size_t p = 0; p < parts.size(); ++p) parts[p] = patch_error_squared(mesh, configs[p], p, problem, uh);
    return finish(parts);
}

}  // namespace serial

namespace omp {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    const std::size_t nb = num_blocks(a.size());
    if (nb <= 1) return serial::dot(a, b);
    std::vector<double> partial(nb, 0.0);
    const auto count = static_cast<std::ptrdiff_t>(nb);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) partial[static_cast<std::size_t>(k)] = block_dot(a, b, static_cast<std::size_t>(k));
    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    const auto& rp = a.row_ptr();
    const auto& cols = a.cols();
    const auto& vals = a.values();
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static) if (n > 2048)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double sum = 0.0;
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

std::vector<PatchContribution> patch_contributions(const PatchMesh& mesh, std::span<const PatchConfig> configs,
                                                   const ProblemSpec& problem, Mode mode) {
    check_configs(mesh, configs);
    std::vector<PatchContribution> out(mesh.num_patches());
    parallel_for(out.size(), [&](std::size_t p) { out[p] = patch_contribution(mesh, configs[p], p, problem, mode); });
    return out;
}

ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh) {
    check_configs(mesh, configs);
    std::vector<ErrorNorms> parts(mesh.num_patches());
    parallel_for(parts.size(), [&](std::size_t p) { parts[p] = patch_error_squared(mesh, configs[p], p, problem, uh); });
    return finish(parts);
}

}  // namespace omp

int max_threads() { return omp_get_max_threads(); }

}  // namespace patchfem::kernels
