#pragma once

// Data-parallel kernels. Every kernel has an OpenMP version used by the
// library and a plain serial reference kept for tests and benchmarks.
//
// Reductions that must be reproducible (assembly, error integration) compute
// per-patch results in parallel and sum them in patch order, so both
// versions agree bitwise. Vector dot products are reduced over fixed-size
// blocks, so the result does not depend on the number of threads.

#include <cstddef>
#include <span>
#include <vector>

#include "patchfem/assembly.hpp"
#include "patchfem/sparse.hpp"

namespace patchfem::kernels {

inline constexpr std::size_t kDotBlock = 4096;

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<PatchContribution> patch_contributions(const PatchMesh& mesh, std::span<const PatchConfig> configs,
                                                   const ProblemSpec& problem, Mode mode);
ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh);

}  // namespace serial

namespace omp {

double dot(std::span<const double> a, std::span<const double> b);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<PatchContribution> patch_contributions(const PatchMesh& mesh, std::span<const PatchConfig> configs,
                                                   const ProblemSpec& problem, Mode mode);
ErrorNorms error_norms(const PatchMesh& mesh, std::span<const PatchConfig> configs, const ProblemSpec& problem,
                       std::span<const double> uh);

}  // namespace omp

int max_threads();

}  // namespace patchfem::kernels
