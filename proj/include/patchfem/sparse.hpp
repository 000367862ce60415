#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace patchfem {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix with sorted column indices.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Duplicates are summed in the order they appear in `entries`.
    static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }

    /// Zero for entries outside the pattern.
    double at(std::size_t row, std::size_t col) const;

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::vector<double> diagonal() const;

    /// max |a_ij - a_ji| / max |a_ij|.
    double asymmetry() const;

    /// Writes row,col,value lines with a header.
    void write_triplet_csv(std::ostream& out) const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

}  // namespace patchfem
