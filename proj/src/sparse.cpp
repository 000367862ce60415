#include "patchfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "patchfem/csv.hpp"

namespace patchfem {

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row >= n || t.col >= n) throw std::out_of_range("from_triplets: index out of range");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) {
            sum += entries[j].value;
            ++j;
        }
        m.cols_.push_back(entries[i].col);
        m.values_.push_back(sum);
        ++m.row_ptr_[entries[i].row + 1];
        i = j;
    }
    for (std::size_t r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

double SparseMatrix::asymmetry() const {
    double max_entry = 0.0;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            max_entry = std::max(max_entry, std::abs(values_[k]));
            max_diff = std::max(max_diff, std::abs(values_[k] - at(cols_[k], i)));
        }
    }
    return max_entry > 0.0 ? max_diff / max_entry : 0.0;
}

void SparseMatrix::write_triplet_csv(std::ostream& out) const {
    out << "row,col,value\n";
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            out << i << ',' << cols_[k] << ',' << format_double(values_[k]) << '\n';
        }
    }
}

}  // namespace patchfem
