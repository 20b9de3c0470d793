/// @file sparse_matrix.hpp
/// @brief Square CSR storage with canonicalization, matvec and lazy shifted apply.

#ifndef MSKRY_SPARSE_MATRIX_HPP
#define MSKRY_SPARSE_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mskry/scalar.hpp"

namespace mskry {

template <Field T>
struct Triplet {
    index_t row;
    index_t col;
    T value;
};

/// Square sparse matrix in canonical CSR form: within each row the column
/// indices are strictly increasing, duplicates summed, exact zeros dropped.
template <Field T>
class SparseMatrix {
  public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(index_t n, std::vector<Triplet<T>> entries) {
        if (n < 0) throw std::invalid_argument("mskry: negative dimension");
        for (const auto& e : entries) {
            if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
                throw std::out_of_range("mskry: triplet index out of range");
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet<T>& a, const Triplet<T>& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        SparseMatrix A;
        A.n_ = n;
        A.row_extents_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (std::size_t k = 0; k < entries.size();) {
            std::size_t k2 = k;
            T sum = T(0);
            while (k2 < entries.size() && entries[k2].row == entries[k].row &&
                   entries[k2].col == entries[k].col) {
                sum += entries[k2].value;
                ++k2;
            }
            if (sum != T(0)) {
                A.col_indices_.push_back(entries[k].col);
                A.values_.push_back(sum);
                ++A.row_extents_[static_cast<std::size_t>(entries[k].row) + 1];
            }
            k = k2;
        }
        std::partial_sum(A.row_extents_.begin(), A.row_extents_.end(), A.row_extents_.begin());
        return A;
    }

    index_t dim() const { return n_; }
    index_t nnz() const { return static_cast<index_t>(values_.size()); }

    const std::vector<index_t>& row_extents() const { return row_extents_; }
    const std::vector<index_t>& col_indices() const { return col_indices_; }
    const std::vector<T>& values() const { return values_; }

    double frobenius_norm() const {
        double s = 0.0;
        for (const T& v : values_) s += abs_s(v) * abs_s(v);
        return std::sqrt(s);
    }

  private:
    index_t n_ = 0;
    std::vector<index_t> row_extents_{0};
    std::vector<index_t> col_indices_;
    std::vector<T> values_;
};

/// y = A*x, per-row left-to-right summation.
template <Field T>
Vector<T> matvec(const SparseMatrix<T>& A, const Vector<T>& x) {
    if (static_cast<index_t>(x.size()) != A.dim())
        throw std::invalid_argument("mskry: matvec dimension mismatch");
    Vector<T> y(x.size(), T(0));
    const auto& rp = A.row_extents();
    const auto& ci = A.col_indices();
    const auto& va = A.values();
    for (index_t i = 0; i < A.dim(); ++i) {
        T s = T(0);
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[ci[k]];
        y[i] = s;
    }
    return y;
}

/// y = (A - sigma*I)*x without forming the shifted matrix.
template <Field T>
Vector<T> apply_shifted(const SparseMatrix<T>& A, const T& sigma, const Vector<T>& x) {
    Vector<T> y = matvec(A, x);
    if (sigma != T(0)) axpy(-sigma, x, y);
    return y;
}

/// Materialized A - sigma*I (CLI convenience for the single-system solvers).
template <Field T>
SparseMatrix<T> with_shift(const SparseMatrix<T>& A, const T& sigma) {
    std::vector<Triplet<T>> tr;
    tr.reserve(static_cast<std::size_t>(A.nnz() + A.dim()));
    const auto& rp = A.row_extents();
    for (index_t i = 0; i < A.dim(); ++i)
        for (index_t k = rp[i]; k < rp[i + 1]; ++k)
            tr.push_back({i, A.col_indices()[k], A.values()[k]});
    for (index_t i = 0; i < A.dim(); ++i) tr.push_back({i, i, -sigma});
    return SparseMatrix<T>::from_triplets(A.dim(), std::move(tr));
}

/// -A (the generator's negate flag).
template <Field T>
SparseMatrix<T> negated(const SparseMatrix<T>& A) {
    std::vector<Triplet<T>> tr;
    tr.reserve(static_cast<std::size_t>(A.nnz()));
    const auto& rp = A.row_extents();
    for (index_t i = 0; i < A.dim(); ++i)
        for (index_t k = rp[i]; k < rp[i + 1]; ++k)
            tr.push_back({i, A.col_indices()[k], -A.values()[k]});
    return SparseMatrix<T>::from_triplets(A.dim(), std::move(tr));
}

template <Field T>
SparseMatrix<std::complex<double>> to_complex(const SparseMatrix<T>& A) {
    std::vector<Triplet<std::complex<double>>> tr;
    tr.reserve(static_cast<std::size_t>(A.nnz()));
    const auto& rp = A.row_extents();
    for (index_t i = 0; i < A.dim(); ++i)
        for (index_t k = rp[i]; k < rp[i + 1]; ++k)
            tr.push_back({i, A.col_indices()[k], promote(A.values()[k])});
    return SparseMatrix<std::complex<double>>::from_triplets(A.dim(), std::move(tr));
}

}  // namespace mskry

#endif  // MSKRY_SPARSE_MATRIX_HPP
