/// @file matrix_market.hpp
/// @brief Matrix Market coordinate reader (with symmetry expansion) and debug writer.

#ifndef MSKRY_MATRIX_MARKET_HPP
#define MSKRY_MATRIX_MARKET_HPP

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mskry/sparse_matrix.hpp"

namespace mskry {

enum class MmField { real, complex_, integer };
enum class MmSymmetry { general, symmetric, hermitian, skew_symmetric };

struct MmHeader {
    MmField field = MmField::real;
    MmSymmetry symmetry = MmSymmetry::general;
};

namespace detail {

inline std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        std::size_t p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos) continue;
        if (line[p] == '%') continue;
        return line;
    }
    return {};
}

}  // namespace detail

inline MmHeader read_mm_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("matrix market: empty stream");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix")
        throw std::runtime_error("matrix market: bad banner");
    if (format != "coordinate")
        throw std::runtime_error("matrix market: unsupported format: " + format);
    MmHeader h;
    if (field == "real")
        h.field = MmField::real;
    else if (field == "complex")
        h.field = MmField::complex_;
    else if (field == "integer")
        h.field = MmField::integer;
    else if (field == "pattern")
        throw std::runtime_error("unsupported: pattern matrices");
    else
        throw std::runtime_error("matrix market: unknown field: " + field);
    if (symmetry == "general")
        h.symmetry = MmSymmetry::general;
    else if (symmetry == "symmetric")
        h.symmetry = MmSymmetry::symmetric;
    else if (symmetry == "hermitian")
        h.symmetry = MmSymmetry::hermitian;
    else if (symmetry == "skew-symmetric")
        h.symmetry = MmSymmetry::skew_symmetric;
    else
        throw std::runtime_error("matrix market: unknown symmetry: " + symmetry);
    return h;
}

/// Reads a coordinate file into canonical CSR. Symmetric/hermitian/skew
/// variants are expanded to full storage. T = double rejects complex data;
/// T = complex<double> promotes real data.
template <Field T>
SparseMatrix<T> read_matrix_market(std::istream& in) {
    MmHeader h = read_mm_header(in);
    if (h.field == MmField::complex_ && !scalar_traits<T>::is_complex)
        throw std::runtime_error("matrix market: complex data requires the complex field");

    std::string size_line = detail::next_data_line(in);
    std::istringstream ss(size_line);
    index_t rows = -1, cols = -1, nnz = -1;
    ss >> rows >> cols >> nnz;
    if (rows <= 0 || cols <= 0 || nnz < 0)
        throw std::runtime_error("matrix market: malformed size line");
    if (rows != cols) throw std::runtime_error("matrix market: non-square matrix");

    std::vector<Triplet<T>> tr;
    tr.reserve(static_cast<std::size_t>(2 * nnz));
    for (index_t k = 0; k < nnz; ++k) {
        std::string line = detail::next_data_line(in);
        if (line.empty()) throw std::runtime_error("matrix market: fewer entries than declared");
        std::istringstream es(line);
        index_t i = 0, j = 0;
        double re = 0.0, im = 0.0;
        es >> i >> j >> re;
        if (!es) throw std::runtime_error("matrix market: malformed entry");
        if (h.field == MmField::complex_) {
            es >> im;
            if (!es) throw std::runtime_error("matrix market: malformed complex entry");
        }
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw std::runtime_error("matrix market: index out of range");
        --i;
        --j;
        T v;
        if constexpr (scalar_traits<T>::is_complex)
            v = T(re, im);
        else
            v = re;
        tr.push_back({i, j, v});
        if (i != j) {
            switch (h.symmetry) {
                case MmSymmetry::general:
                    break;
                case MmSymmetry::symmetric:
                    tr.push_back({j, i, v});
                    break;
                case MmSymmetry::hermitian:
                    tr.push_back({j, i, conj_s(v)});
                    break;
                case MmSymmetry::skew_symmetric:
                    tr.push_back({j, i, -v});
                    break;
            }
        }
    }
    return SparseMatrix<T>::from_triplets(rows, std::move(tr));
}

/// Debug writer; always emits a general coordinate file.
template <Field T>
void write_matrix_market(std::ostream& out, const SparseMatrix<T>& A) {
    out.precision(17);
    out << "%%MatrixMarket matrix coordinate "
        << (scalar_traits<T>::is_complex ? "complex" : "real") << " general\n";
    out << A.dim() << " " << A.dim() << " " << A.nnz() << "\n";
    const auto& rp = A.row_extents();
    for (index_t i = 0; i < A.dim(); ++i) {
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) {
            out << (i + 1) << " " << (A.col_indices()[k] + 1);
            if constexpr (scalar_traits<T>::is_complex) {
                std::complex<double> v = A.values()[k];
                out << " " << v.real() << " " << v.imag() << "\n";
            } else {
                out << " " << A.values()[k] << "\n";
            }
        }
    }
}

}  // namespace mskry

#endif  // MSKRY_MATRIX_MARKET_HPP
