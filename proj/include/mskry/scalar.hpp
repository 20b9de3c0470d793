/// @file scalar.hpp
/// @brief Scalar field abstraction (real/complex double) and dense vector kernels.

#ifndef MSKRY_SCALAR_HPP
#define MSKRY_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace mskry {

using index_t = std::ptrdiff_t;

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    using real_type = double;
    static constexpr bool is_complex = false;
    static double conj(double x) { return x; }
    static double real(double x) { return x; }
};

template <>
struct scalar_traits<std::complex<double>> {
    using real_type = double;
    static constexpr bool is_complex = true;
    static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
    static double real(const std::complex<double>& x) { return x.real(); }
};

template <class T>
concept Field = std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>;

template <Field T>
using Vector = std::vector<T>;

template <Field T>
T conj_s(const T& x) {
    return scalar_traits<T>::conj(x);
}

template <Field T>
double abs_s(const T& x) {
    return std::abs(x);
}

template <Field T>
T safe_div(const T& a, const T& b) {
    if (b == T(0)) throw std::domain_error("mskry: scalar division by zero");
    return a / b;
}

/// <x, y> with the first argument conjugated.
template <Field T>
T dot(const Vector<T>& x, const Vector<T>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("mskry: dot dimension mismatch");
    T s = T(0);
    for (std::size_t k = 0; k < x.size(); ++k) s += conj_s(x[k]) * y[k];
    return s;
}

template <Field T>
double norm2(const Vector<T>& x) {
    double s = 0.0;
    for (const T& v : x) s += std::norm(std::complex<double>(v));
    return std::sqrt(s);
}

template <Field T>
double norm_inf(const Vector<T>& x) {
    double s = 0.0;
    for (const T& v : x) s = std::max(s, abs_s(v));
    return s;
}

/// y += a*x
template <Field T>
void axpy(const T& a, const Vector<T>& x, Vector<T>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("mskry: axpy dimension mismatch");
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

template <Field T>
void scale(const T& a, Vector<T>& x) {
    for (T& v : x) v *= a;
}

template <Field T>
bool is_zero(const Vector<T>& x) {
    for (const T& v : x)
        if (v != T(0)) return false;
    return true;
}

/// Promote a real vector/scalar into the complex field when a run mixes fields.
inline std::complex<double> promote(double x) { return {x, 0.0}; }
inline std::complex<double> promote(std::complex<double> x) { return x; }

}  // namespace mskry

#endif  // MSKRY_SCALAR_HPP
