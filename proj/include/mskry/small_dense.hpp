/// @file small_dense.hpp
/// @brief Dense (m+1) x m Hessenberg kernels: Givens least squares, the shifted
///        transform, the bordered collinearity solve, square shifted solves, and
///        the flexible Gamma assembly.

#ifndef MSKRY_SMALL_DENSE_HPP
#define MSKRY_SMALL_DENSE_HPP

#include <utility>

#include "mskry/scalar.hpp"

namespace mskry {

/// Signals a singular triangular/bordered factor in the small solves.
struct singular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (m+1) x m upper Hessenberg factor. Column j stores entries h_{1..j+2,j};
/// everything below the first subdiagonal is structurally zero.
template <Field T>
class HessenbergFactor {
  public:
    HessenbergFactor() = default;

    int cols() const { return static_cast<int>(cols_.size()); }
    int rows() const { return cols() + 1; }

    T entry(int k, int j) const {  // 0-based
        const auto& c = cols_[static_cast<std::size_t>(j)];
        return k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : T(0);
    }

    /// Appends column j with entries h_{1..j+2,j}; a short column (length j+1)
    /// encodes breakdown, h_{j+2,j} = 0.
    void push_col(std::vector<T> col) {
        if (static_cast<int>(col.size()) != cols() + 2 && static_cast<int>(col.size()) != cols() + 1)
            throw std::invalid_argument("HessenbergFactor: bad column length");
        cols_.push_back(std::move(col));
    }

    T subdiag(int j) const { return entry(j + 1, j); }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& c : cols_)
            for (const T& v : c) s += abs_s(v) * abs_s(v);
        return std::sqrt(s);
    }

    /// Leading (j+1) x j slice.
    HessenbergFactor truncated(int j) const {
        HessenbergFactor H;
        for (int c = 0; c < j; ++c) {
            std::vector<T> col;
            for (int k = 0; k <= c + 1; ++k) col.push_back(entry(k, c));
            H.push_col(std::move(col));
        }
        return H;
    }

  private:
    std::vector<std::vector<T>> cols_;
};

/// H(sigma) = H - sigma*[I_m; 0]: subtract sigma from the first m diagonal entries.
template <Field T>
HessenbergFactor<T> shift_hessenberg(const HessenbergFactor<T>& H, const T& sigma) {
    HessenbergFactor<T> S;
    for (int j = 0; j < H.cols(); ++j) {
        std::vector<T> col;
        for (int k = 0; k <= j + 1; ++k) {
            T v = H.entry(k, j);
            if (k == j) v -= sigma;
            col.push_back(v);
        }
        S.push_col(std::move(col));
    }
    return S;
}

namespace detail {

/// One complex-safe Givens rotation G such that G*[a;b] = [r;0], r >= 0.
/// Rows: top' = (conj(a)*top + conj(b)*bot)/r, bot' = (-b*top + a*bot)/r.
template <Field T>
struct Givens {
    T a, b;
    double r;
    bool trivial;
    Givens(const T& a_, const T& b_) : a(a_), b(b_), r(0), trivial(b_ == T(0)) {
        if (!trivial) r = std::sqrt(abs_s(a) * abs_s(a) + abs_s(b) * abs_s(b));
    }
    void apply(T& top, T& bot) const {
        if (trivial) return;
        const T t = (conj_s(a) * top + conj_s(b) * bot) / r;
        const T s = (-b * top + a * bot) / r;
        top = t;
        bot = s;
    }
};

/// Back-substitution on an upper triangular system stored as dense columns.
template <Field T>
std::vector<T> back_substitute(const std::vector<std::vector<T>>& R, const std::vector<T>& g,
                               int m, double scale, long* flops) {
    std::vector<T> y(static_cast<std::size_t>(m));
    for (int j = m - 1; j >= 0; --j) {
        T s = g[static_cast<std::size_t>(j)];
        for (int k = j + 1; k < m; ++k)
            s -= R[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
                 y[static_cast<std::size_t>(k)];
        const T d = R[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        if (abs_s(d) <= 1e-14 * scale)
            throw singular_error("singular triangular factor");
        y[static_cast<std::size_t>(j)] = s / d;
        if (flops) *flops += 2 * (m - j) + 1;
    }
    return y;
}

}  // namespace detail

template <Field T>
struct LsqResult {
    std::vector<T> y;  ///< minimizer of ||rhs*e1 - H y||
    std::vector<T> u;  ///< rhs*e1 - H y, length m+1
};

/// Givens-rotation least squares min ||rhs_scale*e1 - H y||_2 for an
/// (m+1) x m upper Hessenberg H.
template <Field T>
LsqResult<T> hessenberg_lsq(const HessenbergFactor<T>& H, const T& rhs_scale,
                            long* flops = nullptr) {
    const int m = H.cols();
    std::vector<std::vector<T>> R(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        R[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(m + 1), T(0));
        for (int k = 0; k <= j + 1; ++k)
            R[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = H.entry(k, j);
    }
    std::vector<T> g(static_cast<std::size_t>(m + 1), T(0));
    g[0] = rhs_scale;
    const double scale = std::max(H.frobenius_norm(), 1e-300);
    for (int j = 0; j < m; ++j) {
        detail::Givens<T> rot(R[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)],
                              R[static_cast<std::size_t>(j)][static_cast<std::size_t>(j + 1)]);
        for (int c = j; c < m; ++c)
            rot.apply(R[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)],
                      R[static_cast<std::size_t>(c)][static_cast<std::size_t>(j + 1)]);
        rot.apply(g[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j + 1)]);
        if (flops) *flops += 6 * (m - j + 1);
    }
    LsqResult<T> out;
    out.y = detail::back_substitute(R, g, m, scale, flops);
    // residual formed from the original H for exactness
    out.u.assign(static_cast<std::size_t>(m + 1), T(0));
    out.u[0] = rhs_scale;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k <= j + 1; ++k)
            out.u[static_cast<std::size_t>(k)] -= H.entry(k, j) * out.y[static_cast<std::size_t>(j)];
    return out;
}

template <Field T>
struct BorderedResult {
    std::vector<T> y;
    T gamma;
};

/// Exact solve of [H_sigma | u] [y; gamma] = rhs_scale*e1 via Givens elimination;
/// the bordered matrix is (m+1) x (m+1) upper Hessenberg.
template <Field T>
BorderedResult<T> solve_bordered(const HessenbergFactor<T>& H_sigma, const std::vector<T>& u,
                                 const T& rhs_scale, long* flops = nullptr) {
    const int m = H_sigma.cols();
    if (static_cast<int>(u.size()) != m + 1)
        throw std::invalid_argument("solve_bordered: u length mismatch");
    const int dim = m + 1;
    std::vector<std::vector<T>> B(static_cast<std::size_t>(dim));
    for (int j = 0; j < m; ++j) {
        B[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(dim), T(0));
        for (int k = 0; k <= j + 1; ++k)
            B[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = H_sigma.entry(k, j);
    }
    B[static_cast<std::size_t>(m)] = u;
    std::vector<T> g(static_cast<std::size_t>(dim), T(0));
    g[0] = rhs_scale;
    double scale = norm2(u);
    scale = std::max(std::sqrt(scale * scale +
                               H_sigma.frobenius_norm() * H_sigma.frobenius_norm()),
                     1e-300);
    for (int j = 0; j < dim - 1; ++j) {
        detail::Givens<T> rot(B[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)],
                              B[static_cast<std::size_t>(j)][static_cast<std::size_t>(j + 1)]);
        for (int c = j; c < dim; ++c)
            rot.apply(B[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)],
                      B[static_cast<std::size_t>(c)][static_cast<std::size_t>(j + 1)]);
        rot.apply(g[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j + 1)]);
        if (flops) *flops += 6 * (dim - j + 1);
    }
    std::vector<T> sol;
    try {
        sol = detail::back_substitute(B, g, dim, scale, flops);
    } catch (const singular_error&) {
        throw singular_error("residual polynomial vanishes at shift");
    }
    BorderedResult<T> out;
    out.gamma = sol[static_cast<std::size_t>(m)];
    sol.resize(static_cast<std::size_t>(m));
    out.y = std::move(sol);
    return out;
}

template <Field T>
struct SquareHessenbergResult {
    std::vector<T> y;
    T beta_last;  ///< -h_{m+1,m} * y_m, residual coefficient along l_{m+1}
};

/// Solves (H_{1:m,1:m} - sigma*I_m) y = rhs_scale*e1 for the FOM/Hessenberg-type
/// inner methods.
template <Field T>
SquareHessenbergResult<T> solve_square_hessenberg_shifted(const HessenbergFactor<T>& H,
                                                          const T& sigma, const T& rhs_scale,
                                                          long* flops = nullptr) {
    const int m = H.cols();
    std::vector<std::vector<T>> M(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        M[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(m), T(0));
        for (int k = 0; k <= std::min(j + 1, m - 1); ++k) {
            T v = H.entry(k, j);
            if (k == j) v -= sigma;
            M[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = v;
        }
    }
    std::vector<T> g(static_cast<std::size_t>(m), T(0));
    g[0] = rhs_scale;
    double scale = 1e-300;
    for (const auto& c : M)
        for (const T& v : c) scale += abs_s(v) * abs_s(v);
    scale = std::sqrt(scale);
    for (int j = 0; j < m - 1; ++j) {
        detail::Givens<T> rot(M[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)],
                              M[static_cast<std::size_t>(j)][static_cast<std::size_t>(j + 1)]);
        for (int c = j; c < m; ++c)
            rot.apply(M[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)],
                      M[static_cast<std::size_t>(c)][static_cast<std::size_t>(j + 1)]);
        rot.apply(g[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j + 1)]);
        if (flops) *flops += 6 * (m - j + 1);
    }
    SquareHessenbergResult<T> out;
    try {
        out.y = detail::back_substitute(M, g, m, scale, flops);
    } catch (const singular_error&) {
        throw singular_error("singular shifted Hessenberg block");
    }
    out.beta_last = -H.entry(m, m - 1) * out.y[static_cast<std::size_t>(m - 1)];
    return out;
}

/// Modified flexible Hessenberg matrix (H - [I;0])*diag(gamma) + [I;0].
template <Field T>
HessenbergFactor<T> assemble_flexible_hessenberg(const HessenbergFactor<T>& H,
                                                 const std::vector<T>& gamma) {
    const int m = H.cols();
    if (static_cast<int>(gamma.size()) != m)
        throw std::invalid_argument("assemble_flexible_hessenberg: gamma length mismatch");
    HessenbergFactor<T> F;
    for (int j = 0; j < m; ++j) {
        std::vector<T> col;
        for (int k = 0; k <= j + 1; ++k) {
            T v = H.entry(k, j);
            if (k == j) v -= T(1);
            v *= gamma[static_cast<std::size_t>(j)];
            if (k == j) v += T(1);
            col.push_back(v);
        }
        F.push_col(std::move(col));
    }
    return F;
}

}  // namespace mskry

#endif  // MSKRY_SMALL_DENSE_HPP
