/// @file hessenberg.hpp
/// @brief Pivoted Hessenberg and modified Gram-Schmidt Arnoldi basis builders,
///        usable one step at a time so the flexible outer loops can reuse them.

#ifndef MSKRY_HESSENBERG_HPP
#define MSKRY_HESSENBERG_HPP

#include <algorithm>
#include <functional>
#include <limits>

#include "mskry/small_dense.hpp"

namespace mskry {

template <Field T>
using OperatorFn = std::function<Vector<T>(const Vector<T>&)>;

/// Pivoted Hessenberg process: unit lower trapezoidal basis under the
/// permutation q, one operator application per step.
///
/// Usage: init(r0), then repeatedly apply the operator to last_vector() and
/// feed the product to step(); step() returns false on (lucky) breakdown.
template <Field T>
class PivotedHessenbergBuilder {
  public:
    /// breakdown_scale should approximate ||A||_F (times max column inf-norm,
    /// which is 1 by pivoting); ||u||_inf <= 1e-14 * breakdown_scale is
    /// treated as h_{j+1,j} = 0.
    explicit PivotedHessenbergBuilder(double breakdown_scale = 0.0)
        : breakdown_scale_(breakdown_scale) {}

    void init(const Vector<T>& r0) {
        if (is_zero(r0)) throw std::invalid_argument("hessenberg: zero start vector");
        n_ = static_cast<index_t>(r0.size());
        q_.resize(static_cast<std::size_t>(n_));
        for (index_t i = 0; i < n_; ++i) q_[static_cast<std::size_t>(i)] = i;
        // infinity-norm pivot, ties broken by smallest index
        std::size_t j0 = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < r0.size(); ++i)
            if (abs_s(r0[i]) > best) {
                best = abs_s(r0[i]);
                j0 = i;
            }
        alpha_ = r0[j0];
        Vector<T> l1 = r0;
        scale(safe_div(T(1), alpha_), l1);
        l1[j0] = T(1);  // exact unit pivot
        std::swap(q_[0], q_[j0]);
        L_.clear();
        L_.push_back(std::move(l1));
        H_ = HessenbergFactor<T>{};
        breakdown_ = false;
    }

    /// The basis vector the operator should be applied to next.
    const Vector<T>& last_vector() const { return L_.back(); }

    /// Consumes u = A * last_vector(); returns false on breakdown.
    bool step(Vector<T> u) {
        const int j = H_.cols() + 1;  // 1-based step index
        std::vector<T> col;
        for (int k = 0; k < j; ++k) {
            const T h = u[static_cast<std::size_t>(q_[static_cast<std::size_t>(k)])];
            col.push_back(h);
            if (h != T(0)) axpy(-h, L_[static_cast<std::size_t>(k)], u);
            u[static_cast<std::size_t>(q_[static_cast<std::size_t>(k)])] = T(0);  // exact zero
        }
        const double tol = 1e-14 * breakdown_scale_;
        if (j >= n_ || norm_inf(u) <= tol) {
            breakdown_ = true;
            H_.push_col(std::move(col));  // short column: h_{j+1,j} = 0
            return false;
        }
        // pivot among remaining positions, ties broken by smallest position
        std::size_t p0 = static_cast<std::size_t>(j);
        double best = -1.0;
        for (index_t p = j; p < n_; ++p) {
            const double a = abs_s(u[static_cast<std::size_t>(q_[static_cast<std::size_t>(p)])]);
            if (a > best) {
                best = a;
                p0 = static_cast<std::size_t>(p);
            }
        }
        const T hsub = u[static_cast<std::size_t>(q_[p0])];
        col.push_back(hsub);
        H_.push_col(std::move(col));
        scale(safe_div(T(1), hsub), u);
        u[static_cast<std::size_t>(q_[p0])] = T(1);  // exact unit pivot
        L_.push_back(std::move(u));
        std::swap(q_[static_cast<std::size_t>(j)], q_[p0]);
        return true;
    }

    int steps() const { return H_.cols(); }
    bool breakdown() const { return breakdown_; }
    const T& alpha() const { return alpha_; }
    const std::vector<Vector<T>>& basis() const { return L_; }
    const std::vector<index_t>& permutation() const { return q_; }
    const HessenbergFactor<T>& factor() const { return H_; }

  private:
    double breakdown_scale_;
    index_t n_ = 0;
    std::vector<Vector<T>> L_;
    std::vector<index_t> q_;
    HessenbergFactor<T> H_;
    T alpha_ = T(0);
    bool breakdown_ = false;
};

/// Completed pivoted Hessenberg basis.
template <Field T>
struct PivotedHessenbergBasis {
    int m = 0;                       ///< steps completed
    std::vector<Vector<T>> L;        ///< m or m+1 columns (m on breakdown)
    std::vector<index_t> q;          ///< pivot permutation
    HessenbergFactor<T> H;           ///< (m+1) x m factor
    T alpha = T(0);                  ///< initial scaling
    bool breakdown = false;
};

template <Field T>
PivotedHessenbergBasis<T> build_pivoted_hessenberg(const OperatorFn<T>& apply, const Vector<T>& r0,
                                                   int m_max, double breakdown_scale = 0.0,
                                                   long* mvps = nullptr) {
    if (m_max < 1) throw std::invalid_argument("hessenberg: m_max must be >= 1");
    PivotedHessenbergBuilder<T> b(breakdown_scale);
    b.init(r0);
    for (int j = 0; j < m_max; ++j) {
        Vector<T> u = apply(b.last_vector());
        if (mvps) ++*mvps;
        if (!b.step(std::move(u))) break;
    }
    return {b.steps(), b.basis(), b.permutation(), b.factor(), b.alpha(), b.breakdown()};
}

/// Modified Gram-Schmidt Arnoldi, same stepping protocol.
template <Field T>
class ArnoldiBuilder {
  public:
    explicit ArnoldiBuilder(double breakdown_scale = 0.0) : breakdown_scale_(breakdown_scale) {}

    void init(const Vector<T>& r0) {
        if (is_zero(r0)) throw std::invalid_argument("arnoldi: zero start vector");
        n_ = static_cast<index_t>(r0.size());
        beta_ = norm2(r0);
        Vector<T> v1 = r0;
        scale(T(1.0 / beta_), v1);
        V_.clear();
        V_.push_back(std::move(v1));
        H_ = HessenbergFactor<T>{};
        breakdown_ = false;
    }

    const Vector<T>& last_vector() const { return V_.back(); }

    bool step(Vector<T> u) {
        const int j = H_.cols() + 1;
        std::vector<T> col;
        for (int k = 0; k < j; ++k) {
            const T h = dot(V_[static_cast<std::size_t>(k)], u);
            col.push_back(h);
            axpy(-h, V_[static_cast<std::size_t>(k)], u);
        }
        // one reorthogonalization pass keeps V numerically orthonormal even
        // when the Krylov space is close to invariant
        for (int k = 0; k < j; ++k) {
            const T h = dot(V_[static_cast<std::size_t>(k)], u);
            col[static_cast<std::size_t>(k)] += h;
            axpy(-h, V_[static_cast<std::size_t>(k)], u);
        }
        const double nu = norm2(u);
        const double tol = 1e-14 * breakdown_scale_;
        if (j >= n_ || nu <= tol) {
            breakdown_ = true;
            H_.push_col(std::move(col));
            return false;
        }
        col.push_back(T(nu));
        H_.push_col(std::move(col));
        scale(T(1.0 / nu), u);
        V_.push_back(std::move(u));
        return true;
    }

    int steps() const { return H_.cols(); }
    bool breakdown() const { return breakdown_; }
    double beta() const { return beta_; }
    /// rhs scaling for the small least squares problems (||r0||_2)
    T alpha() const { return T(beta_); }
    const std::vector<Vector<T>>& basis() const { return V_; }
    const HessenbergFactor<T>& factor() const { return H_; }

  private:
    double breakdown_scale_;
    index_t n_ = 0;
    std::vector<Vector<T>> V_;
    HessenbergFactor<T> H_;
    double beta_ = 0.0;
    bool breakdown_ = false;
};

template <Field T>
struct ArnoldiBasis {
    int m = 0;
    std::vector<Vector<T>> V;
    HessenbergFactor<T> H;
    double beta = 0.0;
    bool breakdown = false;
};

template <Field T>
ArnoldiBasis<T> build_arnoldi(const OperatorFn<T>& apply, const Vector<T>& r0, int m_max,
                              double breakdown_scale = 0.0, long* mvps = nullptr) {
    if (m_max < 1) throw std::invalid_argument("arnoldi: m_max must be >= 1");
    ArnoldiBuilder<T> b(breakdown_scale);
    b.init(r0);
    for (int j = 0; j < m_max; ++j) {
        Vector<T> u = apply(b.last_vector());
        if (mvps) ++*mvps;
        if (!b.step(std::move(u))) break;
    }
    return {b.steps(), b.basis(), b.factor(), b.beta(), b.breakdown()};
}

namespace detail {

/// Eigenvalues of a dense real symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> S) {
    const int m = static_cast<int>(S.size());
    auto off = [&] {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                s += S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                     S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return s;
    };
    double dscale = 1e-300;
    for (int i = 0; i < m; ++i)
        dscale = std::max(dscale, std::abs(S[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]));
    for (int sweep = 0; sweep < 100 && off() > 1e-30 * dscale * dscale * m; ++sweep) {
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                const double apq = S[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (std::abs(apq) <= 1e-18 * dscale) continue;
                const double app = S[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
                const double aqq = S[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t =
                    (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < m; ++k) {
                    double& skp = S[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double& skq = S[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    const double np = c * skp - s * skq;
                    const double nq = s * skp + c * skq;
                    skp = np;
                    skq = nq;
                }
                for (int k = 0; k < m; ++k) {
                    double& spk = S[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
                    double& sqk = S[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
                    const double np = c * spk - s * sqk;
                    const double nq = s * spk + c * sqk;
                    spk = np;
                    sqk = nq;
                }
            }
    }
    std::vector<double> ev(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        ev[static_cast<std::size_t>(i)] = S[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return ev;
}

}  // namespace detail

/// kappa(L) = sigma_max/sigma_min of the column slab, via the eigenvalues of
/// the Gram matrix (real symmetric embedding for the complex field).
template <Field T>
double basis_condition_number(const std::vector<Vector<T>>& columns) {
    const int m = static_cast<int>(columns.size());
    if (m == 0) throw std::invalid_argument("basis_condition_number: empty slab");
    std::vector<std::vector<T>> G(static_cast<std::size_t>(m),
                                  std::vector<T>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                dot(columns[static_cast<std::size_t>(i)], columns[static_cast<std::size_t>(j)]);
    std::vector<std::vector<double>> S;
    if constexpr (scalar_traits<T>::is_complex) {
        // [X -Y; Y X] has the eigenvalues of X + iY, each doubled
        S.assign(static_cast<std::size_t>(2 * m), std::vector<double>(static_cast<std::size_t>(2 * m), 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const std::complex<double> g = G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.real();
                S[static_cast<std::size_t>(i + m)][static_cast<std::size_t>(j + m)] = g.real();
                S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + m)] = -g.imag();
                S[static_cast<std::size_t>(i + m)][static_cast<std::size_t>(j)] = g.imag();
            }
    } else {
        S.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    scalar_traits<T>::real(G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    const std::vector<double> ev = detail::symmetric_eigenvalues(std::move(S));
    double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
    for (double d : ev) {
        lmin = std::min(lmin, d);
        lmax = std::max(lmax, d);
    }
    if (lmin <= 1e-28 * lmax) throw singular_error("basis_condition_number: rank-deficient slab");
    return std::sqrt(lmax / lmin);
}

}  // namespace mskry

#endif  // MSKRY_HESSENBERG_HPP
