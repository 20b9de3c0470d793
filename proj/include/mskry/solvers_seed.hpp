/// @file solvers_seed.hpp
/// @brief Restarted single-system solvers: CMRH(m) on the pivoted Hessenberg
///        basis and GMRES(m) on the Arnoldi basis, sharing one driver.

#ifndef MSKRY_SOLVERS_SEED_HPP
#define MSKRY_SOLVERS_SEED_HPP

#include "mskry/hessenberg.hpp"
#include "mskry/sparse_matrix.hpp"

namespace mskry {

struct SolverConfig {
    int restart = 40;
    double tol = 1e-8;
    long max_mvps = 6000;
    bool explicit_residual_check = false;
};

template <Field T>
struct SolveReport {
    Vector<T> x;
    bool converged = false;
    long cycles = 0;
    long mvps = 0;
    std::vector<double> residual_history;  ///< relative residual, initial value then per cycle
    std::vector<long> mvps_history;        ///< cumulative MVPs at each history point
    // flop-class counters: basis build / least squares / n-vector updates
    long basis_flops = 0;
    long ls_flops = 0;
    long update_flops = 0;
};

namespace detail {

inline void validate_config(const SolverConfig& cfg) {
    if (cfg.restart < 1 || cfg.tol <= 0 || cfg.max_mvps < cfg.restart)
        throw std::invalid_argument("mskry: invalid solver configuration");
}

template <class Builder, Field T>
SolveReport<T> restarted_minres(const SparseMatrix<T>& A, const Vector<T>& b, const Vector<T>& x0,
                                const SolverConfig& cfg) {
    validate_config(cfg);
    if (static_cast<index_t>(b.size()) != A.dim() ||
        (!x0.empty() && x0.size() != b.size()))
        throw std::invalid_argument("mskry: dimension mismatch");
    const index_t n = A.dim();
    const double anorm = A.frobenius_norm();
    const double bnorm = norm2(b);

    SolveReport<T> rep;
    rep.x = x0.empty() ? Vector<T>(b.size(), T(0)) : x0;
    Vector<T> r = b;
    if (!x0.empty() && !is_zero(x0)) {
        r = matvec(A, rep.x);
        ++rep.mvps;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
    }
    if (bnorm == 0.0 || norm2(r) / std::max(bnorm, 1e-300) < cfg.tol) {
        rep.converged = true;
        rep.residual_history.push_back(bnorm == 0.0 ? 0.0 : norm2(r) / bnorm);
        rep.mvps_history.push_back(rep.mvps);
        return rep;
    }
    rep.residual_history.push_back(norm2(r) / bnorm);
    rep.mvps_history.push_back(rep.mvps);

    while (rep.mvps < cfg.max_mvps) {
        Builder builder(anorm);
        builder.init(r);
        LsqResult<T> ls;
        bool have_ls = false;
        bool broke = false;
        double colmax = norm2(builder.last_vector());
        while (builder.steps() < cfg.restart && rep.mvps < cfg.max_mvps) {
            Vector<T> u = matvec(A, builder.last_vector());
            ++rep.mvps;
            rep.basis_flops += 2 * A.nnz() + 2 * n * (builder.steps() + 1);
            broke = !builder.step(std::move(u));
            ls = hessenberg_lsq(builder.factor(), builder.alpha(), &rep.ls_flops);
            have_ls = true;
            if (broke) break;
            colmax = std::max(colmax, norm2(builder.last_vector()));
            // early cycle exit once an upper bound on the true residual
            // ||L u||_2 <= max_k ||l_k||_2 * sqrt(j+1) * ||u||_2 clears tol
            const double bound = colmax * std::sqrt(builder.steps() + 1.0);
            if (norm2(ls.u) * bound / bnorm < cfg.tol) break;
        }
        if (!have_ls) break;
        const int j = builder.steps();
        const auto& L = builder.basis();
        for (int k = 0; k < j; ++k)
            axpy(ls.y[static_cast<std::size_t>(k)], L[static_cast<std::size_t>(k)], rep.x);
        rep.update_flops += 2 * n * j;
        // restart residual r = L_{j+1} u, no extra MVP
        std::fill(r.begin(), r.end(), T(0));
        for (std::size_t k = 0; k < L.size(); ++k) axpy(ls.u[k], L[k], r);
        rep.update_flops += 2 * n * static_cast<long>(L.size());
        if (cfg.explicit_residual_check) {
            r = matvec(A, rep.x);
            ++rep.mvps;
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
        }
        ++rep.cycles;
        const double rel = norm2(r) / bnorm;
        rep.residual_history.push_back(rel);
        rep.mvps_history.push_back(rep.mvps);
        if (rel < cfg.tol) {
            rep.converged = true;
            break;
        }
        // on lucky breakdown with a nonzero true residual, restart from r
    }
    return rep;
}

}  // namespace detail

/// Restarted CMRH with the pivoting strategy.
template <Field T>
SolveReport<T> cmrh(const SparseMatrix<T>& A, const Vector<T>& b, const Vector<T>& x0,
                    const SolverConfig& cfg) {
    return detail::restarted_minres<PivotedHessenbergBuilder<T>>(A, b, x0, cfg);
}

/// Restarted GMRES baseline on the same report shape.
template <Field T>
SolveReport<T> gmres(const SparseMatrix<T>& A, const Vector<T>& b, const Vector<T>& x0,
                     const SolverConfig& cfg) {
    return detail::restarted_minres<ArnoldiBuilder<T>>(A, b, x0, cfg);
}

}  // namespace mskry

#endif  // MSKRY_SOLVERS_SEED_HPP
