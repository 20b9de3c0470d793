/// @file solvers_nested.hpp
/// @brief Inner-outer flexible solvers: FCMRH/FGMRES outer loops preconditioned
///        by the fixed-step msHessen/msFOM multi-shift inner solvers, with the
///        per-shift Gamma bookkeeping and flexible search spaces.

#ifndef MSKRY_SOLVERS_NESTED_HPP
#define MSKRY_SOLVERS_NESTED_HPP

#include "mskry/solvers_shifted.hpp"

namespace mskry {

enum class OuterKind { fcmrh, fgmres };
enum class InnerKind { hessen, fom };

namespace detail {

template <class Builder, Field T>
MultiShiftReport<T> nested_minres(const ShiftedProblem<T>& p, InnerKind inner, int it_in,
                                  const SolverConfig& cfg) {
    validate_problem(p);
    if (cfg.restart < 1 || cfg.tol <= 0)
        throw std::invalid_argument("mskry: invalid solver configuration");
    if (it_in < 1) throw std::invalid_argument("mskry: inner step count must be >= 1");
    const SparseMatrix<T>& A = *p.A;
    const index_t n = A.dim();
    const double bnorm = norm2(p.b);
    const int t = static_cast<int>(p.shifts.size());
    const int m_out = cfg.restart;

    const T sigma_seed = (p.seed_policy == SeedPolicy::first_shift) ? p.shifts[0] : T(0);
    // the inner builds run on the seed-absorbed operator; materialize it once
    const SparseMatrix<T> A_eff = (sigma_seed == T(0)) ? A : with_shift(A, sigma_seed);
    std::vector<T> eff(p.shifts.size());
    for (int i = 0; i < t; ++i)
        eff[static_cast<std::size_t>(i)] = p.shifts[static_cast<std::size_t>(i)] - sigma_seed;

    MultiShiftReport<T> rep;
    rep.systems.resize(p.shifts.size());
    for (int i = 0; i < t; ++i)
        rep.systems[static_cast<std::size_t>(i)].shift = p.shifts[static_cast<std::size_t>(i)];
    rep.seed_x.assign(static_cast<std::size_t>(n), T(0));
    for (auto& s : rep.systems) s.x.assign(static_cast<std::size_t>(n), T(0));
    if (bnorm == 0.0) {
        for (auto& s : rep.systems) {
            s.converged = true;
            s.final_relative_residual = 0.0;
        }
        rep.all_converged = true;
        return rep;
    }

    Builder builder(A_eff.frobenius_norm());
    builder.init(p.b);
    const T alpha = builder.alpha();
    rep.seed_history.push_back(1.0);
    rep.mvps_history.push_back(0);

    std::vector<std::vector<Vector<T>>> Z(p.shifts.size());  // per-shift flexible spaces
    std::vector<Vector<T>> Z_seed;
    std::vector<std::vector<T>> gammas(p.shifts.size());  // Gamma diagonals
    std::vector<bool> done(p.shifts.size(), false);

    auto all_done = [&] {
        for (int i = 0; i < t; ++i)
            if (!done[static_cast<std::size_t>(i)]) return false;
        return true;
    };

    for (int j = 1; j <= m_out; ++j) {
        if (rep.mvps + rep.inner_mvps + rep.residual_check_mvps >= cfg.max_mvps) break;
        const Vector<T>& v = builder.last_vector();
        InnerResult<T> in = (inner == InnerKind::hessen)
                                ? inner_shifted_hessenberg(A_eff, eff, v, it_in)
                                : inner_shifted_fom(A_eff, eff, v, it_in);
        rep.inner_mvps += in.mvps;
        Z_seed.push_back(in.z_seed);
        for (int i = 0; i < t; ++i) {
            auto& sys = rep.systems[static_cast<std::size_t>(i)];
            if (!in.ok[static_cast<std::size_t>(i)] && !done[static_cast<std::size_t>(i)]) {
                sys.aborted_singular = true;
                done[static_cast<std::size_t>(i)] = true;
            }
            // a zero collinearity factor is stored and flagged, the LS proceeds
            Z[static_cast<std::size_t>(i)].push_back(
                in.z[static_cast<std::size_t>(i)].empty() ? Vector<T>(static_cast<std::size_t>(n), T(0))
                                                          : in.z[static_cast<std::size_t>(i)]);
            gammas[static_cast<std::size_t>(i)].push_back(in.gamma[static_cast<std::size_t>(i)]);
            sys.gamma_history.push_back(in.gamma[static_cast<std::size_t>(i)]);
        }

        Vector<T> u = apply_shifted(A_eff, T(0), Z_seed.back());
        ++rep.mvps;
        const bool broke = !builder.step(std::move(u));
        const auto& H = builder.factor();

        ++rep.cycles;  // outer steps
        for (int i = 0; i < t; ++i) {
            auto& sys = rep.systems[static_cast<std::size_t>(i)];
            if (done[static_cast<std::size_t>(i)]) continue;
            const HessenbergFactor<T> Hf =
                assemble_flexible_hessenberg(H, gammas[static_cast<std::size_t>(i)]);
            LsqResult<T> ls;
            try {
                ls = hessenberg_lsq(Hf, alpha, &rep.shift_ls_flops);
            } catch (const singular_error&) {
                sys.aborted_singular = true;
                done[static_cast<std::size_t>(i)] = true;
                continue;
            }
            std::fill(sys.x.begin(), sys.x.end(), T(0));
            for (int k = 0; k < j; ++k)
                axpy(ls.y[static_cast<std::size_t>(k)],
                     Z[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], sys.x);
            rep.update_flops += 2 * n * j;
            // true-residual convergence check, counted separately
            Vector<T> ri = apply_shifted(A, p.shifts[static_cast<std::size_t>(i)], sys.x);
            ++rep.residual_check_mvps;
            for (std::size_t k = 0; k < ri.size(); ++k) ri[k] = p.b[k] - ri[k];
            const double rel = norm2(ri) / bnorm;
            sys.residual_history.push_back(rel);
            sys.final_relative_residual = rel;
            if (rel < cfg.tol) {
                sys.converged = true;
                sys.cycles = j;
                done[static_cast<std::size_t>(i)] = true;
            }
            if (eff[static_cast<std::size_t>(i)] == T(0)) rep.seed_x = sys.x;
        }
        rep.seed_history.push_back(rep.systems[0].final_relative_residual);
        rep.mvps_history.push_back(rep.mvps);
        rep.peak_columns = static_cast<long>(t + 1) * j + (j + 1);
        if (all_done() || broke) break;
    }
    rep.all_converged = true;
    for (const auto& s : rep.systems)
        if (!s.converged) rep.all_converged = false;
    return rep;
}

}  // namespace detail

/// Nested flexible solve: outer FCMRH or FGMRES, inner msHessen or msFOM with a
/// fixed inner step count. cfg.restart is the outer step cap (no outer restart).
template <Field T>
MultiShiftReport<T> nested_solve(const ShiftedProblem<T>& p, OuterKind outer, InnerKind inner,
                                 int it_in, const SolverConfig& cfg) {
    if (outer == OuterKind::fcmrh)
        return detail::nested_minres<PivotedHessenbergBuilder<T>>(p, inner, it_in, cfg);
    return detail::nested_minres<ArnoldiBuilder<T>>(p, inner, it_in, cfg);
}

}  // namespace mskry

#endif  // MSKRY_SOLVERS_NESTED_HPP
