/// @file bench.hpp
/// @brief Benchmark harness behind the CLI: problem ingestion/generation, shift
///        parsing, solver dispatch, JSON report and residual-history CSV export.

#ifndef MSKRY_BENCH_HPP
#define MSKRY_BENCH_HPP

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "mskry/cdr3d.hpp"
#include "mskry/matrix_market.hpp"
#include "mskry/solvers_nested.hpp"

namespace mskry::bench {

using json = nlohmann::json;

inline const std::vector<std::string>& solver_ids() {
    static const std::vector<std::string> ids = {"cmrh",         "gmres",         "scmrh",
                                                 "sgmres",       "hessen-fcmrh",  "hessen-fgmres",
                                                 "fom-fcmrh",    "fom-fgmres"};
    return ids;
}

inline bool is_nested_solver(const std::string& id) {
    return id == "hessen-fcmrh" || id == "hessen-fgmres" || id == "fom-fcmrh" ||
           id == "fom-fgmres";
}

/// Parses a shift literal: "2", "-0.5", "1e-3", "0.5+0.2i", "-1i", "i".
inline std::complex<double> parse_complex(std::string s) {
    std::erase_if(s, [](char c) { return c == ' ' || c == '\t'; });
    if (s.empty()) throw std::invalid_argument("empty shift literal");
    auto parse_real = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("bad number: " + t);
        return v;
    };
    if (s.back() != 'i') return {parse_real(s), 0.0};
    s.pop_back();
    // find the +/- separating real and imaginary parts (not an exponent sign)
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
            return {parse_real(s.substr(0, k)), parse_real(s.substr(k))};
    }
    return {0.0, parse_real(s)};
}

inline std::vector<std::complex<double>> parse_shift_list(const std::string& list) {
    std::vector<std::complex<double>> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string::npos) comma = list.size();
        const std::string tok = list.substr(start, comma - start);
        if (!tok.empty()) out.push_back(parse_complex(tok));
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty shift list");
    return out;
}

struct RunConfig {
    std::string matrix_path;          ///< Matrix Market file, or
    std::optional<Cdr3dSpec> gen;     ///< generator spec (exactly one source)
    bool negate = false;
    std::string rhs = "ones";         ///< "ones" or a path
    std::vector<std::complex<double>> shifts;
    std::string seed = "first";       ///< "first" | "zero"
    std::string solver = "scmrh";
    int restart = 40;
    double tol = 1e-8;
    long max_mvps = 6000;
    int inner_it = 10;
    int outer_max = 100;
    std::string report_path;
    std::string history_path;
};

struct RunOutcome {
    int exit_code = 1;
    json report;
    std::vector<std::tuple<long, int, double>> history;  ///< (mvps, shift_index, rel residual)
};

namespace detail {

inline std::string format_shift(std::complex<double> s) {
    std::ostringstream os;
    os.precision(17);
    os << s.real();
    if (s.imag() != 0.0) os << (s.imag() >= 0 ? "+" : "") << s.imag() << "i";
    return os.str();
}

template <Field T>
Vector<T> load_rhs(const RunConfig& cfg, index_t n) {
    if (cfg.rhs == "ones") return Vector<T>(static_cast<std::size_t>(n), T(1));
    std::ifstream in(cfg.rhs);
    if (!in) throw std::runtime_error("cannot read rhs file: " + cfg.rhs);
    Vector<T> b;
    std::string tok;
    while (in >> tok) {
        const std::complex<double> v = parse_complex(tok);
        if constexpr (scalar_traits<T>::is_complex)
            b.push_back(v);
        else {
            if (v.imag() != 0.0) throw std::runtime_error("complex rhs entry in a real run");
            b.push_back(v.real());
        }
    }
    if (static_cast<index_t>(b.size()) != n)
        throw std::runtime_error("rhs length does not match the matrix dimension");
    return b;
}

template <Field T>
RunOutcome run_typed(const RunConfig& cfg, SparseMatrix<T> A) {
    if (cfg.negate) A = negated(A);
    const Vector<T> b = load_rhs<T>(cfg, A.dim());

    ShiftedProblem<T> prob;
    prob.A = &A;
    prob.b = b;
    for (const auto& s : cfg.shifts) {
        if constexpr (scalar_traits<T>::is_complex)
            prob.shifts.push_back(s);
        else
            prob.shifts.push_back(s.real());
    }
    prob.seed_policy = (cfg.seed == "zero") ? SeedPolicy::zero_shift : SeedPolicy::first_shift;

    SolverConfig scfg;
    scfg.restart = cfg.restart;
    scfg.tol = cfg.tol;
    scfg.max_mvps = cfg.max_mvps;

    const auto t0 = std::chrono::steady_clock::now();
    MultiShiftReport<T> rep;
    if (cfg.solver == "cmrh" || cfg.solver == "gmres") {
        if (prob.shifts.size() != 1)
            throw std::runtime_error("solver '" + cfg.solver + "' takes exactly one shift");
        const T sigma = prob.shifts[0];
        const SparseMatrix<T> As = (sigma == T(0)) ? A : with_shift(A, sigma);
        SolveReport<T> sr = (cfg.solver == "cmrh") ? cmrh(As, b, {}, scfg) : gmres(As, b, {}, scfg);
        rep.systems.resize(1);
        rep.systems[0].shift = sigma;
        rep.systems[0].x = sr.x;
        rep.systems[0].converged = sr.converged;
        rep.systems[0].cycles = sr.cycles;
        rep.systems[0].residual_history.assign(sr.residual_history.begin() + 1,
                                               sr.residual_history.end());
        rep.systems[0].final_relative_residual =
            sr.residual_history.empty() ? 0.0 : sr.residual_history.back();
        rep.seed_x = sr.x;
        rep.cycles = sr.cycles;
        rep.mvps = sr.mvps;
        rep.mvps_history = sr.mvps_history;
        rep.all_converged = sr.converged;
    } else if (cfg.solver == "scmrh") {
        rep = shifted_cmrh(prob, scfg);
    } else if (cfg.solver == "sgmres") {
        rep = shifted_gmres(prob, scfg);
    } else if (is_nested_solver(cfg.solver)) {
        scfg.restart = cfg.outer_max;
        const OuterKind outer = (cfg.solver == "hessen-fcmrh" || cfg.solver == "fom-fcmrh")
                                    ? OuterKind::fcmrh
                                    : OuterKind::fgmres;
        const InnerKind inner = (cfg.solver == "hessen-fcmrh" || cfg.solver == "hessen-fgmres")
                                    ? InnerKind::hessen
                                    : InnerKind::fom;
        rep = nested_solve(prob, outer, inner, cfg.inner_it, scfg);
    } else {
        throw std::runtime_error("unknown solver id: " + cfg.solver);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // final true residuals, independent of the solver's collinearity estimates
    const double bnorm = norm2(b);
    RunOutcome out;
    json shifts_json = json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < rep.systems.size(); ++i) {
        auto& sys = rep.systems[i];
        Vector<T> r = apply_shifted(A, sys.shift, sys.x);
        ++rep.residual_check_mvps;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
        const double rel = bnorm == 0.0 ? 0.0 : norm2(r) / bnorm;
        shifts_json.push_back({{"shift", format_shift(std::complex<double>(sys.shift))},
                               {"converged", sys.converged},
                               {"cycles_or_outer_steps", sys.converged ? sys.cycles : rep.cycles},
                               {"final_true_relative_residual", rel}});
        if (!sys.converged) all_ok = false;
        for (std::size_t k = 0; k < sys.residual_history.size(); ++k) {
            const long mv = (k + 1 < rep.mvps_history.size()) ? rep.mvps_history[k + 1]
                                                              : rep.mvps;
            out.history.emplace_back(mv, static_cast<int>(i), sys.residual_history[k]);
        }
    }

    out.report = {{"solver", cfg.solver},
                  {"config",
                   {{"restart", cfg.restart},
                    {"tol", cfg.tol},
                    {"max_mvps", cfg.max_mvps},
                    {"inner_it", cfg.inner_it},
                    {"outer_max", cfg.outer_max},
                    {"seed", cfg.seed},
                    {"negate", cfg.negate},
                    {"rhs", cfg.rhs}}},
                  {"n", A.dim()},
                  {"nnz", A.nnz()},
                  {"shifts", shifts_json},
                  {"global",
                   {{"mvps", rep.mvps},
                    {"inner_mvps", rep.inner_mvps},
                    {"residual_check_mvps", rep.residual_check_mvps},
                    {"wall_seconds", wall}}}};
    out.exit_code = all_ok ? 0 : 2;
    return out;
}

inline void write_outputs(const RunConfig& cfg, const RunOutcome& out) {
    if (!cfg.report_path.empty()) {
        std::ofstream f(cfg.report_path);
        if (!f) throw std::runtime_error("cannot write report: " + cfg.report_path);
        f << out.report.dump(2) << "\n";
    }
    if (!cfg.history_path.empty()) {
        std::ofstream f(cfg.history_path);
        if (!f) throw std::runtime_error("cannot write history: " + cfg.history_path);
        f << "mvps,shift_index,relative_residual\n";
        f.precision(17);
        for (const auto& [mv, idx, rel] : out.history)
            f << mv << "," << idx << "," << rel << "\n";
    }
}

}  // namespace detail

/// Executes one configuration. Exit code 0 when every shift converged, 2 on
/// partial convergence, 1 on configuration/IO errors (diagnostic on `diag`).
inline RunOutcome run(const RunConfig& cfg, std::ostream& diag) {
    RunOutcome out;
    try {
        if (cfg.shifts.empty()) throw std::runtime_error("shift list is empty");
        if (cfg.gen.has_value() == !cfg.matrix_path.empty())
            throw std::runtime_error("exactly one problem source required");
        bool complex_run = false;
        for (const auto& s : cfg.shifts)
            if (s.imag() != 0.0) complex_run = true;
        if (cfg.gen) {
            SparseMatrix<double> A = generate_cdr3d(*cfg.gen);
            out = complex_run ? detail::run_typed<std::complex<double>>(cfg, to_complex(A))
                              : detail::run_typed<double>(cfg, std::move(A));
        } else {
            std::ifstream in(cfg.matrix_path);
            if (!in) throw std::runtime_error("cannot read matrix file: " + cfg.matrix_path);
            {
                std::ifstream probe(cfg.matrix_path);
                if (read_mm_header(probe).field == MmField::complex_) complex_run = true;
            }
            out = complex_run
                      ? detail::run_typed<std::complex<double>>(
                            cfg, read_matrix_market<std::complex<double>>(in))
                      : detail::run_typed<double>(cfg, read_matrix_market<double>(in));
        }
        detail::write_outputs(cfg, out);
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        out.exit_code = 1;
    }
    return out;
}

/// Runs several solver ids on one problem and emits an aligned CSV table.
inline int compare(const RunConfig& base, const std::vector<std::string>& solvers,
                   const std::string& out_csv, std::ostream& diag) {
    if (solvers.empty()) {
        diag << "error: empty solver set\n";
        return 1;
    }
    std::ostringstream table;
    table << "solver,n,nnz,all_converged,mvps,inner_mvps,residual_check_mvps,wall_seconds\n";
    int worst = 0;
    for (const std::string& id : solvers) {
        RunConfig cfg = base;
        cfg.solver = id;
        cfg.report_path.clear();
        cfg.history_path.clear();
        const RunOutcome out = run(cfg, diag);
        if (out.exit_code == 1) return 1;
        worst = std::max(worst, out.exit_code);
        const auto& g = out.report["global"];
        table << id << "," << out.report["n"] << "," << out.report["nnz"] << ","
              << (out.exit_code == 0 ? 1 : 0) << "," << g["mvps"] << "," << g["inner_mvps"]
              << "," << g["residual_check_mvps"] << "," << g["wall_seconds"] << "\n";
    }
    if (!out_csv.empty()) {
        std::ofstream f(out_csv);
        if (!f) {
            diag << "error: cannot write " << out_csv << "\n";
            return 1;
        }
        f << table.str();
    } else {
        diag << table.str();
    }
    return worst;
}

}  // namespace mskry::bench

#endif  // MSKRY_BENCH_HPP
