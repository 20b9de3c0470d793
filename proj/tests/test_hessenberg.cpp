#include <catch2/catch_amalgamated.hpp>

#include "mskry/hessenberg.hpp"
#include "oracle.hpp"

using namespace mskry;
using C = std::complex<double>;

namespace {

template <class T>
OperatorFn<T> op_of(const SparseMatrix<T>& A) {
    return [&A](const Vector<T>& x) { return matvec(A, x); };
}

// max |A L_j - L H(:,j)| over all columns, for relation checks
template <class T>
double relation_error(const SparseMatrix<T>& A, const std::vector<Vector<T>>& L,
                      const HessenbergFactor<T>& H) {
    double err = 0.0;
    for (int j = 0; j < H.cols(); ++j) {
        Vector<T> lhs = matvec(A, L[static_cast<std::size_t>(j)]);
        Vector<T> rhs(lhs.size(), T(0));
        for (int k = 0; k <= j + 1 && k < static_cast<int>(L.size()); ++k)
            axpy(H.entry(k, j), L[static_cast<std::size_t>(k)], rhs);
        for (std::size_t i = 0; i < lhs.size(); ++i) err = std::max(err, abs_s(lhs[i] - rhs[i]));
    }
    return err;
}

}  // namespace

TEST_CASE("pivoted hessenberg: identity operator breaks down immediately") {
    auto I2 = SparseMatrix<double>::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
    auto b = build_pivoted_hessenberg<double>(op_of(I2), {1.0, 1.0}, 5, I2.frobenius_norm());
    CHECK(b.breakdown);
    CHECK(b.m == 1);
    REQUIRE(b.H.cols() == 1);
    CHECK(b.H.entry(0, 0) == 1.0);
    CHECK(b.H.entry(1, 0) == 0.0);
}

TEST_CASE("pivoted hessenberg: diag(2,3) hand trace") {
    auto A = SparseMatrix<double>::from_triplets(2, {{0, 0, 2.0}, {1, 1, 3.0}});
    SECTION("r0 = (1,1): alpha 1, full trace to breakdown") {
        auto b = build_pivoted_hessenberg<double>(op_of(A), {1.0, 1.0}, 5, A.frobenius_norm());
        CHECK(b.alpha == 1.0);
        REQUIRE(b.m == 2);
        CHECK(b.breakdown);
        // q stays (0,1): first pivot is position 0 on ties
        CHECK(b.q == std::vector<index_t>{0, 1});
        CHECK(b.L[0] == Vector<double>{1.0, 1.0});
        CHECK(b.L[1] == Vector<double>{0.0, 1.0});
        CHECK(b.H.entry(0, 0) == 2.0);
        CHECK(b.H.entry(1, 0) == 1.0);
        CHECK(b.H.entry(0, 1) == 0.0);
        CHECK(b.H.entry(1, 1) == 3.0);
        CHECK(b.H.entry(2, 1) == 0.0);  // breakdown row
    }
    SECTION("r0 = (1,2): inf-norm pivot picks the second entry") {
        auto b = build_pivoted_hessenberg<double>(op_of(A), {1.0, 2.0}, 1, A.frobenius_norm());
        CHECK(b.alpha == 2.0);
        CHECK(b.L[0] == Vector<double>{0.5, 1.0});
        CHECK(b.q[0] == 1);
        CHECK(b.q[1] == 0);
    }
}

TEST_CASE("pivoted hessenberg: invariants on random systems") {
    for (unsigned seed = 1; seed <= 6; ++seed) {
        auto A = oracle::random_sparse<double>(40, seed);
        auto r0 = oracle::random_vector<double>(40, seed + 50);
        auto b = build_pivoted_hessenberg<double>(op_of(A), r0, 15, A.frobenius_norm());
        REQUIRE(b.m == 15);

        // pivot structure, exact: zeros above the pivot, one at it, bounded below
        for (std::size_t j = 0; j < b.L.size(); ++j) {
            for (std::size_t k = 0; k < j; ++k)
                CHECK(b.L[j][static_cast<std::size_t>(b.q[k])] == 0.0);
            CHECK(b.L[j][static_cast<std::size_t>(b.q[j])] == 1.0);
            for (std::size_t k = j + 1; k < b.L.size(); ++k)
                CHECK(std::abs(b.L[j][static_cast<std::size_t>(b.q[k])]) <= 1.0);
        }

        // q is a bijection
        std::vector<index_t> sorted = b.q;
        std::sort(sorted.begin(), sorted.end());
        for (index_t i = 0; i < 40; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);

        // relation A L_m = L_{m+1} H via random probe
        auto w = oracle::random_vector<double>(b.m, seed + 99);
        Vector<double> Lw(r0.size(), 0.0);
        for (int j = 0; j < b.m; ++j) axpy(w[static_cast<std::size_t>(j)], b.L[static_cast<std::size_t>(j)], Lw);
        Vector<double> lhs = matvec(A, Lw);
        Vector<double> Hw(static_cast<std::size_t>(b.m) + 1, 0.0);
        for (int j = 0; j < b.m; ++j)
            for (int k = 0; k <= j + 1; ++k)
                Hw[static_cast<std::size_t>(k)] += b.H.entry(k, j) * w[static_cast<std::size_t>(j)];
        Vector<double> rhs(r0.size(), 0.0);
        for (std::size_t k = 0; k < b.L.size(); ++k) axpy(Hw[k], b.L[k], rhs);
        double num = 0;
        for (std::size_t i = 0; i < lhs.size(); ++i) num += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
        CHECK(std::sqrt(num) <= 1e-11 * std::max(1.0, norm2(lhs)));
    }
}

TEST_CASE("pivoted hessenberg: H is zero below the first subdiagonal") {
    auto A = oracle::random_sparse<double>(20, 3);
    auto b = build_pivoted_hessenberg<double>(op_of(A), oracle::random_vector<double>(20, 4), 8,
                                              A.frobenius_norm());
    for (int j = 0; j < b.H.cols(); ++j)
        for (int k = j + 2; k <= b.H.cols(); ++k) CHECK(b.H.entry(k, j) == 0.0);
}

TEST_CASE("pivoted hessenberg: complex field") {
    auto A = oracle::random_sparse<C>(25, 7);
    auto r0 = oracle::random_vector<C>(25, 8);
    auto b = build_pivoted_hessenberg<C>(op_of(A), r0, 10, A.frobenius_norm());
    CHECK(relation_error(A, b.L, b.H) <= 1e-11 * A.frobenius_norm());
    for (std::size_t j = 0; j < b.L.size(); ++j)
        CHECK(b.L[j][static_cast<std::size_t>(b.q[j])] == C(1.0));
}

TEST_CASE("pivoted hessenberg: zero start vector rejected") {
    CHECK_THROWS_AS(build_pivoted_hessenberg<double>([](const Vector<double>& x) { return x; },
                                                     {0.0, 0.0}, 3),
                    std::invalid_argument);
}

TEST_CASE("arnoldi: identity operator") {
    auto I2 = SparseMatrix<double>::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
    auto b = build_arnoldi<double>(op_of(I2), {1.0, 1.0}, 5, I2.frobenius_norm());
    CHECK(b.breakdown);
    CHECK(b.m == 1);
    CHECK(b.H.entry(0, 0) == Catch::Approx(1.0));
    CHECK(b.H.entry(1, 0) == 0.0);
}

TEST_CASE("arnoldi: orthonormality and Rayleigh coefficients") {
    auto A = SparseMatrix<double>::from_triplets(2, {{0, 0, 2.0}, {1, 1, 3.0}});
    auto b = build_arnoldi<double>(op_of(A), {1.0, 1.0}, 5, A.frobenius_norm());
    REQUIRE(b.m == 2);
    CHECK(b.beta == Catch::Approx(std::sqrt(2.0)));
    for (std::size_t i = 0; i < b.V.size(); ++i)
        for (std::size_t j = 0; j < b.V.size(); ++j)
            CHECK(std::abs(dot(b.V[i], b.V[j]) - (i == j ? 1.0 : 0.0)) <= 1e-13);
    // H entries are v_i^H A v_j
    for (int j = 0; j < b.m; ++j)
        for (int k = 0; k <= j + 1 && k < static_cast<int>(b.V.size()); ++k) {
            Vector<double> Av = matvec(A, b.V[static_cast<std::size_t>(j)]);
            CHECK(b.H.entry(k, j) ==
                  Catch::Approx(dot(b.V[static_cast<std::size_t>(k)], Av)).margin(1e-13));
        }
}

TEST_CASE("arnoldi: orthonormality on random larger system") {
    auto A = oracle::random_sparse<double>(40, 12);
    auto b = build_arnoldi<double>(op_of(A), oracle::random_vector<double>(40, 13), 20,
                                   A.frobenius_norm());
    for (std::size_t i = 0; i < b.V.size(); ++i)
        for (std::size_t j = 0; j < b.V.size(); ++j)
            CHECK(std::abs(dot(b.V[i], b.V[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    CHECK(relation_error(A, b.V, b.H) <= 1e-11 * A.frobenius_norm());
}

TEST_CASE("basis_condition_number") {
    SECTION("orthonormal columns give 1") {
        std::vector<Vector<double>> cols = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
        CHECK(basis_condition_number(cols) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("single column gives 1") {
        std::vector<Vector<double>> cols = {{3.0, 4.0}};
        CHECK(basis_condition_number(cols) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("hand example [[1,0],[1,1]]") {
        // eigenvalues of L^T L = [[2,1],[1,1]] are (3 +/- sqrt 5)/2
        std::vector<Vector<double>> cols = {{1.0, 1.0}, {0.0, 1.0}};
        const double expect = std::sqrt((3 + std::sqrt(5.0)) / (3 - std::sqrt(5.0)));
        CHECK(basis_condition_number(cols) == Catch::Approx(expect).epsilon(1e-10));
    }
    SECTION("rank-deficient slab rejected") {
        std::vector<Vector<double>> cols = {{1.0, 2.0}, {2.0, 4.0}};
        CHECK_THROWS_AS(basis_condition_number(cols), singular_error);
    }
    SECTION("complex columns via real embedding") {
        std::vector<Vector<C>> cols = {{C(1, 0), C(0, 0)}, {C(0, 0), C(0, 1)}};
        // columns are orthogonal with equal norms -> condition number 1
        CHECK(basis_condition_number(cols) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("breakdown implies exact least-squares solve in the subspace") {
    auto A = SparseMatrix<double>::from_triplets(
        3, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 3.0}});  // eigenvalue 3 repeated: breakdown at m=2
    auto b = build_pivoted_hessenberg<double>(op_of(A), {1.0, 1.0, 1.0}, 3, A.frobenius_norm());
    REQUIRE(b.breakdown);
    auto ls = hessenberg_lsq(b.H, b.alpha);
    CHECK(norm2(ls.u) <= 1e-10 * std::abs(b.alpha));
}
