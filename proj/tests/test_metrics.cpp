#include "csl/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace csl;

namespace {

// Independent delta_s oracle: enumerate supports via sorted selection masks
// and take extremal eigenvalues of the Gram blocks with Eigen's Hermitian
// eigensolver (a different code path than the SVD used by the implementation).
double rip_oracle(const CMatrix& A, int s) {
    const int N = static_cast<int>(A.cols());
    std::vector<bool> mask(static_cast<std::size_t>(N - s), false);
    mask.resize(static_cast<std::size_t>(N), true); // last s entries true
    std::sort(mask.begin(), mask.end());
    double delta = 0.0;
    do {
        std::vector<int> sup;
        for (int i = 0; i < N; ++i)
            if (mask[static_cast<std::size_t>(i)]) sup.push_back(i);
        CMatrix sub(A.rows(), s);
        for (int i = 0; i < s; ++i) sub.col(i) = A.col(sup[static_cast<std::size_t>(i)]);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(sub.adjoint() * sub);
        double lo = es.eigenvalues().minCoeff();
        double hi = es.eigenvalues().maxCoeff();
        delta = std::max({delta, hi - 1.0, 1.0 - lo});
    } while (std::next_permutation(mask.begin(), mask.end()));
    return delta;
}

CMatrix random_real_matrix(RngStream& rng, int m, int N) {
    CMatrix A(m, N);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < N; ++j)
            A(i, j) = Complex(rng.gaussian() / std::sqrt(static_cast<double>(m)), 0.0);
    return A;
}

// N x m column matrix whose columns are orthogonal with norm sqrt(N), the
// ideal case for every diagnostic.
CMatrix ideal_columns(int N, int m) {
    CMatrix M = CMatrix::Zero(N, m);
    for (int k = 0; k < m; ++k) M(k, k) = std::sqrt(static_cast<double>(N));
    return M;
}

} // namespace

TEST_CASE("cross-coherence vanishes for orthogonal columns") {
    auto r = cross_coherence(ColumnEnsemble::fixed(ideal_columns(8, 3)));
    REQUIRE(r.estimate == 0.0);
    REQUIRE(r.trials == 1);
}

TEST_CASE("cross-coherence of duplicated columns is one") {
    CMatrix M(4, 2);
    M.col(0) = CVector::Ones(4); // norm 2 = sqrt(N)
    M.col(1) = M.col(0);
    auto r = cross_coherence(ColumnEnsemble::fixed(M));
    // |<m_1, m_2>|^2 = N^2, so mu = 1 exactly
    REQUIRE(r.estimate == Catch::Approx(1.0).margin(1e-14));
    REQUIRE_THROWS_AS(cross_coherence(ColumnEnsemble::fixed(CMatrix::Ones(4, 1))),
                      std::invalid_argument);
}

TEST_CASE("cross-coherence picks the worst column") {
    // three columns, one of which correlates with both others
    CMatrix M = ideal_columns(4, 3);
    M.col(2) = (M.col(0) + M.col(1)) / std::sqrt(2.0);
    auto r = cross_coherence(ColumnEnsemble::fixed(M));
    // worst row sum: column 2 sees |<m_2,m_0>|^2 + |<m_2,m_1>|^2 = 2 (N^2/2) = N^2
    REQUIRE(r.estimate == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("distortion measures the worst column norm deviation") {
    REQUIRE(distortion(ColumnEnsemble::fixed(ideal_columns(9, 4))).estimate == 0.0);
    CMatrix M = ideal_columns(9, 4);
    M.col(2) *= 2.0; // squared norm 4N, deviation |4 - 1| = 3
    REQUIRE(distortion(ColumnEnsemble::fixed(M)).estimate ==
            Catch::Approx(3.0).margin(1e-13));
    M = ideal_columns(9, 4);
    M.col(1) *= 0.5; // deviation |1/4 - 1| = 3/4
    REQUIRE(distortion(ColumnEnsemble::fixed(M)).estimate ==
            Catch::Approx(0.75).margin(1e-13));
}

TEST_CASE("sv deviation is zero for scaled isometries and exact for diagonals") {
    REQUIRE(sv_deviation(ColumnEnsemble::fixed(ideal_columns(6, 6))).estimate <=
            1e-14);
    CMatrix M = ideal_columns(6, 2);
    M.col(0) *= 3.0;
    // singular values of M/sqrt(N) are 3 and 1: deviation 2
    REQUIRE(sv_deviation(ColumnEnsemble::fixed(M)).estimate ==
            Catch::Approx(2.0).margin(1e-13));
    CMatrix wide = CMatrix::Ones(2, 3);
    REQUIRE_THROWS_AS(sv_deviation(ColumnEnsemble::fixed(wide)),
                      std::invalid_argument);
}

TEST_CASE("monte carlo reduction reports mean and standard error") {
    // a deterministic two-point ensemble realized through the trial index
    ColumnEnsemble ens;
    ens.N = 2;
    ens.m = 1;
    ens.trials = 2;
    ens.seed = 123;
    bool first = true;
    // distortion values will be 0 and 3 alternately
    ens.draw = [&first](RngStream&) {
        CMatrix M = CMatrix::Zero(2, 1);
        M(0, 0) = first ? std::sqrt(2.0) : 2.0 * std::sqrt(2.0);
        first = false;
        return M;
    };
    auto r = distortion(ens);
    REQUIRE(r.estimate == Catch::Approx(1.5).margin(1e-13));
    // sample std of {0,3} is 3/sqrt(2); std error divides by sqrt(trials)
    REQUIRE(r.std_error == Catch::Approx(1.5).margin(1e-13));
    REQUIRE(r.trials == 2);
    REQUIRE(r.seed == 123);
    auto j = r.to_json();
    REQUIRE(j.at("quantity") == "distortion");
    REQUIRE(j.at("parameters").at("N") == 2);
}

TEST_CASE("ensemble from a system is deterministic in the seed") {
    BosSystem sys = chebyshev_system(12);
    auto e1 = ColumnEnsemble::from_system(sys, 4, 8, 99);
    auto e2 = ColumnEnsemble::from_system(sys, 4, 8, 99);
    REQUIRE(cross_coherence(e1).estimate == cross_coherence(e2).estimate);
    REQUIRE(distortion(e1).estimate == distortion(e2).estimate);
}

TEST_CASE("binomial counts") {
    REQUIRE(binomial_count(10, 3) == 120);
    REQUIRE(binomial_count(20, 2) == 190);
    REQUIRE(binomial_count(5, 0) == 1);
    REQUIRE(binomial_count(5, 5) == 1);
    REQUIRE(binomial_count(5, 6) == 0);
    REQUIRE(binomial_count(4, -1) == 0);
}

TEST_CASE("rip matches the independent enumeration oracle") {
    RngStream rng(2024);
    for (int t = 0; t < 6; ++t) {
        CMatrix A = random_real_matrix(rng, 6, 10);
        for (int s : {1, 2, 3}) {
            RipReport rep = rip_bruteforce(A, s);
            REQUIRE(rep.delta == Catch::Approx(rip_oracle(A, s)).margin(1e-10));
            REQUIRE(static_cast<int>(rep.extremal_support.size()) == s);
            // the recorded support reproduces the recorded extremal Rayleigh pair
            CMatrix sub(A.rows(), s);
            for (int i = 0; i < s; ++i)
                sub.col(i) = A.col(rep.extremal_support[static_cast<std::size_t>(i)]);
            RVector sv = singular_values(sub);
            REQUIRE(sv(0) * sv(0) ==
                    Catch::Approx(rep.extremal_rayleigh_max).margin(1e-12));
            REQUIRE(sv(sv.size() - 1) * sv(sv.size() - 1) ==
                    Catch::Approx(rep.extremal_rayleigh_min).margin(1e-12));
        }
    }
}

TEST_CASE("rip constants are monotone in sparsity") {
    RngStream rng(7);
    CMatrix A = random_real_matrix(rng, 8, 12);
    double prev = 0.0;
    for (int s = 1; s <= 4; ++s) {
        double d = rip_bruteforce(A, s).delta;
        REQUIRE(d >= prev - 1e-14);
        prev = d;
    }
}

TEST_CASE("rip of an orthonormal matrix is zero") {
    CMatrix A = CMatrix::Identity(6, 6);
    for (int s : {1, 2, 3}) REQUIRE(rip_bruteforce(A, s).delta <= 1e-14);
    // scaled identity: delta_s = |c^2 - 1| for every s
    REQUIRE(rip_bruteforce(CMatrix(1.1 * CMatrix::Identity(5, 5)), 2).delta ==
            Catch::Approx(0.21).margin(1e-12));
}

TEST_CASE("rip duplicated columns force delta_2 >= 1") {
    CMatrix A = CMatrix::Identity(4, 5);
    A.col(4) = A.col(0);
    REQUIRE(rip_bruteforce(A, 2).delta >= 1.0);
}

TEST_CASE("rip enumeration budget guard") {
    CMatrix big = CMatrix::Ones(4, 60);
    REQUIRE_THROWS_AS(rip_bruteforce(big, 8), EnumerationBudgetError);
    CMatrix A = CMatrix::Identity(4, 20);
    REQUIRE_THROWS_AS(rip_bruteforce(A, 3, 1000), EnumerationBudgetError);
    REQUIRE_NOTHROW(rip_bruteforce(A, 3, binomial_count(20, 3)));
    REQUIRE_THROWS_AS(rip_bruteforce(A, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(rip_bruteforce(A, 21), std::invalid_argument);
}

TEST_CASE("nsp sufficiency verdicts") {
    double threshold = 4.0 / std::sqrt(41.0);
    auto ortho = nsp_sufficiency(CMatrix(CMatrix::Identity(8, 8)), 2);
    REQUIRE(ortho.verdict == NspSufficiencyReport::Verdict::holds);
    REQUIRE(ortho.delta_2s <= 1e-14);
    REQUIRE(ortho.threshold == Catch::Approx(threshold).margin(1e-15));

    CMatrix dup = CMatrix::Identity(4, 5);
    dup.col(4) = dup.col(0);
    auto bad = nsp_sufficiency(dup, 1);
    REQUIRE(bad.verdict == NspSufficiencyReport::Verdict::fails);
    REQUIRE(bad.delta_2s >= threshold);

    auto big = nsp_sufficiency(CMatrix(CMatrix::Ones(4, 500)), 5, 1000);
    REQUIRE(big.verdict == NspSufficiencyReport::Verdict::too_large_to_enumerate);
}

TEST_CASE("robustness coefficient hand cases") {
    // A = I (m = N): sqrt(m/N) A* has all singular values one
    CMatrix I6 = CMatrix::Identity(6, 6);
    REQUIRE(robustness_coefficient(I6, 2) ==
            Catch::Approx(std::sqrt(3.0)).margin(1e-13));
    // shrinking A grows the coefficient through s_min
    CMatrix half = 0.5 * CMatrix::Identity(6, 6);
    REQUIRE(robustness_coefficient(half, 2) ==
            Catch::Approx(2.0 * std::sqrt(3.0)).margin(1e-13));
    // inflating A does not help below one: the min caps at 1
    CMatrix twice = 2.0 * CMatrix::Identity(6, 6);
    REQUIRE(robustness_coefficient(twice, 2) ==
            Catch::Approx(std::sqrt(3.0)).margin(1e-13));
    // rank-deficient rows are refused
    CMatrix flat(2, 3);
    flat.row(0) = Eigen::RowVector3cd(1, 0, 0);
    flat.row(1) = Eigen::RowVector3cd(1, 0, 0);
    REQUIRE_THROWS_AS(robustness_coefficient(flat, 1), RankDeficiencyError);
    REQUIRE_THROWS_AS(robustness_coefficient(I6, 0), std::invalid_argument);
}

TEST_CASE("polylog factor frozen value and domain") {
    // frozen against a by-hand evaluation of the closed form
    REQUIRE(log_factor_L(1000, 10, 0.5, 0.5, 1.0) ==
            Catch::Approx(823.5356343440121).epsilon(1e-12));
    // the epsilon branch dominates when the first term is tiny
    double lead = 1.0 / (0.9 * 0.9);
    REQUIRE(log_factor_L(3, 2, 0.9, 1e-300, 1.0) ==
            Catch::Approx(lead * std::log(1e300)).epsilon(1e-12));
    REQUIRE_THROWS_AS(log_factor_L(10, 1, 0.5, 0.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(log_factor_L(10, 20, 0.5, 0.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(log_factor_L(10, 5, 0.0, 0.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(log_factor_L(10, 5, 0.5, 1.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(log_factor_L(10, 5, 0.5, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("polylog factor grows as delta shrinks") {
    double prev = 0.0;
    for (double delta : {0.9, 0.5, 0.25, 0.1}) {
        double L = log_factor_L(500, 8, delta, 0.5, std::sqrt(2.0));
        REQUIRE(L > prev);
        prev = L;
    }
}

TEST_CASE("best s-term approximation error") {
    CVector x(5);
    x << Complex(3, 0), Complex(0, -1), Complex(0.5, 0), Complex(0, 0),
        Complex(-2, 0);
    REQUIRE(best_s_term_error(x, 0) == Catch::Approx(6.5).margin(1e-14));
    REQUIRE(best_s_term_error(x, 1) == Catch::Approx(3.5).margin(1e-14));
    REQUIRE(best_s_term_error(x, 2) == Catch::Approx(1.5).margin(1e-14));
    REQUIRE(best_s_term_error(x, 4) == 0.0);
    REQUIRE(best_s_term_error(x, 5) == 0.0);
    REQUIRE_THROWS_AS(best_s_term_error(x, 6), std::invalid_argument);
    REQUIRE_THROWS_AS(best_s_term_error(x, -1), std::invalid_argument);
    // exactly sparse vectors vanish at their sparsity
    CVector sp = CVector::Zero(10);
    sp(3) = Complex(0, 2);
    sp(7) = Complex(1, 0);
    REQUIRE(best_s_term_error(sp, 2) == 0.0);
    REQUIRE(best_s_term_error(sp, 1) == Catch::Approx(1.0).margin(1e-14));
}
