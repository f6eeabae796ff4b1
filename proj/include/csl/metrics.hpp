#pragma once

// Robustness diagnostics for random sampling matrices: cross-coherence,
// distortion, singular-value deviation, brute-force restricted isometry
// constants, the NSP sufficient condition, the polylog sample-complexity
// factor, best s-term errors, and the NSP-based robustness coefficient.

#include "csl/bos.hpp"
#include "csl/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace csl {

/// Monte-Carlo description of the column ensemble M = sqrt(m) A*
/// (N x m, independent isotropic columns). `draw` produces one realization
/// per derived substream; with trials == 1 and a fixed matrix the
/// diagnostics return the realized value without expectation.
struct ColumnEnsemble {
    int N = 0;
    int m = 0;
    int trials = 1;
    std::uint64_t seed = 0;
    std::function<CMatrix(RngStream&)> draw;

    static ColumnEnsemble fixed(CMatrix M) {
        ColumnEnsemble e;
        e.N = static_cast<int>(M.rows());
        e.m = static_cast<int>(M.cols());
        e.trials = 1;
        auto shared = std::make_shared<CMatrix>(std::move(M));
        e.draw = [shared](RngStream&) { return *shared; };
        return e;
    }

    static ColumnEnsemble from_system(const BosSystem& sys, int m, int trials,
                                      std::uint64_t seed,
                                      SamplingMode mode = SamplingMode::iid) {
        ColumnEnsemble e;
        e.N = sys.size;
        e.m = m;
        e.trials = trials;
        e.seed = seed;
        e.draw = [sys, m, mode](RngStream& rng) {
            SensingMatrix S = sample_matrix(sys, m, rng, mode);
            return CMatrix(std::sqrt(static_cast<double>(m)) * S.A.adjoint());
        };
        return e;
    }
};

/// One diagnostic estimate with its Monte-Carlo provenance; serializes to
/// the JSON record {quantity, parameters, trials, estimate, std_error, seed}.
struct DiagnosticResult {
    std::string quantity;
    double estimate = 0.0;
    double std_error = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    nlohmann::json parameters;

    nlohmann::json to_json() const {
        return {{"quantity", quantity},   {"parameters", parameters},
                {"trials", trials},       {"estimate", estimate},
                {"std_error", std_error}, {"seed", seed}};
    }
};

namespace detail {

template <typename PerTrial>
DiagnosticResult monte_carlo(const ColumnEnsemble& ens, const std::string& name,
                             PerTrial&& per_trial) {
    RngStream master(ens.seed, 0);
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < ens.trials; ++t) {
        RngStream rng = master.substream(static_cast<std::uint64_t>(t));
        CMatrix M = ens.draw(rng);
        double v = per_trial(M);
        sum += v;
        sumsq += v * v;
    }
    DiagnosticResult r;
    r.quantity = name;
    r.trials = ens.trials;
    r.seed = ens.seed;
    r.estimate = sum / ens.trials;
    if (ens.trials > 1) {
        double var = (sumsq - sum * sum / ens.trials) / (ens.trials - 1);
        r.std_error = std::sqrt(std::max(var, 0.0) / ens.trials);
    }
    r.parameters = {{"N", ens.N}, {"m", ens.m}};
    return r;
}

} // namespace detail

/// Cross-coherence mu = (1/N^2) E max_k sum_{l != k} |<m_k, m_l>|^2.
inline DiagnosticResult cross_coherence(const ColumnEnsemble& ens) {
    if (ens.m < 2) throw std::invalid_argument("cross_coherence: m < 2");
    return detail::monte_carlo(ens, "cross_coherence", [&](const CMatrix& M) {
        CMatrix G = M.adjoint() * M; // m x m Gram
        double worst = 0.0;
        for (int k = 0; k < ens.m; ++k) {
            double row = 0.0;
            for (int l = 0; l < ens.m; ++l)
                if (l != k) row += std::norm(G(k, l));
            worst = std::max(worst, row);
        }
        double n2 = static_cast<double>(ens.N) * static_cast<double>(ens.N);
        return worst / n2;
    });
}

/// Distortion xi = E max_k | ||m_k||^2 / N - 1 |.
inline DiagnosticResult distortion(const ColumnEnsemble& ens) {
    return detail::monte_carlo(ens, "distortion", [&](const CMatrix& M) {
        double worst = 0.0;
        for (int k = 0; k < ens.m; ++k)
            worst = std::max(worst,
                             std::abs(M.col(k).squaredNorm() / ens.N - 1.0));
        return worst;
    });
}

/// Singular value deviation E max_j | s_j(M / sqrt(N)) - 1 |.
inline DiagnosticResult sv_deviation(const ColumnEnsemble& ens) {
    if (ens.N < ens.m)
        throw std::invalid_argument("sv_deviation: requires N >= m");
    return detail::monte_carlo(ens, "sv_deviation", [&](const CMatrix& M) {
        RVector sv = singular_values(M / std::sqrt(static_cast<double>(ens.N)));
        double worst = 0.0;
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            worst = std::max(worst, std::abs(sv(j) - 1.0));
        return worst;
    });
}

/// Restricted isometry report: delta_s plus the extremal support.
struct RipReport {
    int s = 0;
    double delta = 0.0;
    std::vector<int> extremal_support;
    double extremal_rayleigh_min = 1.0;
    double extremal_rayleigh_max = 1.0;
};

inline long long binomial_count(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > (1LL << 62) / n) return 1LL << 62; // saturate, guard only
    }
    return r;
}

class EnumerationBudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Exact delta_s by enumerating all C(N,s) supports (guarded at 10^6).
inline RipReport rip_bruteforce(const CMatrix& A, int s,
                                long long support_budget = 1000000) {
    int N = static_cast<int>(A.cols());
    if (s < 1 || s > N) throw std::invalid_argument("rip_bruteforce: bad s");
    if (binomial_count(N, s) > support_budget)
        throw EnumerationBudgetError("rip_bruteforce: C(N,s) exceeds budget");

    RipReport rep;
    rep.s = s;
    std::vector<int> support(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) support[static_cast<std::size_t>(i)] = i;
    CMatrix sub(A.rows(), s);
    while (true) {
        for (int i = 0; i < s; ++i)
            sub.col(i) = A.col(support[static_cast<std::size_t>(i)]);
        RVector sv = singular_values(sub);
        double lam_max = sv(0) * sv(0);
        double lam_min = sv(sv.size() - 1) * sv(sv.size() - 1);
        double dev = std::max(lam_max - 1.0, 1.0 - lam_min);
        if (dev > rep.delta || rep.extremal_support.empty()) {
            rep.delta = std::max(dev, 0.0);
            rep.extremal_support = support;
            rep.extremal_rayleigh_min = lam_min;
            rep.extremal_rayleigh_max = lam_max;
        }
        // next combination in lexicographic order
        int i = s - 1;
        while (i >= 0 && support[static_cast<std::size_t>(i)] == N - s + i) --i;
        if (i < 0) break;
        ++support[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < s; ++j)
            support[static_cast<std::size_t>(j)] =
                support[static_cast<std::size_t>(j - 1)] + 1;
    }
    return rep;
}

inline RipReport rip_bruteforce(const SensingMatrix& A, int s,
                                long long support_budget = 1000000) {
    return rip_bruteforce(A.A, s, support_budget);
}

/// RIP-based sufficient condition for the l2-robust NSP:
/// delta_{2s} < 4/sqrt(41).
struct NspSufficiencyReport {
    enum class Verdict { holds, fails, too_large_to_enumerate };
    int s = 0;
    double delta_2s = 0.0;
    double threshold = 4.0 / std::sqrt(41.0);
    Verdict verdict = Verdict::too_large_to_enumerate;
};

inline NspSufficiencyReport nsp_sufficiency(const CMatrix& A, int s,
                                            long long support_budget = 1000000) {
    NspSufficiencyReport rep;
    rep.s = s;
    try {
        RipReport rip = rip_bruteforce(A, 2 * s, support_budget);
        rep.delta_2s = rip.delta;
        rep.verdict = rip.delta < rep.threshold
                          ? NspSufficiencyReport::Verdict::holds
                          : NspSufficiencyReport::Verdict::fails;
    } catch (const EnumerationBudgetError&) {
        rep.verdict = NspSufficiencyReport::Verdict::too_large_to_enumerate;
    }
    return rep;
}

inline NspSufficiencyReport nsp_sufficiency(const SensingMatrix& A, int s,
                                            long long support_budget = 1000000) {
    return nsp_sufficiency(A.A, s, support_budget);
}

/// The multiplier sqrt(m/s) / min{ s_min(sqrt(m/N) A*), 1 } from the
/// NSP-based robust error estimate.
inline double robustness_coefficient(const CMatrix& A, int s,
                                     const Tolerances& tols = default_tolerances()) {
    if (s < 1) throw std::invalid_argument("robustness_coefficient: s < 1");
    double m = static_cast<double>(A.rows());
    double N = static_cast<double>(A.cols());
    RVector sv = singular_values(std::sqrt(m / N) * A.adjoint());
    double ratio = sv(sv.size() - 1) / sv(0);
    if (!(ratio > tols.rank_ratio))
        throw RankDeficiencyError("robustness_coefficient: rank(A) < m", ratio);
    double smin = sv(sv.size() - 1);
    return std::sqrt(m / s) / std::min(smin, 1.0);
}

inline double robustness_coefficient(const SensingMatrix& A, int s,
                                     const Tolerances& tols = default_tolerances()) {
    return robustness_coefficient(A.A, s, tols);
}

/// Polylogarithmic sample-complexity factor
/// L = (K^2/delta^2) max{ ln^2(s) ln((K^2/delta^2) s ln N) ln N, ln(1/eps) }.
inline double log_factor_L(int N, int s, double delta, double eps, double K) {
    if (N < s || s < 2) throw std::invalid_argument("log_factor_L: need N >= s >= 2");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("log_factor_L: delta in (0,1)");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("log_factor_L: eps in (0,1)");
    if (!(K >= 1)) throw std::invalid_argument("log_factor_L: K >= 1");
    double lead = K * K / (delta * delta);
    double lnN = std::log(static_cast<double>(N));
    double lns = std::log(static_cast<double>(s));
    double first = lns * lns * std::log(lead * s * lnN) * lnN;
    return lead * std::max(first, std::log(1.0 / eps));
}

/// Best s-term approximation error in l1: the sum of the N-s smallest
/// magnitudes of x.
inline double best_s_term_error(const CVector& x, int s) {
    int N = static_cast<int>(x.size());
    if (s < 0 || s > N) throw std::invalid_argument("best_s_term_error: bad s");
    std::vector<double> mags(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) mags[static_cast<std::size_t>(i)] = std::abs(x(i));
    std::sort(mags.begin(), mags.end());
    double sum = 0.0;
    for (int i = 0; i < N - s; ++i) sum += mags[static_cast<std::size_t>(i)];
    return sum;
}

} // namespace csl
