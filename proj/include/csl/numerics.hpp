#pragma once

// Dense complex linear algebra kernels and reproducible random streams.
// Everything downstream (sampling matrices, diagnostics, the QCBP solver,
// the experiment runners) sits on top of this layer.

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace csl {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Central tolerance configuration. All magic thresholds live here so the
/// experiments and tests reference one set of constants.
struct Tolerances {
    double rank_ratio = 1e-12;      // s_min/s_max below this => rank deficient
    double feasibility_scale = 1e-9; // tol_f = feasibility_scale * max(1, ||y||)
    double objective_rel = 1e-7;     // relative duality gap target
    double unitary_roundoff = 1e-12; // slack for algebraically exact identities
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class RankDeficiencyError : public std::runtime_error {
  public:
    RankDeficiencyError(const std::string& what, double sv_ratio)
        : std::runtime_error(what), sv_ratio_(sv_ratio) {}
    double sv_ratio() const { return sv_ratio_; }

  private:
    double sv_ratio_;
};

inline void check_finite(const CMatrix& M, const char* name) {
    if (!M.allFinite())
        throw std::invalid_argument(std::string(name) + ": non-finite entry");
}

inline void check_finite(const CVector& v, const char* name) {
    if (!v.allFinite())
        throw std::invalid_argument(std::string(name) + ": non-finite entry");
}

namespace detail {

// 64-bit finalizer from splitmix64; full-avalanche, cheap, portable.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based random stream. A stream is fully determined by
/// (seed, stream index); distinct indices give independent-in-practice
/// sequences, so per-trial substreams can be derived without sequencing.
/// All output is generated from integer arithmetic only and is therefore
/// identical across platforms and thread counts.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream),
          state_(detail::mix64(detail::mix64(seed) ^
                               detail::mix64(stream ^ 0x5851f42d4c957f2dULL))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derive an independent stream keyed by (this stream, index).
    RngStream substream(std::uint64_t index) const {
        return RngStream(seed_, detail::mix64(stream_ ^ detail::mix64(index)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Lemire's multiply-shift rejection.
    std::uint64_t uniform_int(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_int: bound 0");
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t prod = static_cast<__uint128_t>(x) * bound;
            std::uint64_t lo = static_cast<std::uint64_t>(prod);
            if (lo < bound) {
                std::uint64_t threshold = (-bound) % bound;
                if (lo < threshold) continue;
            }
            return static_cast<std::uint64_t>(prod >> 64);
        }
    }

    /// Standard real normal via Box-Muller (one value per draw; the sine
    /// branch is discarded to keep the call sequence simple).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Standard complex normal, E|g|^2 = 1: (g1 + i g2)/sqrt(2).
    Complex complex_gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)) /
               std::sqrt(2.0);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

/// Exact complex matrix-vector product y = A z.
inline CVector matvec(const CMatrix& A, const CVector& z) {
    if (A.cols() != z.size())
        throw DimensionError("matvec: cols(A) != len(z)");
    return A * z;
}

/// All singular values of M, sorted descending.
inline RVector singular_values(const CMatrix& M) {
    check_finite(M, "singular_values");
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues(); // Eigen returns them descending
}

/// Least-squares minimizer of ||A z - y||_2 for a tall full-column-rank A.
/// Rank deficiency (s_min/s_max <= rank_ratio) is reported with the ratio.
inline CVector least_squares(const CMatrix& A, const CVector& y,
                             const Tolerances& tols = default_tolerances()) {
    if (A.rows() < A.cols())
        throw DimensionError("least_squares: rows(A) < cols(A)");
    if (A.rows() != y.size())
        throw DimensionError("least_squares: rows(A) != len(y)");
    check_finite(A, "least_squares A");
    check_finite(y, "least_squares y");

    Eigen::HouseholderQR<CMatrix> qr(A);
    CMatrix R = qr.matrixQR()
                    .topRows(A.cols())
                    .triangularView<Eigen::Upper>();
    RVector sv = singular_values(R); // sv(A) == sv(R)
    double ratio = sv(sv.size() - 1) / sv(0);
    if (!(ratio > tols.rank_ratio))
        throw RankDeficiencyError(
            "least_squares: rank-deficient system, s_min/s_max = " +
                std::to_string(ratio),
            ratio);
    return qr.solve(y);
}

/// I.i.d. standard complex Gaussian direction rescaled to an exact 2-norm.
inline CVector complex_gaussian_vector(RngStream& rng, Eigen::Index m,
                                       double target_norm) {
    if (m < 1) throw std::invalid_argument("complex_gaussian_vector: m < 1");
    if (target_norm < 0)
        throw std::invalid_argument("complex_gaussian_vector: negative norm");
    CVector v(m);
    for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.complex_gaussian();
    if (target_norm == 0.0) return CVector::Zero(m);
    return v * (target_norm / v.norm());
}

/// One draw from the Chebyshev measure dnu = pi^-1 (1-t^2)^{-1/2} dt on [-1,1],
/// via t = cos(pi u) with u uniform.
inline double sample_chebyshev_point(RngStream& rng) {
    return std::cos(M_PI * rng.uniform());
}

} // namespace csl
