#pragma once

// Bounded orthonormal systems and the random sampling matrices built from
// them: Fourier, Chebyshev, tensorized Chebyshev on a hyperbolic cross,
// plus a Gaussian baseline ensemble.

#include "csl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace csl {

/// A point in the sampling domain (d coordinates).
using Point = std::vector<double>;

/// A bounded orthonormal system: an orthonormal family {phi_j} on a domain
/// with sampling measure nu and uniform bound sup_tau |phi_j(tau)| <= K.
struct BosSystem {
    std::string name;
    int dim = 1;          // dimension d of the domain
    int size = 0;         // N, number of basis functions
    double bound = 1.0;   // K
    // 0 for continuous domains; for discrete domains the number of atoms,
    // enabling row sampling without replacement.
    std::size_t domain_size = 0;

    std::function<Complex(int j, const Point&)> eval;
    std::function<void(RngStream&, Point&)> sample;

    Point draw(RngStream& rng) const {
        Point p(static_cast<std::size_t>(dim));
        sample(rng, p);
        return p;
    }
};

/// Deduplicated multi-index set in graded-lexicographic order
/// (total degree ascending, then lexicographically descending).
struct IndexSet {
    int dim = 1;
    std::vector<std::vector<int>> indices;

    int size() const { return static_cast<int>(indices.size()); }

    bool is_downward_closed() const {
        auto contains = [this](const std::vector<int>& nu) {
            return std::find(indices.begin(), indices.end(), nu) != indices.end();
        };
        for (const auto& nu : indices) {
            for (std::size_t i = 0; i < nu.size(); ++i) {
                if (nu[i] == 0) continue;
                auto smaller = nu;
                smaller[i] -= 1;
                if (!contains(smaller)) return false;
            }
        }
        return true;
    }

    void sort_graded_lex() {
        std::sort(indices.begin(), indices.end(),
                  [](const std::vector<int>& a, const std::vector<int>& b) {
                      int ga = std::accumulate(a.begin(), a.end(), 0);
                      int gb = std::accumulate(b.begin(), b.end(), 0);
                      if (ga != gb) return ga < gb;
                      return a > b; // lexicographically descending within a grade
                  });
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    }
};

enum class SamplingMode { iid, rows_without_replacement };

inline const char* to_string(SamplingMode m) {
    return m == SamplingMode::iid ? "iid" : "rows_without_replacement";
}

/// Random sampling matrix A_{kj} = m^{-1/2} phi_j(tau_k) together with the
/// provenance needed to rebuild it bit-for-bit.
struct SensingMatrix {
    CMatrix A;
    struct Provenance {
        std::string system;
        std::vector<Point> points;
        std::uint64_t seed = 0;
        std::uint64_t stream = 0;
        std::string mode;
    } provenance;

    Eigen::Index rows() const { return A.rows(); }
    Eigen::Index cols() const { return A.cols(); }
};

/// Subsampled Fourier system on the discrete domain [N]_0 with uniform
/// sampling measure; phi_j(tau) = exp(2 pi i j tau / N), K = 1.
inline BosSystem fourier_system(int N) {
    if (N < 1) throw std::invalid_argument("fourier_system: N < 1");
    BosSystem sys;
    sys.name = "fourier(" + std::to_string(N) + ")";
    sys.dim = 1;
    sys.size = N;
    sys.bound = 1.0;
    sys.domain_size = static_cast<std::size_t>(N);
    sys.eval = [N](int j, const Point& tau) {
        double arg = 2.0 * M_PI * j * tau[0] / N;
        return Complex(std::cos(arg), std::sin(arg));
    };
    sys.sample = [N](RngStream& rng, Point& p) {
        p[0] = static_cast<double>(rng.uniform_int(static_cast<std::uint64_t>(N)));
    };
    return sys;
}

/// One-dimensional Chebyshev polynomial value: phi_0 = 1,
/// phi_j(t) = sqrt(2) cos(j arccos t) for j >= 1.
inline double chebyshev_value(int j, double t) {
    if (j == 0) return 1.0;
    return std::sqrt(2.0) * std::cos(j * std::acos(t));
}

/// Chebyshev polynomials on [-1,1] under the Chebyshev measure; K = sqrt(2).
inline BosSystem chebyshev_system(int N) {
    if (N < 1) throw std::invalid_argument("chebyshev_system: N < 1");
    BosSystem sys;
    sys.name = "chebyshev(" + std::to_string(N) + ")";
    sys.dim = 1;
    sys.size = N;
    sys.bound = N > 1 ? std::sqrt(2.0) : 1.0;
    sys.eval = [](int j, const Point& tau) {
        return Complex(chebyshev_value(j, tau[0]), 0.0);
    };
    sys.sample = [](RngStream& rng, Point& p) {
        p[0] = sample_chebyshev_point(rng);
    };
    return sys;
}

/// All nu in N_0^d with prod_i (nu_i + 1) <= budget, graded-lex ordered.
inline IndexSet hyperbolic_cross(int d, int budget) {
    if (d < 1 || budget < 1)
        throw std::invalid_argument("hyperbolic_cross: d and budget must be >= 1");
    IndexSet set;
    set.dim = d;
    std::vector<int> nu(static_cast<std::size_t>(d), 0);
    std::function<void(int, long long)> rec = [&](int coord, long long prod) {
        if (coord == d) {
            set.indices.push_back(nu);
            return;
        }
        for (int v = 0; prod * (v + 1) <= budget; ++v) {
            nu[static_cast<std::size_t>(coord)] = v;
            rec(coord + 1, prod * (v + 1));
        }
        nu[static_cast<std::size_t>(coord)] = 0;
    };
    rec(0, 1);
    set.sort_graded_lex();
    return set;
}

/// Tensorized Chebyshev system on [-1,1]^d restricted to a downward-closed
/// multi-index set; K = sqrt(2)^(max number of active coordinates).
inline BosSystem tensor_chebyshev_system(int d, const IndexSet& indices) {
    if (indices.dim != d)
        throw std::invalid_argument("tensor_chebyshev_system: dimension mismatch");
    if (!indices.is_downward_closed())
        throw std::invalid_argument(
            "tensor_chebyshev_system: index set not downward closed");
    int max_active = 0;
    for (const auto& nu : indices.indices) {
        int active = 0;
        for (int v : nu) active += (v != 0);
        max_active = std::max(max_active, active);
    }
    BosSystem sys;
    sys.name = "tensor_chebyshev(d=" + std::to_string(d) +
               ",N=" + std::to_string(indices.size()) + ")";
    sys.dim = d;
    sys.size = indices.size();
    sys.bound = std::pow(std::sqrt(2.0), max_active);
    auto table = indices.indices; // value capture keeps the system self-contained
    sys.eval = [table](int j, const Point& tau) {
        const auto& nu = table[static_cast<std::size_t>(j)];
        double v = 1.0;
        for (std::size_t i = 0; i < nu.size(); ++i)
            if (nu[i] != 0) v *= chebyshev_value(nu[i], tau[i]);
        return Complex(v, 0.0);
    };
    sys.sample = [d](RngStream& rng, Point& p) {
        for (int i = 0; i < d; ++i)
            p[static_cast<std::size_t>(i)] = sample_chebyshev_point(rng);
    };
    return sys;
}

/// Assemble the m x N sampling matrix for a system, recording provenance.
inline SensingMatrix sample_matrix(const BosSystem& sys, int m, RngStream& rng,
                                   SamplingMode mode = SamplingMode::iid) {
    if (m < 1) throw std::invalid_argument("sample_matrix: m < 1");
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(m));
    if (mode == SamplingMode::rows_without_replacement) {
        if (sys.domain_size == 0)
            throw std::invalid_argument(
                "sample_matrix: rows_without_replacement needs a discrete domain");
        if (static_cast<std::size_t>(m) > sys.domain_size)
            throw std::invalid_argument(
                "sample_matrix: m exceeds discrete domain size");
        // partial Fisher-Yates over the domain atoms
        std::vector<std::uint64_t> atoms(sys.domain_size);
        std::iota(atoms.begin(), atoms.end(), 0);
        for (int k = 0; k < m; ++k) {
            std::uint64_t j = static_cast<std::uint64_t>(k) +
                              rng.uniform_int(sys.domain_size - static_cast<std::uint64_t>(k));
            std::swap(atoms[static_cast<std::size_t>(k)], atoms[static_cast<std::size_t>(j)]);
            points.push_back(Point{static_cast<double>(atoms[static_cast<std::size_t>(k)])});
        }
    } else {
        for (int k = 0; k < m; ++k) points.push_back(sys.draw(rng));
    }

    SensingMatrix S;
    S.A.resize(m, sys.size);
    double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < sys.size; ++j)
            S.A(k, j) = scale * sys.eval(j, points[static_cast<std::size_t>(k)]);
    S.provenance = {sys.name, std::move(points), rng.seed(), rng.stream(),
                    to_string(mode)};
    return S;
}

/// Gaussian baseline: i.i.d. real N(0, 1/m) entries.
inline SensingMatrix gaussian_matrix(int m, int N, RngStream& rng) {
    if (m < 1 || N < 1) throw std::invalid_argument("gaussian_matrix: m,N >= 1");
    SensingMatrix S;
    S.A.resize(m, N);
    double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < N; ++j)
            S.A(k, j) = Complex(scale * rng.gaussian(), 0.0);
    S.provenance = {"gaussian(" + std::to_string(m) + "x" + std::to_string(N) + ")",
                    {}, rng.seed(), rng.stream(), "gaussian"};
    return S;
}

/// Pointwise evaluations of a real d-variate function.
inline CVector evaluate_function_samples(
    const std::function<double(const Point&)>& f,
    const std::vector<Point>& points) {
    CVector y(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = Complex(f(points[i]), 0.0);
    return y;
}

} // namespace csl
