#pragma once

// Quadratically constrained basis pursuit for complex data:
//   min ||z||_1  s.t.  ||A z - y||_2 <= eta,
// solved by first-order primal-dual splitting with an l1 proximal step and
// a Euclidean-ball projection. BP is the eta = 0 case; for it the solve is
// carried out on the null-space parametrization z = z0 + B w (operator norm
// one), which converges far faster on near-square systems. Convergence is
// certified through a dual feasible point and the resulting gap bound.
//
// Also provides the eta_opt least-squares reference estimator and
// cross-validation over a geometric eta grid.

#include "csl/bos.hpp"
#include "csl/numerics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace csl {

struct SolverOptions {
    double tol_f_scale = 1e-9; // tol_f = tol_f_scale * max(1, ||y||_2)
    double tol_o = 1e-7;       // relative duality-gap target
    int max_iter = 50000;
    int check_every = 25;
    // residual-balancing step adaptation (Goldstein et al. style)
    bool adaptive_steps = true;
    double adapt_alpha0 = 0.5;
    double adapt_decay = 0.995;
    double adapt_ratio = 1.5;
    int adapt_every = 10;
    int infeasibility_patience = 1000; // iterations of dual > primal bound
};

struct SolveReport {
    CVector x;
    double objective = 0.0;
    double residual = 0.0; // ||A x - y||_2
    int iterations = 0;
    bool converged = false;
    bool infeasible = false;
    double duality_gap = 0.0; // objective minus certified dual lower bound
};

struct QcbpSpec {
    CMatrix A;
    CVector y;
    double eta = 0.0;
    SolverOptions options;
};

/// Spectral norm estimate by power iteration on A* A (deterministic start).
inline double operator_norm(const CMatrix& A, int iters = 80) {
    CVector v = CVector::Ones(A.cols());
    v /= v.norm();
    for (int i = 0; i < iters; ++i) {
        CVector w = A.adjoint() * (A * v);
        double wn = w.norm();
        if (wn == 0.0) return 0.0;
        v = w / wn;
    }
    return (A * v).norm();
}

/// Complex soft-thresholding, phase preserving.
inline void soft_threshold(CVector& z, double t) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        double mag = std::abs(z(i));
        z(i) = mag > t ? z(i) * ((mag - t) / mag) : Complex(0.0, 0.0);
    }
}

namespace detail {

inline double linf_norm(const CVector& v) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        worst = std::max(worst, std::abs(v(i)));
    return worst;
}

/// General-purpose primal-dual loop on the original formulation.
inline SolveReport qcbp_primal_dual(const CMatrix& A, const CVector& y,
                                    double eta, const SolverOptions& opt) {
    const Eigen::Index m = A.rows(), N = A.cols();
    const double tol_f = opt.tol_f_scale * std::max(1.0, y.norm());
    double L = operator_norm(A);
    if (L == 0.0) L = 1.0;
    double tau = 0.95 / L, sigma = 0.95 / L;
    double alpha = opt.adaptive_steps ? opt.adapt_alpha0 : 0.0;

    CVector z = CVector::Zero(N), zb = CVector::Zero(N);
    CVector p = CVector::Zero(m);
    CVector Aq_prev = CVector::Zero(N);
    SolveReport rep;
    rep.x = z;

    std::optional<double> primal_bound; // ||z_feas||_1 for a known feasible point
    bool infeasible_checked = false;
    int dual_exceed_iters = 0;

    for (int it = 1; it <= opt.max_iter; ++it) {
        CVector u = p + sigma * (A * zb);
        CVector w = u / sigma - y;
        double wn = w.norm();
        double shrink = (eta > 0.0 && wn > 0.0) ? std::min(1.0, eta / wn)
                                                : (wn > 0.0 ? 0.0 : 0.0);
        CVector pn = u - sigma * (y + shrink * w);
        CVector Aq = A.adjoint() * pn;
        CVector zn = z - tau * Aq;
        soft_threshold(zn, tau);

        if (alpha > 1e-5 && it % opt.adapt_every == 0) {
            double pr = ((z - zn) / tau - (Aq_prev - Aq)).norm();
            double dr = ((p - pn) / sigma - A * (z - zn)).norm();
            if (pr > opt.adapt_ratio * dr) {
                tau /= (1.0 - alpha);
                sigma *= (1.0 - alpha);
                alpha *= opt.adapt_decay;
            } else if (dr > opt.adapt_ratio * pr) {
                tau *= (1.0 - alpha);
                sigma /= (1.0 - alpha);
                alpha *= opt.adapt_decay;
            }
        }

        if (it % opt.check_every == 0 || it == opt.max_iter) {
            double residual = (A * zn - y).norm();
            double obj = zn.lpNorm<1>();
            double scale = std::max(1.0, linf_norm(Aq));
            double dual =
                (-(y.dot(pn)).real() - eta * pn.norm()) / scale;
            rep.x = zn;
            rep.objective = obj;
            rep.residual = residual;
            rep.iterations = it;
            rep.duality_gap = obj - dual;
            if (residual <= eta + tol_f &&
                rep.duality_gap <= opt.tol_o * std::max(1.0, obj)) {
                rep.converged = true;
                return rep;
            }
            if (residual <= eta + tol_f)
                primal_bound = primal_bound ? std::min(*primal_bound, obj) : obj;
            if (primal_bound && dual > *primal_bound)
                dual_exceed_iters += opt.check_every;
            else
                dual_exceed_iters = 0;
            if (dual_exceed_iters >= opt.infeasibility_patience) {
                rep.infeasible = true;
                return rep;
            }
            // When progress stalls far from feasibility, settle the question
            // directly: compare eta against the least-squares residual floor.
            if (!infeasible_checked && residual > eta + tol_f &&
                it >= std::min(2000, opt.max_iter / 2)) {
                infeasible_checked = true;
                Eigen::ColPivHouseholderQR<CMatrix> qr(A);
                CVector z_ls = qr.solve(y);
                double floor = (A * z_ls - y).norm();
                if (floor > eta + tol_f) {
                    rep.infeasible = true;
                    return rep;
                }
                primal_bound = primal_bound ? std::min(*primal_bound, z_ls.lpNorm<1>())
                                            : z_ls.lpNorm<1>();
            }
        }

        zb = 2.0 * zn - z;
        z = std::move(zn);
        p = std::move(pn);
        Aq_prev = std::move(Aq);
    }
    return rep;
}

/// BP (eta = 0) on the null-space parametrization. Requires A of full row
/// rank; the caller falls back to the general loop otherwise.
inline std::optional<SolveReport> bp_nullspace(const CMatrix& A, const CVector& y,
                                               const SolverOptions& opt,
                                               const Tolerances& tols) {
    const Eigen::Index m = A.rows(), N = A.cols();
    Eigen::HouseholderQR<CMatrix> qr(A.adjoint()); // A* = Q R
    CMatrix R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    double dmin = R.diagonal().cwiseAbs().minCoeff();
    double dmax = R.diagonal().cwiseAbs().maxCoeff();
    if (!(dmax > 0.0) || dmin / dmax <= tols.rank_ratio)
        return std::nullopt; // rank deficient, let the general route decide

    CMatrix Q = qr.householderQ();
    CMatrix Q1 = Q.leftCols(m);
    // min-norm interpolant: z0 = Q1 R^{-*} y
    CVector z0 = Q1 * R.adjoint().triangularView<Eigen::Lower>().solve(y);

    SolveReport rep;
    if (m == N) { // square full rank: unique feasible point
        rep.x = z0;
        rep.objective = z0.lpNorm<1>();
        rep.residual = (A * z0 - y).norm();
        rep.iterations = 0;
        rep.converged = true;
        rep.duality_gap = 0.0;
        return rep;
    }

    CMatrix B = Q.rightCols(N - m); // orthonormal null(A) basis
    const double tau = 0.95, sigma = 0.95;
    CVector wv = CVector::Zero(N - m), wb = CVector::Zero(N - m);
    CVector p = CVector::Zero(N);
    const double tol_f = opt.tol_f_scale * std::max(1.0, y.norm());

    for (int it = 1; it <= opt.max_iter; ++it) {
        CVector u = p + sigma * (B * wb);
        CVector v = u / sigma + z0;
        soft_threshold(v, 1.0 / sigma);
        CVector pn = u - sigma * (v - z0);
        CVector wn = wv - tau * (B.adjoint() * pn);
        if (it % opt.check_every == 0 || it == opt.max_iter) {
            CVector zc = z0 + B * wn;
            double obj = zc.lpNorm<1>();
            // dual candidate for the original problem: q with A* q = proj of p
            // onto range(A*); its value is certified after sup-norm scaling.
            CVector proj = Q1 * (Q1.adjoint() * pn);
            CVector q = R.triangularView<Eigen::Upper>().solve(
                Q1.adjoint() * pn);
            // the reduced dual variable converges to an l1 subgradient of the
            // solution, which is minus the dual variable of the original
            // problem; hence the positive sign here.
            double scale = std::max(1.0, linf_norm(proj));
            double dual = (y.dot(q)).real() / scale;
            rep.x = zc;
            rep.objective = obj;
            rep.residual = (A * zc - y).norm();
            rep.iterations = it;
            rep.duality_gap = obj - dual;
            if (rep.residual <= tol_f &&
                rep.duality_gap <= opt.tol_o * std::max(1.0, obj)) {
                rep.converged = true;
                return rep;
            }
        }
        wb = 2.0 * wn - wv;
        wv = std::move(wn);
        p = std::move(pn);
    }
    return rep;
}

} // namespace detail

inline SolveReport qcbp_solve(const CMatrix& A, const CVector& y, double eta,
                              const SolverOptions& opt = {},
                              const Tolerances& tols = default_tolerances()) {
    if (A.rows() != y.size())
        throw DimensionError("qcbp_solve: rows(A) != len(y)");
    if (eta < 0.0) throw std::invalid_argument("qcbp_solve: eta < 0");
    check_finite(A, "qcbp_solve A");
    check_finite(y, "qcbp_solve y");

    if (y.norm() <= eta) { // zero is feasible, hence optimal
        SolveReport rep;
        rep.x = CVector::Zero(A.cols());
        rep.objective = 0.0;
        rep.residual = y.norm();
        rep.converged = true;
        rep.duality_gap = 0.0;
        return rep;
    }
    if (eta == 0.0 && A.rows() <= A.cols()) {
        if (auto rep = detail::bp_nullspace(A, y, opt, tols)) return *rep;
    }
    return detail::qcbp_primal_dual(A, y, eta, opt);
}

inline SolveReport qcbp_solve(const QcbpSpec& spec) {
    return qcbp_solve(spec.A, spec.y, spec.eta, spec.options);
}

inline SolveReport qcbp_solve(const SensingMatrix& A, const CVector& y,
                              double eta, const SolverOptions& opt = {}) {
    return qcbp_solve(A.A, y, eta, opt);
}

inline SolveReport bp_solve(const CMatrix& A, const CVector& y,
                            const SolverOptions& opt = {}) {
    return qcbp_solve(A, y, 0.0, opt);
}

inline SolveReport bp_solve(const SensingMatrix& A, const CVector& y,
                            const SolverOptions& opt = {}) {
    return bp_solve(A.A, y, opt);
}

/// Least-squares reference solution on an independent oversampled grid and
/// the residual eta_opt = ||sqrt(m) A x_ref - y||_2 measured in the raw
/// sample scale of y (y_k = f(tau_k) + n_k).
inline std::pair<CVector, double> eta_opt_reference(
    const SensingMatrix& A, const CVector& y, const BosSystem& sys,
    const std::function<double(const Point&)>& f, int oversample_factor,
    RngStream& rng) {
    if (oversample_factor < 1)
        throw std::invalid_argument("eta_opt_reference: oversample_factor < 1");
    const int N = sys.size;
    const long long T = static_cast<long long>(oversample_factor) * N;
    CMatrix G(T, N);
    CVector b(T);
    Point pt(static_cast<std::size_t>(sys.dim));
    for (long long t = 0; t < T; ++t) {
        sys.sample(rng, pt);
        for (int j = 0; j < N; ++j) G(t, j) = sys.eval(j, pt);
        b(t) = Complex(f(pt), 0.0);
    }
    CVector x_ref = least_squares(G, b);
    double sqrt_m = std::sqrt(static_cast<double>(A.rows()));
    double eta_opt = (sqrt_m * (A.A * x_ref) - y).norm();
    return {x_ref, eta_opt};
}

struct CvConfig {
    double reconstruction_fraction = 0.75;
    int grid_count = 21;
    double lower_mult = 1e-2; // grid spans [lower_mult, upper_mult] x pivot
    double upper_mult = 1e2;
    SolverOptions solver;
};

struct CvResult {
    double eta_cv = 0.0;       // validation residual at the winner, rescaled
    double best_grid_eta = 0.0; // grid value minimizing validation residual
    std::vector<std::pair<double, double>> table; // (eta, validation residual)
    std::vector<double> skipped; // grid points where the solver failed
};

/// Choose eta by cross-validation: random reconstruction/validation split,
/// QCBP on the reconstruction block per grid eta, winner minimizes the
/// validation residual. Residuals are rescaled to the full measurement
/// count via sqrt(m / m_v).
inline CvResult cross_validate_eta(const CMatrix& A, const CVector& y,
                                   const CvConfig& cfg, double pivot_eta,
                                   RngStream& rng) {
    const int m = static_cast<int>(A.rows());
    if (m < 4) throw std::invalid_argument("cross_validate_eta: m < 4");
    if (!(cfg.reconstruction_fraction > 0 && cfg.reconstruction_fraction < 1))
        throw std::invalid_argument("cross_validate_eta: fraction outside (0,1)");
    if (cfg.grid_count < 2)
        throw std::invalid_argument("cross_validate_eta: grid_count < 2");
    if (!(pivot_eta > 0))
        throw std::invalid_argument("cross_validate_eta: pivot_eta <= 0");

    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = m - 1; k > 0; --k) {
        int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k + 1)));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
    }
    int m_r = std::max(1, std::min(m - 1,
        static_cast<int>(std::lround(cfg.reconstruction_fraction * m))));
    int m_v = m - m_r;

    CMatrix Ar(m_r, A.cols()), Av(m_v, A.cols());
    CVector yr(m_r), yv(m_v);
    for (int i = 0; i < m_r; ++i) {
        Ar.row(i) = A.row(perm[static_cast<std::size_t>(i)]);
        yr(i) = y(perm[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < m_v; ++i) {
        Av.row(i) = A.row(perm[static_cast<std::size_t>(m_r + i)]);
        yv(i) = y(perm[static_cast<std::size_t>(m_r + i)]);
    }

    double lo = cfg.lower_mult * pivot_eta, hi = cfg.upper_mult * pivot_eta;
    double ratio = std::pow(hi / lo, 1.0 / (cfg.grid_count - 1));
    double frac_r = std::sqrt(static_cast<double>(m_r) / m);

    CvResult result;
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < cfg.grid_count; ++g) {
        double eta_g = lo * std::pow(ratio, g);
        SolveReport rep;
        try {
            // the constraint level scales with the reduced sample count
            rep = qcbp_solve(Ar, yr, eta_g * frac_r, cfg.solver);
        } catch (const std::exception&) {
            result.skipped.push_back(eta_g);
            continue;
        }
        if (rep.infeasible) {
            result.skipped.push_back(eta_g);
            continue;
        }
        double vres = (Av * rep.x - yv).norm();
        result.table.emplace_back(eta_g, vres);
        if (vres < best) {
            best = vres;
            result.best_grid_eta = eta_g;
            result.eta_cv = vres * std::sqrt(static_cast<double>(m) / m_v);
        }
    }
    if (result.table.empty())
        throw std::runtime_error("cross_validate_eta: all grid points failed");
    return result;
}

} // namespace csl
