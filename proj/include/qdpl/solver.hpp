// solver.hpp — steady-state and time-domain solution of an assembled Liouvillian.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "qdpl/errors.hpp"
#include "qdpl/superop.hpp"

namespace qdpl {

struct SteadyState {
    Eigen::MatrixXcd rho;
    double residual = 0.0;       // max |L vec(rho)|
    double min_eigenvalue = 0.0; // smallest eigenvalue of rho
    double sv_ratio = 0.0;       // sigma_2 / sigma_1 of L (uniqueness margin)
};

struct SteadyStateOptions {
    bool check_uniqueness = true;
    double uniqueness_ratio = 1e3;
    double residual_tol = 1e-9; // relative to max|L|
};

namespace detail {

// Two smallest singular values of L by inverse iteration on L+L + eps, the first
// seeded with the steady-state vector, the second deflated against it.
inline std::pair<double, double> smallest_two_singular_values(const Eigen::MatrixXcd& L,
                                                              const Eigen::VectorXcd& null_guess) {
    const Eigen::Index n = L.rows();
    const double scale = L.cwiseAbs().maxCoeff();
    const double eps = std::pow(1e-9 * scale, 2);
    Eigen::MatrixXcd M = L.adjoint() * L;
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) += eps;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    M.diagonal().array() -= eps; // keep the exact quadratic form for Rayleigh quotients

    auto iterate = [&](Eigen::VectorXcd v, const Eigen::VectorXcd* deflate) {
        v.normalize();
        double sigma2 = 0.0;
        for (int it = 0; it < 12; ++it) {
            v = lu.solve(v);
            if (deflate) v -= (*deflate) * (deflate->dot(v));
            const double nrm = v.norm();
            if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
            v /= nrm;
            const double s2 = std::real(v.dot(M * v));
            const bool settled = it > 0 && std::abs(s2 - sigma2) < 1e-3 * std::abs(s2) + 1e-300;
            sigma2 = s2;
            if (settled) break;
        }
        return std::make_pair(std::max(sigma2, 0.0), v);
    };

    auto [s1sq, v1] = iterate(null_guess, nullptr);
    // deterministic dense seed: a structured unit vector can be exactly orthogonal
    // to every remaining null direction
    Eigen::VectorXcd v2(n);
    uint64_t state = 0x9e3779b97f4a7c15ull;
    for (Eigen::Index i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double re = double(state >> 11) / double(1ull << 53) - 0.5;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double im = double(state >> 11) / double(1ull << 53) - 0.5;
        v2(i) = std::complex<double>(re, im);
    }
    v2 -= v1 * v1.dot(v2);
    const double s2sq = iterate(v2, &v1).first;
    return {std::sqrt(s1sq), std::sqrt(s2sq)};
}

} // namespace detail

// Solve the bordered least-squares system [L; vec(I)+] x = [0; 1] and verify the
// null space is one-dimensional.
inline SteadyState steady_state(const Superoperator& L, const SteadyStateOptions& opts = {}) {
    const int d = L.dim;
    const Eigen::Index N = Eigen::Index(d) * d;
    const double scale = L.m.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw NoConvergence("steady_state: zero Liouvillian");

    Eigen::MatrixXcd A(N + 1, N);
    A.topRows(N) = L.m;
    A.row(N).setZero();
    for (int i = 0; i < d; ++i) A(N, Eigen::Index(i) * d + i) = scale; // weighted trace row
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(N + 1);
    b(N) = scale;

    Eigen::VectorXcd x = A.householderQr().solve(b);
    Eigen::MatrixXcd rho = devectorize(x, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const std::complex<double> tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw NoConvergence("steady_state: vanishing trace");
    rho /= tr;

    SteadyState out;
    out.rho = rho;
    out.residual = (L.m * vectorize(rho)).cwiseAbs().maxCoeff();
    if (!(out.residual < opts.residual_tol * scale))
        throw NoConvergence("steady_state: residual " + std::to_string(out.residual) +
                            " above tolerance for |L| = " + std::to_string(scale));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();

    if (opts.check_uniqueness) {
        auto [s1, s2] = detail::smallest_two_singular_values(L.m, vectorize(rho));
        out.sv_ratio = s2 / std::max(s1, 1e-300);
        // Rayleigh quotients of null vectors bottom out at sqrt(machine noise), so a
        // singular value below ~1e-8 |L| is numerically indistinguishable from zero.
        const double floor = 1e-8 * scale;
        if (s1 > floor && s2 < opts.uniqueness_ratio * s1)
            throw DegenerateNullSpace("steady_state: sigma_2/sigma_1 = " +
                                      std::to_string(out.sv_ratio));
        if (s1 <= floor && s2 <= floor)
            throw DegenerateNullSpace("steady_state: at least two null directions");
    }
    return out;
}

inline std::complex<double> expectation(const Eigen::MatrixXcd& rho, const OperatorMatrix& a) {
    if (rho.rows() != a.mat.rows()) throw Error("expectation: dimension mismatch");
    return (a.mat * rho).trace();
}

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-13;
};

// Adaptive Dormand-Prince RK5(4) on vec(rho)' = L vec(rho); returns rho at each grid time.
inline std::vector<Eigen::MatrixXcd> evolve(const Eigen::MatrixXcd& rho0, const Superoperator& L,
                                            std::span<const double> t_grid,
                                            const EvolveOptions& opts = {}) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
    static const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                        e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    auto deriv = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return L.m * y; };

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(t_grid.size());
    Eigen::VectorXcd y = vectorize(rho0);
    double t = 0.0;
    double h = opts.h_init;
    Eigen::VectorXcd k1 = deriv(y);
    for (double target : t_grid) {
        if (target < t) throw Error("evolve: t_grid must be nondecreasing from 0");
        while (t < target) {
            const double hs = std::min(h, target - t);
            Eigen::VectorXcd k2 = deriv(y + hs * (a21 * k1));
            Eigen::VectorXcd k3 = deriv(y + hs * (a31 * k1 + a32 * k2));
            Eigen::VectorXcd k4 = deriv(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
            Eigen::VectorXcd k5 = deriv(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            Eigen::VectorXcd k6 =
                deriv(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            Eigen::VectorXcd y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            Eigen::VectorXcd k7 = deriv(y5);
            Eigen::VectorXcd err =
                hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double tol = opts.atol + opts.rtol * std::max(y.cwiseAbs().maxCoeff(),
                                                                y5.cwiseAbs().maxCoeff());
            const double emax = err.cwiseAbs().maxCoeff();
            if (emax <= tol) {
                t += hs;
                y = std::move(y5);
                k1 = std::move(k7); // first-same-as-last
            }
            const double ratio = emax > 0.0 ? std::pow(tol / emax, 0.2) : 5.0;
            h = hs * std::clamp(0.9 * ratio, 0.2, 5.0);
            if (h < opts.h_min)
                throw StepSizeUnderflow("evolve: step size underflow at t = " + std::to_string(t));
        }
        out.push_back(devectorize(y, L.dim));
    }
    return out;
}

} // namespace qdpl
