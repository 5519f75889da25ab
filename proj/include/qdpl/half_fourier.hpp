// half_fourier.hpp — Filon-type evaluation of Int_0^taumax f(tau) e^{-i w tau} dtau
// for a tabulated integrand on a uniform grid. The oscillation is integrated
// analytically per panel, so arbitrary w (multi-meV detunings) stays resolved.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qdpl/errors.hpp"

namespace qdpl {

namespace detail {

// Moments m_p = Int_0^T s^p e^{-i w s} ds, p = 0..2, with a series branch for small |wT|.
inline std::array<std::complex<double>, 3> filon_moments(double omega, double T) {
    using cd = std::complex<double>;
    std::array<cd, 3> m;
    const double wt = omega * T;
    if (std::abs(wt) < 0.3) {
        for (int p = 0; p < 3; ++p) {
            cd term = std::pow(T, p + 1) / double(p + 1);
            cd sum = term;
            const cd z(0.0, -omega * T);
            for (int k = 1; k < 30; ++k) {
                term *= z / double(k);
                // term now carries (-iwT)^k T^{p+1} / k!; rescale for the (p+k+1) denominator
                const cd contrib = term * (double(p + 1) / double(p + k + 1));
                sum += contrib;
                if (std::abs(contrib) < 1e-18 * (1.0 + std::abs(sum))) break;
            }
            m[p] = sum;
        }
        return m;
    }
    const cd iw(0.0, omega);
    const cd E = std::exp(cd(0.0, -wt));
    m[0] = (1.0 - E) / iw;
    m[1] = (m[0] - T * E) / iw;
    m[2] = (2.0 * m[1] - T * T * E) / iw;
    return m;
}

// Composite Filon-Simpson pass at the given stride (stride>1 reuses every
// stride-th sample for the embedded error estimate).
inline std::complex<double> filon_pass(std::span<const std::complex<double>> f, double h,
                                       double omega, int stride) {
    using cd = std::complex<double>;
    const long n = static_cast<long>(f.size());
    const double hs = h * stride;
    cd total = 0.0;
    long i = 0;
    const auto quad_moments = filon_moments(omega, 2.0 * hs);
    for (; i + 2 * stride <= n - 1; i += 2 * stride) {
        const cd f0 = f[i], f1 = f[i + stride], f2 = f[i + 2 * stride];
        const cd c0 = f0;
        const cd c1 = (4.0 * f1 - 3.0 * f0 - f2) / (2.0 * hs);
        const cd c2 = (f0 - 2.0 * f1 + f2) / (2.0 * hs * hs);
        const cd phase = std::exp(cd(0.0, -omega * (i * h)));
        total += phase * (c0 * quad_moments[0] + c1 * quad_moments[1] + c2 * quad_moments[2]);
    }
    // Leftover single interval: linear interpolation times the analytic phase.
    if (i + stride <= n - 1) {
        const auto lin = filon_moments(omega, hs);
        const cd f0 = f[i], f1 = f[i + stride];
        const cd c1 = (f1 - f0) / hs;
        const cd phase = std::exp(cd(0.0, -omega * (i * h)));
        total += phase * (f0 * lin[0] + c1 * lin[1]);
    }
    return total;
}

} // namespace detail

struct HalfFourierResult {
    std::complex<double> value;
    double error = 0.0;
};

// f is tabulated at tau = 0, h, 2h, ..., tau_max. Throws TailNotDecayed when
// |f(tau_max)| > tail_tol (precondition of the half-open integral).
inline HalfFourierResult half_fourier(std::span<const std::complex<double>> f, double tau_step,
                                      double omega, double tail_tol = 1e-8) {
    if (f.size() < 5) throw Error("half_fourier: need at least 5 samples");
    const double tail = std::abs(f.back());
    if (tail > tail_tol)
        throw TailNotDecayed("half_fourier: |f(tau_max)| = " + std::to_string(tail) +
                             " above tolerance " + std::to_string(tail_tol));
    const auto fine = detail::filon_pass(f, tau_step, omega, 1);
    const auto coarse = detail::filon_pass(f, tau_step, omega, 2);
    return {fine, std::abs(fine - coarse) / 15.0 + tail};
}

} // namespace qdpl
