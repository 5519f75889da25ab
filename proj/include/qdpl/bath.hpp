// bath.hpp — independent-boson-model bath quantities: spectral density J(w),
// Franck-Condon factor <B>, polaron shift, phonon correlation function phi(t)
// and the polaron Green functions G_g/G_u, tabulated on a uniform tau grid.
#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "qdpl/errors.hpp"
#include "qdpl/params.hpp"
#include "qdpl/quadrature.hpp"
#include "qdpl/units.hpp"

namespace qdpl {

// J(w) = alpha_p w^3 exp(-w^2 / 2 w_b^2), rad/ps for w in rad/ps.
inline double spectral_density(double omega, const BathParams& bath) {
    if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
    const double r = omega / bath.omega_b;
    return bath.alpha_p * omega * omega * omega * std::exp(-0.5 * r * r);
}

namespace detail {

// J(w)/w^2 = alpha_p w exp(-w^2/2w_b^2); finite (zero) at w = 0.
inline double j_over_w2(double omega, const BathParams& bath) {
    const double r = omega / bath.omega_b;
    return bath.alpha_p * omega * std::exp(-0.5 * r * r);
}

// Upper cutoff: the Gaussian tail of J is below 1e-12 relative past 8 w_b.
inline double omega_cutoff(const BathParams& bath) { return 8.0 * bath.omega_b; }

} // namespace detail

// <B> = exp[-1/2 Int_0^inf J(w)/w^2 coth(beta hbar w/2) dw]; coth -> 1 at T = 0.
inline double mean_displacement(const BathParams& bath, double abs_tol = 1e-8) {
    if (bath.alpha_p == 0.0) return 1.0;
    auto integrand = [&](double w) {
        return detail::j_over_w2(w, bath) * thermal_coth(w, bath.temperature);
    };
    auto r = integrate_adaptive(integrand, 0.0, detail::omega_cutoff(bath), {abs_tol});
    return std::exp(-0.5 * r.value);
}

// Delta_P = Int_0^inf J(w)/w dw (rad/ps); equals alpha_p sqrt(pi/2) w_b^3 for Eq-form J.
inline double polaron_shift(const BathParams& bath, double abs_tol = 1e-10) {
    if (bath.alpha_p == 0.0) return 0.0;
    auto integrand = [&](double w) {
        const double r = w / bath.omega_b;
        return bath.alpha_p * w * w * std::exp(-0.5 * r * r);
    };
    auto res = integrate_adaptive(integrand, 0.0, detail::omega_cutoff(bath), {abs_tol});
    return res.value;
}

// phi(t) = Int_0^inf J(w)/w^2 [coth(beta hbar w/2) cos(wt) - i sin(wt)] dw, t >= 0.
inline cd correlation_phi(double t, const BathParams& bath, double abs_tol = 1e-8) {
    if (t < 0.0) throw std::domain_error("correlation_phi: t must be >= 0");
    if (bath.alpha_p == 0.0) return {0.0, 0.0};
    auto integrand = [&](double w) -> cd {
        const double f = detail::j_over_w2(w, bath);
        return {f * thermal_coth(w, bath.temperature) * std::cos(w * t), -f * std::sin(w * t)};
    };
    const double wc = detail::omega_cutoff(bath);
    auto bp = phase_aware_breakpoints(0.0, wc, t);
    auto r = integrate_panels(integrand, bp, {abs_tol});
    return r.value;
}

// Polaron Green functions at a single time. full: (B^2(cosh phi - 1), B^2 sinh phi);
// one-phonon: (0, phi) with <B> treated as 1; no-phonon: (0, 0).
inline std::pair<cd, cd> green_functions(double t, const BathParams& bath, ModelVariant variant,
                                         double b_mean_hint = -1.0) {
    if (variant == ModelVariant::no_phonon || bath.alpha_p == 0.0) return {cd{0.0}, cd{0.0}};
    const cd phi = correlation_phi(t, bath);
    if (variant == ModelVariant::one_phonon) return {cd{0.0}, phi};
    const double b = b_mean_hint > 0.0 ? b_mean_hint : mean_displacement(bath);
    const double b2 = b * b;
    return {b2 * (std::cosh(phi) - 1.0), b2 * std::sinh(phi)};
}

struct BathTableOptions {
    double tau_step = 0.01;   // ps
    double tau_max = 20.0;    // ps; extended automatically if the tail has not decayed
    double tau_hard_max = 160.0;
    double tail_tol = 1e-8;   // on |e^phi - 1|
    double quad_tol = 1e-8;
};

// Tabulated bath functions for one (bath, variant) pair. b_mean is the variant's
// effective Franck-Condon factor (forced to 1 for one-phonon / no-phonon);
// b_mean_full is the physical quadrature value.
struct BathTable {
    BathParams bath;
    ModelVariant variant = ModelVariant::full_polaron_tcl;
    double b_mean = 1.0;
    double b_mean_full = 1.0;
    double delta_p = 0.0; // rad/ps
    double tau_step = 0.01;
    std::vector<cd> phi;
    std::vector<cd> g_g;
    std::vector<cd> g_u;
    std::vector<cd> exp_phi_m1; // e^{phi} - 1 (the EPME rate integrand core)

    double tau_max() const { return phi.empty() ? 0.0 : tau_step * (phi.size() - 1); }

    static BathTable build(const BathParams& bath, ModelVariant variant,
                           const BathTableOptions& opts = {}) {
        bath.validate();
        BathTable t;
        t.bath = bath;
        t.variant = variant;
        t.tau_step = opts.tau_step;
        const bool phononless = variant == ModelVariant::no_phonon || bath.alpha_p == 0.0;
        if (!phononless) {
            t.b_mean_full = mean_displacement(bath, opts.quad_tol);
            t.delta_p = polaron_shift(bath);
        }
        const bool renormalized = variant == ModelVariant::full_polaron_tcl ||
                                  variant == ModelVariant::epme;
        t.b_mean = renormalized ? t.b_mean_full : 1.0;
        if (phononless) {
            t.b_mean = t.b_mean_full = 1.0;
            t.delta_p = 0.0;
            return t;
        }

        auto append_range = [&](double tau_from, double tau_to) {
            for (double tau = tau_from; tau <= tau_to + 0.5 * opts.tau_step; tau += opts.tau_step) {
                const cd p = correlation_phi(tau, bath, opts.quad_tol);
                t.phi.push_back(p);
                t.exp_phi_m1.push_back(std::exp(p) - 1.0);
            }
        };
        append_range(0.0, opts.tau_max);
        while (std::abs(t.exp_phi_m1.back()) > opts.tail_tol) {
            const double from = t.tau_max() + opts.tau_step;
            if (from > opts.tau_hard_max)
                throw TailNotDecayed("bath correlator tail above tolerance at tau = " +
                                     std::to_string(t.tau_max()) + " ps");
            append_range(from, std::min(t.tau_max() + 5.0, opts.tau_hard_max));
        }

        t.g_g.resize(t.phi.size());
        t.g_u.resize(t.phi.size());
        const double b2 = t.b_mean_full * t.b_mean_full;
        for (size_t i = 0; i < t.phi.size(); ++i) {
            if (variant == ModelVariant::one_phonon) {
                t.g_g[i] = 0.0;
                t.g_u[i] = t.phi[i];
            } else {
                t.g_g[i] = b2 * (std::cosh(t.phi[i]) - 1.0);
                t.g_u[i] = b2 * std::sinh(t.phi[i]);
            }
        }
        return t;
    }
};

} // namespace qdpl
