// lorentz_fit.hpp — FWHM extraction by least-squares fit of a Lorentzian plus a
// constant local baseline, initialized from the discrete half-max crossings.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qdpl/errors.hpp"

namespace qdpl {

struct FwhmResult {
    double center = 0.0;
    double fwhm = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double fit_residual = 0.0; // rms residual / amplitude
};

struct FitOptions {
    // fit window = peak +- window_factor * half-max crossing width; 2.0 calibrated
    // against the published no-phonon FWHM tables
    double window_factor = 2.0;
    int max_iterations = 200;
};

namespace detail {

struct CrossingEstimate {
    int peak_index;
    double x_left, x_right;
    double basin_left, basin_right; // positions of the flanking minima
    bool bracketed;
};

inline CrossingEstimate half_max_crossings(std::span<const double> x, std::span<const double> y,
                                           int lo, int hi) {
    // largest local maximum inside [lo, hi]
    int pk = -1;
    for (int i = std::max(lo, 1); i <= std::min<int>(hi, int(y.size()) - 2); ++i) {
        if (y[i] >= y[i - 1] && y[i] >= y[i + 1] && (pk < 0 || y[i] > y[pk])) pk = i;
    }
    if (pk < 0) throw NoPeak("no interior local maximum in the fit window");
    // local baseline: the higher of the two flanking floors, so a neighbouring
    // feature (phonon sideband, other resonance tail) does not stretch the crossing
    double valley_left = y[pk], valley_right = y[pk];
    int argmin_left = pk, argmin_right = pk;
    for (int i = lo; i <= pk; ++i)
        if (y[i] < valley_left) {
            valley_left = y[i];
            argmin_left = i;
        }
    for (int i = pk; i <= hi; ++i)
        if (y[i] < valley_right) {
            valley_right = y[i];
            argmin_right = i;
        }
    const double base = std::max(valley_left, valley_right);
    const double half = base + 0.5 * (y[pk] - base);
    if (!(y[pk] > base)) throw NoPeak("flat curve in the fit window");

    CrossingEstimate est{pk, x[lo], x[hi], x[argmin_left], x[argmin_right], true};
    bool left_found = false, right_found = false;
    for (int i = pk; i > lo; --i) {
        if (y[i - 1] <= half) {
            const double f = (y[i] - half) / (y[i] - y[i - 1]);
            est.x_left = x[i] - f * (x[i] - x[i - 1]);
            left_found = true;
            break;
        }
    }
    for (int i = pk; i < hi; ++i) {
        if (y[i + 1] <= half) {
            const double f = (y[i] - half) / (y[i] - y[i + 1]);
            est.x_right = x[i] + f * (x[i + 1] - x[i]);
            right_found = true;
            break;
        }
    }
    est.bracketed = left_found && right_found;
    return est;
}

} // namespace detail

// Fit A (G/2)^2 / ((x-x0)^2 + (G/2)^2) + B over a window around center_guess.
// `window` is the full width of the search window in x units.
inline FwhmResult fit_lorentzian(std::span<const double> x, std::span<const double> y,
                                 double center_guess, double window, const FitOptions& opts = {}) {
    if (x.size() != y.size() || x.size() < 7) throw NoPeak("curve too short for a fit");
    const int n = static_cast<int>(x.size());
    auto in_range = [&](double lo_x, double hi_x, int& lo, int& hi) {
        lo = 0;
        while (lo < n && x[lo] < lo_x) ++lo;
        hi = n - 1;
        while (hi >= 0 && x[hi] > hi_x) --hi;
    };
    int lo, hi;
    in_range(center_guess - 0.5 * window, center_guess + 0.5 * window, lo, hi);
    if (hi - lo < 6) throw NoPeak("search window contains too few samples");

    const auto est = detail::half_max_crossings(x, y, lo, hi);
    const double width0 = std::max(est.x_right - est.x_left, 2.0 * (x[1] - x[0]));
    const double x0_0 = x[est.peak_index];

    // the fit window never extends past the peak's own basin: beyond the nearest
    // flanking minimum the data belongs to a neighbouring feature
    const double basin_halfwidth =
        std::min(x0_0 - est.basin_left, est.basin_right - x0_0);
    const double halfwidth =
        std::min(opts.window_factor * width0, std::max(basin_halfwidth, width0));
    int flo, fhi;
    in_range(x0_0 - halfwidth, x0_0 + halfwidth, flo, fhi);
    flo = std::max(flo, lo);
    fhi = std::min(fhi, hi);
    const int m = fhi - flo + 1;
    if (m < 5) throw NoPeak("fit window contains too few samples");

    double base0 = y[flo];
    for (int i = flo; i <= fhi; ++i) base0 = std::min(base0, y[i]);
    Eigen::Vector4d p(y[est.peak_index] - base0, x0_0, width0, base0); // A, x0, G, B

    auto eval = [&](const Eigen::Vector4d& q, int i, Eigen::Vector4d* grad) {
        const double A = q(0), x0 = q(1), G = std::abs(q(2)), B = q(3);
        const double hw2 = 0.25 * G * G;
        const double dx = x[flo + i] - x0;
        const double den = dx * dx + hw2;
        const double lor = hw2 / den;
        if (grad) {
            (*grad)(0) = lor;
            (*grad)(1) = A * hw2 * 2.0 * dx / (den * den);
            (*grad)(2) = A * 0.5 * G * (den - hw2) / (den * den) * std::copysign(1.0, q(2));
            (*grad)(3) = 1.0;
        }
        return A * lor + B;
    };

    auto cost = [&](const Eigen::Vector4d& q) {
        double c = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = eval(q, i, nullptr) - y[flo + i];
            c += r * r;
        }
        return c;
    };

    double lambda = 1e-3;
    double best = cost(p);
    for (int it = 0; it < opts.max_iterations; ++it) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (int i = 0; i < m; ++i) {
            Eigen::Vector4d gr;
            const double r = eval(p, i, &gr) - y[flo + i];
            jtj += gr * gr.transpose();
            jtr += gr * r;
        }
        Eigen::Matrix4d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
        const Eigen::Vector4d step = damped.ldlt().solve(jtr);
        if (!step.allFinite()) throw FitDiverged("non-finite Levenberg step");
        const Eigen::Vector4d trial = p - step;
        const double c = cost(trial);
        if (c < best) {
            const double rel = (best - c) / std::max(best, 1e-300);
            p = trial;
            best = c;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-12) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    FwhmResult out;
    out.amplitude = p(0);
    out.center = p(1);
    out.fwhm = std::abs(p(2));
    out.baseline = p(3);
    out.fit_residual = std::sqrt(best / m) / std::max(std::abs(p(0)), 1e-300);
    if (!(out.fwhm > 0.0) || !std::isfinite(out.fwhm) || out.amplitude <= 0.0)
        throw FitDiverged("Lorentzian fit did not converge to a positive peak");

    // A solution far wider than the crossing estimate means the window held more
    // than one feature and the four-parameter problem went degenerate (merged
    // phonon sideband); report the discrete-crossing estimate instead.
    if (out.fwhm > 2.0 * width0) {
        double floor_left = y[est.peak_index], floor_right = y[est.peak_index];
        for (int i = flo; i <= est.peak_index; ++i) floor_left = std::min(floor_left, y[i]);
        for (int i = est.peak_index; i <= fhi; ++i) floor_right = std::min(floor_right, y[i]);
        out.baseline = std::max(floor_left, floor_right);
        out.amplitude = y[est.peak_index] - out.baseline;
        out.center = x0_0;
        out.fwhm = width0;
        double ss = 0.0;
        for (int i = 0; i < m; ++i) {
            const double dx = x[flo + i] - out.center;
            const double hw2 = 0.25 * out.fwhm * out.fwhm;
            const double r = out.amplitude * hw2 / (dx * dx + hw2) + out.baseline - y[flo + i];
            ss += r * r;
        }
        out.fit_residual = std::sqrt(ss / m) / std::max(out.amplitude, 1e-300);
        if (out.amplitude <= 0.0) throw FitDiverged("degenerate window without a resolvable peak");
    }
    return out;
}

} // namespace qdpl
