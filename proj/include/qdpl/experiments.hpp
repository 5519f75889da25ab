// experiments.hpp — the measurement layer built on sweeps: Lorentzian FWHM
// extraction per pump value, integrated PL, and photon-truncation convergence.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdpl/lorentz_fit.hpp"
#include "qdpl/sweep.hpp"

namespace qdpl {

enum class Channel { i_x, i_c };

inline const char* to_string(Channel c) { return c == Channel::i_x ? "i_x" : "i_c"; }

// The conventional read-out channel for each pumping scenario: cavity emission for a
// dot-driven system, QD emission for a cavity-driven one.
inline Channel measured_channel(DriveKind d) {
    return d == DriveKind::exciton_driven ? Channel::i_c : Channel::i_x;
}

inline const std::vector<double>& channel_of(const PLCurve& c, Channel ch) {
    return ch == Channel::i_x ? c.i_x : c.i_c;
}

// FWHM of the resonance nearest center_guess (ueV in laser-detuning coordinates).
inline FwhmResult fwhm(const PLCurve& curve, Channel ch, double center_guess_uev,
                       double window_uev, const FitOptions& opts = {}) {
    return fit_lorentzian(curve.detuning_uev, channel_of(curve, ch), center_guess_uev, window_uev,
                          opts);
}

enum class IplMode { total, lorentzian_only };

// total: trapezoidal integral of the channel over the window.
// lorentzian_only: amplitude * pi * Gamma / 2 of the fitted peak (the constant
// baseline implements the sideband subtraction).
inline double integrated_pl(const PLCurve& curve, Channel ch, IplMode mode, double window_lo_uev,
                            double window_hi_uev, std::optional<double> center_guess = {}) {
    const auto& y = channel_of(curve, ch);
    const auto& x = curve.detuning_uev;
    if (mode == IplMode::total) {
        double acc = 0.0;
        for (size_t i = 0; i + 1 < x.size(); ++i) {
            if (x[i] < window_lo_uev || x[i + 1] > window_hi_uev) continue;
            acc += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
        }
        return acc;
    }
    const double guess = center_guess.value_or(0.5 * (window_lo_uev + window_hi_uev));
    const auto fit = fit_lorentzian(x, y, guess, window_hi_uev - window_lo_uev);
    return fit.amplitude * M_PI * fit.fwhm / 2.0;
}

struct FwhmRow {
    double pump_uev = 0.0;
    Channel channel = Channel::i_c;
    FwhmResult fit;
};

struct FwhmScanOptions {
    SweepOptions sweep{};
    std::optional<Channel> channel{};      // default: measured channel of the drive kind
    std::optional<double> center_uev{};    // default: exciton (dot-driven) or cavity line
    double coarse_halfwidth_uev = 1250.0;
    double coarse_step_uev = 25.0;
    double fine_step_uev = 5.0;
    double fine_halfwidth_min_uev = 350.0;
    double fine_halfwidth_max_uev = 2500.0;
    FitOptions fit{};
};

// Two-pass FWHM for one parameter point: a coarse sweep locates the peak and its
// rough width, a fine sweep spans the fit window.
inline FwhmRow fwhm_for_params(const SystemParams& params, const BathParams& bath,
                               ModelVariant variant, const FwhmScanOptions& opts = {}) {
    const Channel ch = opts.channel.value_or(measured_channel(params.drive_kind));
    const double center = opts.center_uev.value_or(
        params.drive_kind == DriveKind::exciton_driven ? 0.0
                                                       : angular_to_energy(params.delta_cx()));
    // keep the other resonance (exciton at 0 / cavity at delta_cx) out of the window,
    // otherwise the taller peak would win the fit; for a dot-driven line also keep the
    // phonon-sideband maximum near omega_b out of the scan
    const double separation = std::abs(angular_to_energy(params.delta_cx()));
    double cap = opts.fine_halfwidth_max_uev;
    if (separation > 0.0) cap = std::min(cap, 0.7 * separation);
    if (params.drive_kind == DriveKind::exciton_driven && !opts.center_uev)
        cap = std::min(cap, 0.6 * angular_to_energy(bath.omega_b));
    const double coarse_halfwidth = std::min(opts.coarse_halfwidth_uev, cap);

    SweepEngine engine(params, bath, variant, opts.sweep);
    const auto coarse_grid = window_grid(center, coarse_halfwidth, opts.coarse_step_uev);
    const PLCurve coarse = engine.run(coarse_grid);
    const auto rough = fit_lorentzian(coarse.detuning_uev, channel_of(coarse, ch), center,
                                      2.0 * coarse_halfwidth, opts.fit);
    const double halfwidth = std::clamp((opts.fit.window_factor + 0.5) * rough.fwhm,
                                        std::min(opts.fine_halfwidth_min_uev, cap), cap);
    const auto fine_grid = window_grid(rough.center, halfwidth, opts.fine_step_uev);
    const PLCurve fine = engine.run(fine_grid);
    FwhmRow row;
    row.pump_uev = angular_to_energy(params.eta());
    row.channel = ch;
    row.fit = fwhm(fine, ch, rough.center, 2.0 * halfwidth, opts.fit);
    return row;
}

// FWHM per pump value (the power-broadening table measurement).
inline std::vector<FwhmRow> fwhm_vs_pump(const SystemParams& params, const BathParams& bath,
                                         ModelVariant variant, std::span<const double> pumps_uev,
                                         const FwhmScanOptions& opts = {}) {
    std::vector<FwhmRow> rows;
    rows.reserve(pumps_uev.size());
    for (double pump : pumps_uev) {
        const SystemParams p = params.with_pump(energy_to_angular(pump));
        rows.push_back(fwhm_for_params(p, bath, variant, opts));
    }
    return rows;
}

struct ConvergenceReport {
    std::vector<int> n_max;
    std::vector<double> rel_dev; // rel_dev[k] compares n_max[k] against n_max[k-1]
    int converged_at = -1;       // first n_max whose successor changes results < threshold
    double threshold = 0.01;
};

// Repeats the sweep for each truncation level and reports the maximum deviation of
// the measured channel between consecutive levels, relative to the curve peak.
inline ConvergenceReport convergence_study(const SystemParams& params, const BathParams& bath,
                                           ModelVariant variant, std::span<const int> n_max_list,
                                           std::span<const double> grid_uev,
                                           const SweepOptions& opts = {}, double threshold = 0.01) {
    ConvergenceReport rep;
    rep.threshold = threshold;
    const Channel ch = measured_channel(params.drive_kind);
    std::vector<double> prev;
    for (size_t k = 0; k < n_max_list.size(); ++k) {
        if (k > 0 && n_max_list[k] <= n_max_list[k - 1])
            throw Error("convergence_study: n_max list must be ascending");
        const PLCurve curve =
            sweep_detuning(params.with_n_max(n_max_list[k]), bath, variant, grid_uev, opts);
        const auto& y = channel_of(curve, ch);
        rep.n_max.push_back(n_max_list[k]);
        if (k == 0) {
            rep.rel_dev.push_back(std::nan(""));
        } else {
            double dmax = 0.0, peak = 0.0;
            for (size_t i = 0; i < y.size(); ++i) {
                dmax = std::max(dmax, std::abs(y[i] - prev[i]));
                peak = std::max(peak, std::abs(y[i]));
            }
            rep.rel_dev.push_back(dmax / std::max(peak, 1e-9));
            if (rep.converged_at < 0 && rep.rel_dev.back() < threshold)
                rep.converged_at = n_max_list[k - 1];
        }
        prev = y;
    }
    return rep;
}

} // namespace qdpl
