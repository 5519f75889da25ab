// run.hpp — subcommand orchestration shared by the CLI and the tests: each run
// takes a parsed config and writes deterministic CSV (and optional SVG) outputs.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qdpl/config.hpp"
#include "qdpl/csv.hpp"
#include "qdpl/experiments.hpp"
#include "qdpl/rates.hpp"
#include "qdpl/svg.hpp"
#include "qdpl/sweep.hpp"

namespace qdpl {

struct RunContext {
    std::string out_dir = ".";
    int threads = 0;
    bool svg = false;
    std::vector<std::string> written;

    std::string path(const std::string& name) {
        std::filesystem::create_directories(out_dir);
        const std::string p = (std::filesystem::path(out_dir) / name).string();
        written.push_back(p);
        return p;
    }
};

inline std::vector<double> sweep_grid_from_config(const RunConfig& cfg) {
    const auto& r = cfg.run;
    if (r.grid_min_uev && r.grid_max_uev && r.grid_step_uev) {
        std::vector<double> g;
        for (double v = *r.grid_min_uev; v <= *r.grid_max_uev + 1e-9; v += *r.grid_step_uev)
            g.push_back(v);
        return g;
    }
    return default_detuning_grid(angular_to_energy(cfg.system.delta_cx()), r.half_span_uev,
                                 r.fine_halfwidth_uev, r.fine_step_uev, r.coarse_step_uev);
}

inline void run_rates(const RunConfig& cfg, RunContext& ctx) {
    auto table = std::make_shared<BathTable>(
        BathTable::build(cfg.bath, ModelVariant::epme));
    RateCalculator rc(table);
    CsvWriter csv(ctx.path("rates.csv"));
    csv.meta(cfg.resolved());
    csv.meta("b_mean", format_number(table->b_mean));
    csv.meta("polaron_shift_uev", format_number(angular_to_energy(table->delta_p)));
    csv.header(
        "detuning_ueV,gamma_sig_minus,gamma_sig_plus,gamma_feed,gamma_defeed,"
        "delta_sig_minus,delta_sig_plus,delta_feed,delta_defeed");
    const auto& r = cfg.run;
    for (double d = r.rates_min_uev; d <= r.rates_max_uev + 1e-9; d += r.rates_step_uev) {
        const double w = energy_to_angular(d);
        const auto [gm, gp] = rc.eid_rates(cfg.system.eta_x, w);
        const auto [gdf, gf] = rc.feeding_rates(cfg.system.g, w);
        const auto sh = rc.stark_shifts(cfg.system.eta_x, cfg.system.g, w, w);
        csv.row({d, angular_to_energy(gm), angular_to_energy(gp), angular_to_energy(gf),
                 angular_to_energy(gdf), angular_to_energy(sh[0]), angular_to_energy(sh[1]),
                 angular_to_energy(sh[3]), angular_to_energy(sh[2])});
    }
}

inline void write_curve_csv(const RunConfig& cfg, RunContext& ctx, const PLCurve& curve,
                            const std::string& name) {
    CsvWriter csv(ctx.path(name));
    csv.meta(cfg.resolved());
    csv.meta("temperature_K", format_number(curve.meta.temperature));
    csv.header("detuning_ueV,i_x,i_c");
    double nx = 1.0, nc = 1.0;
    if (cfg.run.normalize) {
        nx = *std::max_element(curve.i_x.begin(), curve.i_x.end());
        nc = *std::max_element(curve.i_c.begin(), curve.i_c.end());
        if (nx <= 0) nx = 1.0;
        if (nc <= 0) nc = 1.0;
    }
    for (size_t i = 0; i < curve.detuning_uev.size(); ++i)
        csv.row({curve.detuning_uev[i], curve.i_x[i] / nx, curve.i_c[i] / nc});
}

inline void run_sweep(const RunConfig& cfg, RunContext& ctx) {
    SweepOptions opts;
    opts.threads = ctx.threads;
    const auto grid = sweep_grid_from_config(cfg);
    const PLCurve curve = sweep_detuning(cfg.system, cfg.bath, cfg.variant, grid, opts);
    write_curve_csv(cfg, ctx, curve, "sweep.csv");
    if (ctx.svg) {
        write_svg_plot(ctx.path("sweep.svg"), curve.detuning_uev,
                       {{"i_x", "#d62728", curve.i_x}, {"i_c", "#1f77b4", curve.i_c}},
                       "laser detuning wL-wx (ueV)", "steady-state population", true);
    }
}

inline void run_fwhm(const RunConfig& cfg, RunContext& ctx) {
    FwhmScanOptions opts;
    opts.sweep.threads = ctx.threads;
    if (cfg.run.channel) opts.channel = *cfg.run.channel == "i_x" ? Channel::i_x : Channel::i_c;
    if (cfg.run.center_uev) opts.center_uev = *cfg.run.center_uev;
    std::vector<double> pumps = cfg.run.pumps_uev;
    if (pumps.empty()) pumps = {angular_to_energy(cfg.system.eta())};
    const auto rows = fwhm_vs_pump(cfg.system, cfg.bath, cfg.variant, pumps, opts);
    CsvWriter csv(ctx.path("fwhm.csv"));
    csv.meta(cfg.resolved());
    csv.header("pump_ueV,channel,center_ueV,fwhm_ueV,residual");
    for (const auto& row : rows)
        csv.raw(format_number(row.pump_uev) + "," + to_string(row.channel) + "," +
                format_number(row.fit.center) + "," + format_number(row.fit.fwhm) + "," +
                format_number(row.fit.fit_residual));
}

inline void run_ipl(const RunConfig& cfg, RunContext& ctx) {
    SweepOptions opts;
    opts.threads = ctx.threads;
    std::vector<double> pumps = cfg.run.pumps_uev;
    if (pumps.empty()) pumps = {10, 20, 30, 40, 50, 60};
    const Channel ch = cfg.run.channel
                           ? (*cfg.run.channel == "i_x" ? Channel::i_x : Channel::i_c)
                           : measured_channel(cfg.system.drive_kind);
    const double center = cfg.run.center_uev.value_or(
        cfg.system.drive_kind == DriveKind::exciton_driven
            ? 0.0
            : angular_to_energy(cfg.system.delta_cx()));
    // fit window for the Lorentzian component: isolate the target resonance from the
    // other line and from the phonon-sideband maximum (same rule as the FWHM scans)
    double guard = 0.7 * std::abs(angular_to_energy(cfg.system.delta_cx()));
    if (cfg.system.drive_kind == DriveKind::exciton_driven)
        guard = std::min(guard, 0.6 * angular_to_energy(cfg.bath.omega_b));
    if (!(guard > 0.0)) guard = 0.6 * angular_to_energy(cfg.bath.omega_b);
    const auto grid = sweep_grid_from_config(cfg);
    CsvWriter csv(ctx.path("ipl.csv"));
    csv.meta(cfg.resolved());
    csv.meta("channel", to_string(ch));
    csv.meta("lorentzian_center_ueV", format_number(center));
    csv.meta("lorentzian_window_ueV", format_number(guard));
    csv.header("pump_ueV,pump_sq_ueV2,ipl_total,ipl_lorentzian_only");
    for (double pump : pumps) {
        const SystemParams p = cfg.system.with_pump(energy_to_angular(pump));
        const PLCurve curve = sweep_detuning(p, cfg.bath, cfg.variant, grid, opts);
        const double total = integrated_pl(curve, ch, IplMode::total, cfg.run.ipl_window_lo_uev,
                                           cfg.run.ipl_window_hi_uev);
        const double lor =
            integrated_pl(curve, ch, IplMode::lorentzian_only, center - guard, center + guard,
                          center);
        csv.row({pump, pump * pump, total, lor});
    }
}

inline void run_convergence(const RunConfig& cfg, RunContext& ctx) {
    SweepOptions opts;
    opts.threads = ctx.threads;
    std::vector<int> levels = cfg.run.n_max_list;
    if (levels.empty())
        levels = cfg.system.drive_kind == DriveKind::exciton_driven ? std::vector<int>{1, 2, 3}
                                                                    : std::vector<int>{2, 4, 6, 7};
    const auto grid = sweep_grid_from_config(cfg);
    const auto rep = convergence_study(cfg.system, cfg.bath, cfg.variant, levels, grid, opts);
    CsvWriter csv(ctx.path("convergence.csv"));
    csv.meta(cfg.resolved());
    csv.meta("converged_at_n_max",
             rep.converged_at >= 0 ? std::to_string(rep.converged_at) : "none");
    csv.header("n_max,max_rel_dev_vs_prev");
    for (size_t i = 0; i < rep.n_max.size(); ++i)
        csv.row({double(rep.n_max[i]), rep.rel_dev[i]});
}

inline int run_subcommand(const std::string& name, const RunConfig& cfg, RunContext& ctx) {
    if (name == "rates")
        run_rates(cfg, ctx);
    else if (name == "sweep")
        run_sweep(cfg, ctx);
    else if (name == "fwhm")
        run_fwhm(cfg, ctx);
    else if (name == "ipl")
        run_ipl(cfg, ctx);
    else if (name == "convergence")
        run_convergence(cfg, ctx);
    else
        throw Error("unknown subcommand: " + name);
    return 0;
}

} // namespace qdpl
