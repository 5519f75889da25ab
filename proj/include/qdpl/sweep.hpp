// sweep.hpp — intensity-vs-laser-detuning sweeps: per grid point rebuild the
// Liouvillian at the shifted laser frequency (fixed cavity-exciton detuning),
// solve for the steady state, record n_x and n_c.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qdpl/master_eq.hpp"
#include "qdpl/parallel.hpp"
#include "qdpl/params.hpp"
#include "qdpl/solver.hpp"

namespace qdpl {

struct SweepMeta {
    DriveKind drive = DriveKind::exciton_driven;
    ModelVariant variant = ModelVariant::full_polaron_tcl;
    double temperature = 0.0;  // K
    double eta_uev = 0.0;
    double delta_cx_uev = 0.0;
    int n_max = 0;
    bool normalized = false;
};

// Sampled intensity curve over laser detuning w_L - w_x (ueV). Raw steady-state
// populations are always retained; normalization is applied only at output time.
struct PLCurve {
    std::vector<double> detuning_uev;
    std::vector<double> i_x;
    std::vector<double> i_c;
    SweepMeta meta;

    const std::vector<double>& channel(bool cavity) const { return cavity ? i_c : i_x; }
};

struct SweepOptions {
    int threads = 0; // 0 = hardware concurrency
    LiouvillianOptions liouvillian{};
    SteadyStateOptions solver{};
};

// Default grid per the sampling plan: fine spacing within a window around each
// resonance (exciton at 0 and cavity at delta_cx), coarse elsewhere.
inline std::vector<double> default_detuning_grid(double delta_cx_uev, double half_span_uev = 6000.0,
                                                 double fine_halfwidth_uev = 400.0,
                                                 double fine_step_uev = 5.0,
                                                 double coarse_step_uev = 25.0) {
    std::set<long long> ticks; // in tenths of ueV to dedupe exactly
    auto add = [&](double v) {
        if (v >= -half_span_uev - 1e-9 && v <= half_span_uev + 1e-9)
            ticks.insert(llround(v * 10.0));
    };
    for (double v = -half_span_uev; v <= half_span_uev + 1e-9; v += coarse_step_uev) add(v);
    for (double c : {0.0, delta_cx_uev})
        for (double v = c - fine_halfwidth_uev; v <= c + fine_halfwidth_uev + 1e-9;
             v += fine_step_uev)
            add(v);
    std::vector<double> grid;
    grid.reserve(ticks.size());
    for (long long t : ticks) grid.push_back(t / 10.0);
    return grid;
}

inline std::vector<double> window_grid(double center_uev, double halfwidth_uev, double step_uev) {
    std::vector<double> grid;
    for (double v = center_uev - halfwidth_uev; v <= center_uev + halfwidth_uev + 1e-9;
         v += step_uev)
        grid.push_back(v);
    return grid;
}

// Reusable per-sweep state: one bath table, one rate cache, one operator set.
class SweepEngine {
  public:
    SweepEngine(const SystemParams& base, const BathParams& bath, ModelVariant variant,
                const SweepOptions& opts = {})
        : base_(base),
          bath_(bath),
          opts_(opts),
          space_(TruncatedSpace::make(base.n_max)),
          table_(std::make_shared<BathTable>(BathTable::build(bath, variant))),
          rate_calc_(table_) {
        base_.validate();
        bath_.validate();
    }

    const BathTable& table() const { return *table_; }
    const TruncatedSpace& space() const { return space_; }
    const RateCalculator& rates() const { return rate_calc_; }

    Superoperator liouvillian_at(double detuning_uev) const {
        const SystemParams p = base_.at_laser_detuning(energy_to_angular(detuning_uev));
        return full_liouvillian(space_, p, *table_, opts_.liouvillian, &rate_calc_);
    }

    PLCurve run(std::span<const double> grid_uev) const {
        PLCurve curve;
        curve.detuning_uev.assign(grid_uev.begin(), grid_uev.end());
        if (!std::is_sorted(curve.detuning_uev.begin(), curve.detuning_uev.end()))
            throw Error("sweep grid must be strictly increasing");
        curve.i_x.resize(grid_uev.size());
        curve.i_c.resize(grid_uev.size());
        curve.meta = {base_.drive_kind,
                      table_->variant,
                      bath_.temperature,
                      angular_to_energy(base_.eta()),
                      angular_to_energy(base_.delta_cx()),
                      base_.n_max,
                      false};
        const Operators ops = build_operators(space_);
        parallel_for(static_cast<long>(grid_uev.size()), opts_.threads, [&](long i) {
            try {
                const Superoperator L = liouvillian_at(curve.detuning_uev[i]);
                const SteadyState ss = steady_state(L, opts_.solver);
                curve.i_x[i] = std::real(expectation(ss.rho, ops.sig_11));
                curve.i_c[i] = std::real(expectation(ss.rho, ops.n_photon));
            } catch (const Error& e) {
                throw Error("sweep point at detuning " + std::to_string(curve.detuning_uev[i]) +
                            " ueV failed: " + e.what());
            }
        });
        return curve;
    }

  private:
    SystemParams base_;
    BathParams bath_;
    SweepOptions opts_;
    TruncatedSpace space_;
    std::shared_ptr<BathTable> table_;
    RateCalculator rate_calc_;
};

inline PLCurve sweep_detuning(const SystemParams& params, const BathParams& bath,
                              ModelVariant variant, std::span<const double> grid_uev,
                              const SweepOptions& opts = {}) {
    return SweepEngine(params, bath, variant, opts).run(grid_uev);
}

} // namespace qdpl
