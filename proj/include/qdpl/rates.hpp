// rates.hpp — the four effective phonon Lindblad rates and their Stark shifts.
// All rates reduce to Re/Im parts of K(d) = Int_0^inf (e^{phi(tau)}-1) e^{-i d tau} dtau:
//   Gamma^{sigma-} = 2 <B>^2 eta_x^2 Re K(-Delta_xL)   Gamma^{sigma+} = ... Re K(+Delta_xL)
//   Gamma^{sigma+a} = 2 <B>^2 g^2   Re K(-Delta_cx)    Gamma^{a+sigma-} = ... Re K(+Delta_cx)
// with the Stark shifts the Im parts (without the factor 2).
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "qdpl/bath.hpp"
#include "qdpl/half_fourier.hpp"
#include "qdpl/params.hpp"

namespace qdpl {

struct PhononRates {
    // rad/ps; gamma_feed is Gamma^{a+sigma-} (exciton -> cavity transfer),
    // gamma_defeed is Gamma^{sigma+ a}.
    double gamma_sig_minus = 0.0;
    double gamma_sig_plus = 0.0;
    double gamma_feed = 0.0;
    double gamma_defeed = 0.0;
    double delta_sig_minus = 0.0;
    double delta_sig_plus = 0.0;
    double delta_feed = 0.0;
    double delta_defeed = 0.0;
};

// Computes rates against one tabulated bath; caches the pump-independent drive
// integrals K(d) per detuning (safe for concurrent readers).
class RateCalculator {
  public:
    explicit RateCalculator(std::shared_ptr<const BathTable> table) : table_(std::move(table)) {}

    const BathTable& table() const { return *table_; }

    // K(d) = Int (e^{phi}-1) e^{-i d tau} dtau, in ps.
    cd drive_integral(double detuning) const {
        if (table_->exp_phi_m1.empty()) return {0.0, 0.0};
        const uint64_t key = std::bit_cast<uint64_t>(detuning);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const cd value =
            half_fourier(table_->exp_phi_m1, table_->tau_step, detuning).value;
        std::unique_lock lock(mutex_);
        cache_.emplace(key, value);
        return value;
    }

    // (Gamma^{sigma-}, Gamma^{sigma+}) for pump eta_x at laser detuning Delta_xL (rad/ps).
    std::pair<double, double> eid_rates(double eta_x, double delta_xL) const {
        const double pre = 2.0 * b2() * eta_x * eta_x;
        return {clamp_rate(pre * std::real(drive_integral(-delta_xL))),
                clamp_rate(pre * std::real(drive_integral(+delta_xL)))};
    }

    // (Gamma^{sigma+ a}, Gamma^{a+ sigma-}) for coupling g at cavity-exciton detuning
    // Delta_cx (rad/ps).
    std::pair<double, double> feeding_rates(double g, double delta_cx) const {
        const double pre = 2.0 * b2() * g * g;
        return {clamp_rate(pre * std::real(drive_integral(-delta_cx))),
                clamp_rate(pre * std::real(drive_integral(+delta_cx)))};
    }

    // (d_sig_minus, d_sig_plus, d_defeed, d_feed) Stark shifts, rad/ps.
    std::array<double, 4> stark_shifts(double eta_x, double g, double delta_xL,
                                       double delta_cx) const {
        const double px = b2() * eta_x * eta_x;
        const double pg = b2() * g * g;
        return {px * std::imag(drive_integral(-delta_xL)), px * std::imag(drive_integral(+delta_xL)),
                pg * std::imag(drive_integral(-delta_cx)), pg * std::imag(drive_integral(+delta_cx))};
    }

    // Full bundle at the parameter point; for a cavity-driven system the
    // sigma± channels vanish identically (the drive never enters the bath coupling).
    PhononRates rates(const SystemParams& p) const {
        PhononRates r;
        const double dcx = p.delta_cx();
        if (p.drive_kind == DriveKind::exciton_driven && p.eta_x != 0.0) {
            std::tie(r.gamma_sig_minus, r.gamma_sig_plus) = eid_rates(p.eta_x, p.delta_xL);
            const double px = b2() * p.eta_x * p.eta_x;
            r.delta_sig_minus = px * std::imag(drive_integral(-p.delta_xL));
            r.delta_sig_plus = px * std::imag(drive_integral(+p.delta_xL));
        }
        if (p.g != 0.0) {
            std::tie(r.gamma_defeed, r.gamma_feed) = feeding_rates(p.g, dcx);
            const double pg = b2() * p.g * p.g;
            r.delta_defeed = pg * std::imag(drive_integral(-dcx));
            r.delta_feed = pg * std::imag(drive_integral(+dcx));
        }
        return r;
    }

  private:
    double b2() const { return table_->b_mean * table_->b_mean; }

    static double clamp_rate(double r) {
        // Re K is pi * (sampled spectral weight) >= 0; only quadrature noise may dip below.
        if (r < 0.0) {
            if (r < -1e-10) throw Error("phonon rate significantly negative: " + std::to_string(r));
            return 0.0;
        }
        return r;
    }

    std::shared_ptr<const BathTable> table_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<uint64_t, cd> cache_;
};

} // namespace qdpl
