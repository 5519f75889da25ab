// params.hpp — parameter records for the phonon bath and the driven dot-cavity system
#pragma once

#include <cmath>
#include <string>

#include "qdpl/errors.hpp"
#include "qdpl/units.hpp"

namespace qdpl {

enum class DriveKind { exciton_driven, cavity_driven };

enum class ModelVariant { full_polaron_tcl, epme, one_phonon, no_phonon };

inline const char* to_string(DriveKind d) {
    return d == DriveKind::exciton_driven ? "exciton-driven" : "cavity-driven";
}

inline const char* to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::full_polaron_tcl: return "full";
        case ModelVariant::epme: return "epme";
        case ModelVariant::one_phonon: return "one-phonon";
        case ModelVariant::no_phonon: return "no-phonon";
    }
    return "?";
}

inline ModelVariant variant_from_string(const std::string& s) {
    if (s == "full" || s == "full-polaron-tcl" || s == "full-tcl") return ModelVariant::full_polaron_tcl;
    if (s == "epme") return ModelVariant::epme;
    if (s == "one-phonon") return ModelVariant::one_phonon;
    if (s == "no-phonon") return ModelVariant::no_phonon;
    throw ConfigError("unknown model variant '" + s + "' (expected full|epme|one-phonon|no-phonon)");
}

// Phonon spectral-density coefficients and bath temperature.
// J(w) = alpha_p * w^3 * exp(-w^2 / 2 w_b^2); alpha_p = 0 means no phonon coupling.
struct BathParams {
    double alpha_p = 0.0;     // ps^2
    double omega_b = 0.0;     // rad/ps
    double temperature = 0.0; // K

    void validate() const {
        if (!(alpha_p >= 0.0)) throw ConfigError("bath: alpha_p must be >= 0");
        if (!(omega_b > 0.0)) throw ConfigError("bath: omega_b must be > 0");
        if (!(temperature >= 0.0)) throw ConfigError("bath: temperature must be >= 0");
    }
};

// Dot/cavity/laser detunings, couplings, drives and decay rates, all rad/ps internally.
// Detunings are stored as delta_xL = w_x - w_L and delta_cL = w_c - w_L, so
// delta_cx = delta_cL - delta_xL holds identically.
struct SystemParams {
    double delta_xL = 0.0;
    double delta_cL = 0.0;
    double g = 0.0;
    double eta_x = 0.0;
    double eta_c = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
    double gamma_prime = 0.0;
    int n_max = 2;
    DriveKind drive_kind = DriveKind::exciton_driven;
    bool explicit_polaron_shift = false;

    double delta_cx() const { return delta_cL - delta_xL; }

    double eta() const { return drive_kind == DriveKind::exciton_driven ? eta_x : eta_c; }

    // New parameter point at laser detuning w_L - w_x = d (rad/ps), keeping delta_cx fixed.
    SystemParams at_laser_detuning(double d) const {
        SystemParams p = *this;
        p.delta_xL = -d;
        p.delta_cL = p.delta_xL + delta_cx();
        return p;
    }

    SystemParams with_pump(double eta_new) const {
        SystemParams p = *this;
        (drive_kind == DriveKind::exciton_driven ? p.eta_x : p.eta_c) = eta_new;
        return p;
    }

    SystemParams with_n_max(int n) const {
        SystemParams p = *this;
        p.n_max = n;
        return p;
    }

    void validate() const {
        if (!(g >= 0.0 && eta_x >= 0.0 && eta_c >= 0.0 && gamma >= 0.0 && kappa >= 0.0 &&
              gamma_prime >= 0.0))
            throw ConfigError("system: couplings and rates must be >= 0");
        if (n_max < 1) throw ConfigError("system: n_max must be >= 1");
        if (eta_x != 0.0 && eta_c != 0.0)
            throw ConfigError("system: only one of eta_x, eta_c may be nonzero per run");
        if (drive_kind == DriveKind::exciton_driven && eta_c != 0.0)
            throw ConfigError("system: exciton-driven run must have eta_c = 0");
        if (drive_kind == DriveKind::cavity_driven && eta_x != 0.0)
            throw ConfigError("system: cavity-driven run must have eta_x = 0");
        if (!std::isfinite(delta_xL) || !std::isfinite(delta_cL))
            throw ConfigError("system: detunings must be finite");
    }
};

} // namespace qdpl
