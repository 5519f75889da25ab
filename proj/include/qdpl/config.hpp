// config.hpp — key = value run configuration with [bath], [system], [run] sections.
// Energies are in ueV unless the key carries a _mev suffix. Unknown keys are hard
// errors so unit typos cannot pass silently.
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdpl/params.hpp"
#include "qdpl/units.hpp"

namespace qdpl {

enum class AlphaConvention { direct, two_pi_squared };

struct RunOptions {
    // sweep
    double half_span_uev = 6000.0;
    double fine_halfwidth_uev = 400.0;
    double fine_step_uev = 5.0;
    double coarse_step_uev = 25.0;
    std::optional<double> grid_min_uev, grid_max_uev, grid_step_uev; // explicit uniform grid
    bool normalize = false;
    // fwhm / ipl
    std::vector<double> pumps_uev;
    std::optional<std::string> channel; // i_x | i_c
    std::optional<double> center_uev;
    // ipl
    double ipl_window_lo_uev = -6000.0;
    double ipl_window_hi_uev = 6000.0;
    // convergence
    std::vector<int> n_max_list;
    // rates
    double rates_min_uev = -5000.0;
    double rates_max_uev = 5000.0;
    double rates_step_uev = 10.0;
    // single-point laser detuning (w_L - w_x) for rates context
    double laser_detuning_uev = 0.0;
};

struct RunConfig {
    BathParams bath;            // internal units
    SystemParams system;        // internal units
    ModelVariant variant = ModelVariant::full_polaron_tcl;
    AlphaConvention alpha_convention = AlphaConvention::direct;
    RunOptions run;

    // every resolved setting, for reproducibility metadata in output files
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

namespace detail {

struct KV {
    std::string section, key, value;
    int line;
};

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<KV> tokenize_config(const std::string& text) {
    std::vector<KV> out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        KV kv{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (kv.section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        if (kv.key.empty() || kv.value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        out.push_back(std::move(kv));
    }
    return out;
}

inline double parse_double(const KV& kv) {
    try {
        size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.key +
                          "' expects a number, got '" + kv.value + "'");
    }
}

inline bool parse_bool(const KV& kv) {
    if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
    if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
    throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects a boolean");
}

inline std::vector<double> parse_list(const KV& kv) {
    std::vector<double> vals;
    std::string item;
    std::istringstream ss(kv.value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            vals.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("line " + std::to_string(kv.line) + ": bad list entry '" + item +
                              "'");
        }
    }
    if (vals.empty())
        throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.key +
                          "' expects a comma-separated list");
    return vals;
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    using detail::KV;
    RunConfig cfg;
    bool saw_gamma = false, saw_kappa = false, saw_g = false, saw_dcx = false;
    bool saw_alpha = false, saw_wb = false, saw_T = false;
    bool saw_eta_x = false, saw_eta_c = false;
    std::optional<int> n_max_explicit;
    double delta_xl_uev = 0.0;

    // energy-valued keys accept a _mev-suffixed variant
    auto energy = [&](const KV& kv, const std::string& base, double& out_uev, bool& seen) {
        if (kv.key == base) {
            out_uev = detail::parse_double(kv);
            seen = true;
            return true;
        }
        if (kv.key == base + "_mev") {
            out_uev = 1000.0 * detail::parse_double(kv);
            seen = true;
            return true;
        }
        return false;
    };

    double g_uev = 0, eta_x_uev = 0, eta_c_uev = 0, gamma_uev = 0, kappa_uev = 0, gp_uev = 0,
           dcx_uev = 0, wb_uev = 0;
    bool dummy = false;

    for (const auto& kv : detail::tokenize_config(text)) {
        if (kv.section == "bath") {
            if (kv.key == "alpha_p") {
                cfg.bath.alpha_p = detail::parse_double(kv);
                saw_alpha = true;
            } else if (energy(kv, "omega_b", wb_uev, saw_wb)) {
            } else if (kv.key == "temperature") {
                cfg.bath.temperature = detail::parse_double(kv);
                saw_T = true;
            } else if (kv.key == "alpha_convention") {
                if (kv.value == "direct")
                    cfg.alpha_convention = AlphaConvention::direct;
                else if (kv.value == "two_pi_squared")
                    cfg.alpha_convention = AlphaConvention::two_pi_squared;
                else
                    throw ConfigError("line " + std::to_string(kv.line) +
                                      ": alpha_convention must be direct|two_pi_squared");
            } else {
                throw ConfigError("line " + std::to_string(kv.line) + ": unknown [bath] key '" +
                                  kv.key + "'");
            }
        } else if (kv.section == "system") {
            if (energy(kv, "g", g_uev, saw_g)) {
            } else if (energy(kv, "eta_x", eta_x_uev, saw_eta_x)) {
            } else if (energy(kv, "eta_c", eta_c_uev, saw_eta_c)) {
            } else if (energy(kv, "gamma", gamma_uev, dummy)) {
                saw_gamma = true;
            } else if (energy(kv, "kappa", kappa_uev, dummy)) {
                saw_kappa = true;
            } else if (energy(kv, "gamma_prime", gp_uev, dummy)) {
            } else if (energy(kv, "delta_cx", dcx_uev, saw_dcx)) {
            } else if (energy(kv, "delta_xl", delta_xl_uev, dummy)) {
            } else if (kv.key == "n_max") {
                n_max_explicit = static_cast<int>(detail::parse_double(kv));
            } else if (kv.key == "explicit_polaron_shift") {
                cfg.system.explicit_polaron_shift = detail::parse_bool(kv);
            } else {
                throw ConfigError("line " + std::to_string(kv.line) + ": unknown [system] key '" +
                                  kv.key + "'");
            }
        } else if (kv.section == "run") {
            auto& r = cfg.run;
            if (kv.key == "variant") {
                cfg.variant = variant_from_string(kv.value);
            } else if (kv.key == "normalize") {
                r.normalize = detail::parse_bool(kv);
            } else if (kv.key == "half_span") {
                r.half_span_uev = detail::parse_double(kv);
            } else if (kv.key == "fine_halfwidth") {
                r.fine_halfwidth_uev = detail::parse_double(kv);
            } else if (kv.key == "fine_step") {
                r.fine_step_uev = detail::parse_double(kv);
            } else if (kv.key == "coarse_step") {
                r.coarse_step_uev = detail::parse_double(kv);
            } else if (kv.key == "grid_min") {
                r.grid_min_uev = detail::parse_double(kv);
            } else if (kv.key == "grid_max") {
                r.grid_max_uev = detail::parse_double(kv);
            } else if (kv.key == "grid_step") {
                r.grid_step_uev = detail::parse_double(kv);
            } else if (kv.key == "pumps") {
                r.pumps_uev = detail::parse_list(kv);
            } else if (kv.key == "channel") {
                if (kv.value != "i_x" && kv.value != "i_c")
                    throw ConfigError("line " + std::to_string(kv.line) +
                                      ": channel must be i_x|i_c");
                r.channel = kv.value;
            } else if (kv.key == "center") {
                r.center_uev = detail::parse_double(kv);
            } else if (kv.key == "ipl_window_lo") {
                r.ipl_window_lo_uev = detail::parse_double(kv);
            } else if (kv.key == "ipl_window_hi") {
                r.ipl_window_hi_uev = detail::parse_double(kv);
            } else if (kv.key == "n_max_list") {
                for (double v : detail::parse_list(kv)) r.n_max_list.push_back(int(v));
            } else if (kv.key == "rates_min") {
                r.rates_min_uev = detail::parse_double(kv);
            } else if (kv.key == "rates_max") {
                r.rates_max_uev = detail::parse_double(kv);
            } else if (kv.key == "rates_step") {
                r.rates_step_uev = detail::parse_double(kv);
            } else if (kv.key == "laser_detuning") {
                r.laser_detuning_uev = detail::parse_double(kv);
            } else {
                throw ConfigError("line " + std::to_string(kv.line) + ": unknown [run] key '" +
                                  kv.key + "'");
            }
        } else {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown section [" +
                              kv.section + "]");
        }
    }

    std::vector<std::string> missing;
    if (!saw_alpha) missing.push_back("[bath] alpha_p");
    if (!saw_wb) missing.push_back("[bath] omega_b");
    if (!saw_T) missing.push_back("[bath] temperature");
    if (!saw_g) missing.push_back("[system] g");
    if (!saw_gamma) missing.push_back("[system] gamma");
    if (!saw_kappa) missing.push_back("[system] kappa");
    if (!saw_dcx) missing.push_back("[system] delta_cx");
    if (!saw_eta_x && !saw_eta_c) missing.push_back("[system] eta_x or eta_c");
    if (!missing.empty()) {
        std::string msg = "missing required keys:";
        for (const auto& k : missing) msg += " " + k;
        throw ConfigError(msg);
    }
    if (eta_x_uev != 0.0 && eta_c_uev != 0.0)
        throw ConfigError("only one of eta_x, eta_c may be nonzero per run");

    if (cfg.alpha_convention == AlphaConvention::two_pi_squared)
        cfg.bath.alpha_p *= 4.0 * M_PI * M_PI;
    cfg.bath.omega_b = energy_to_angular(wb_uev);
    cfg.bath.validate();

    auto& s = cfg.system;
    s.g = energy_to_angular(g_uev);
    s.eta_x = energy_to_angular(eta_x_uev);
    s.eta_c = energy_to_angular(eta_c_uev);
    s.gamma = energy_to_angular(gamma_uev);
    s.kappa = energy_to_angular(kappa_uev);
    s.gamma_prime = energy_to_angular(gp_uev);
    s.drive_kind = (eta_c_uev != 0.0 || (saw_eta_c && !saw_eta_x)) ? DriveKind::cavity_driven
                                                                   : DriveKind::exciton_driven;
    // [system] delta_xl sets w_x - w_L directly; otherwise [run] laser_detuning gives w_L - w_x.
    s.delta_xL = delta_xl_uev != 0.0 ? energy_to_angular(delta_xl_uev)
                                     : -energy_to_angular(cfg.run.laser_detuning_uev);
    s.delta_cL = s.delta_xL + energy_to_angular(dcx_uev);
    s.n_max = n_max_explicit.value_or(s.drive_kind == DriveKind::exciton_driven ? 2 : 6);
    s.validate();
    return cfg;
}

inline std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    auto fmt = [](double v) {
        char buf[32];
        snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("alpha_p_ps2", fmt(bath.alpha_p));
    kv.emplace_back("omega_b_uev", fmt(angular_to_energy(bath.omega_b)));
    kv.emplace_back("temperature_K", fmt(bath.temperature));
    kv.emplace_back("g_uev", fmt(angular_to_energy(system.g)));
    kv.emplace_back("eta_x_uev", fmt(angular_to_energy(system.eta_x)));
    kv.emplace_back("eta_c_uev", fmt(angular_to_energy(system.eta_c)));
    kv.emplace_back("gamma_uev", fmt(angular_to_energy(system.gamma)));
    kv.emplace_back("kappa_uev", fmt(angular_to_energy(system.kappa)));
    kv.emplace_back("gamma_prime_uev", fmt(angular_to_energy(system.gamma_prime)));
    kv.emplace_back("delta_cx_uev", fmt(angular_to_energy(system.delta_cx())));
    kv.emplace_back("n_max", std::to_string(system.n_max));
    kv.emplace_back("drive", to_string(system.drive_kind));
    kv.emplace_back("variant", to_string(variant));
    kv.emplace_back("explicit_polaron_shift", system.explicit_polaron_shift ? "true" : "false");
    kv.emplace_back("normalize", run.normalize ? "true" : "false");
    return kv;
}

} // namespace qdpl
