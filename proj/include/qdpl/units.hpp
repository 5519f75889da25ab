// units.hpp — internal unit system: angular frequency in rad/ps, time in ps,
// energies configured in ueV (or meV), temperature in K.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qdpl {

using cd = std::complex<double>;

namespace constants {
inline constexpr double hbar = 658.2119569; // ueV * ps
inline constexpr double k_B = 86.17333;     // ueV / K
} // namespace constants

inline double energy_to_angular(double e_uev) { return e_uev / constants::hbar; }

inline double angular_to_energy(double omega_rad_per_ps) { return omega_rad_per_ps * constants::hbar; }

// Bose-Einstein occupation at angular frequency omega (rad/ps), bath temperature T (K).
// Returns 0 at T = 0.
inline double thermal_occupation(double omega, double temperature) {
    if (omega <= 0.0) throw std::domain_error("thermal_occupation: omega must be positive");
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * temperature));
}

// coth(hbar*omega / 2 k_B T); the T=0 limit is 1.
inline double thermal_coth(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    const double x = constants::hbar * omega / (2.0 * constants::k_B * temperature);
    return 1.0 / std::tanh(x);
}

} // namespace qdpl
