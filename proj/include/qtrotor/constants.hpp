#pragma once

#include <numbers>

// CODATA 2018 exact/recommended values, SI units.
namespace qtr::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double hbar = planck / two_pi;             // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;           // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66054e-27;     // kg, as used for 40Ca+
inline constexpr double coulomb_constant = 1.0 / (4.0 * pi * vacuum_permittivity);

// h/e, the flux period of the tunnelling rate.
inline constexpr double flux_quantum = planck / elementary_charge;  // Wb

inline constexpr double gauss = 1e-4;  // T

}  // namespace qtr::constants

namespace qtr {

// Angular frequency from a frequency in Hz.
constexpr double angular(double hz) { return constants::two_pi * hz; }
// Frequency in Hz from an angular frequency.
constexpr double hertz(double omega) { return omega / constants::two_pi; }

}  // namespace qtr
