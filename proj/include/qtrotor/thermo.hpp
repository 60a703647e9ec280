#pragma once

#include <vector>

namespace qtr {

struct ThermalState {
  double omega = 0.0;        // rad/s
  double temperature = 0.0;  // K
  double nbar = 0.0;
  double ground_population = 0.0;

  static ThermalState from_temperature(double omega, double temperature);
  static ThermalState from_nbar(double omega, double nbar);
};

// Bose-Einstein occupation 1 / (exp(hbar w / kB T) - 1).
double nbar_from_temperature(double omega, double temperature);
double temperature_from_nbar(double omega, double nbar);

// Largest temperature with ground-state population 1 / (1 + nbar) >= p0_min.
double ground_state_threshold(double omega, double p0_min);

struct RampSample {
  double t = 0.0;      // s
  double omega = 0.0;  // rad/s
};

struct RampPoint {
  double t = 0.0;
  double omega = 0.0;
  double nbar = 0.0;
  double temperature = 0.0;
  // (d omega / dt) / omega^2 by central differences (one-sided at the ends).
  double adiabaticity = 0.0;
  bool diabatic = false;
};

struct RampResult {
  std::vector<RampPoint> points;
  bool any_diabatic = false;
};

inline constexpr double kAdiabaticityLimit = 0.1;

// Entropy-conserving ramp: nbar stays at its initial value except for
// `heating_quanta` added linearly in time over the schedule.
RampResult adiabatic_ramp(const std::vector<RampSample>& schedule, double T0, double heating_quanta = 0.0);

// omega(t) = w0 (w1/w0)^(t/duration), sampled at `samples` points.
std::vector<RampSample> exponential_ramp(double omega_start, double omega_end, double duration, int samples);

// Mean phonon number from red/blue sideband excitation, r/(1 - r).
double nbar_from_sidebands(double red_excitation, double blue_excitation);

}  // namespace qtr
