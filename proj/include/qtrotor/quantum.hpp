#pragma once

#include <utility>
#include <vector>

#include "qtrotor/crystal.hpp"
#include "qtrotor/rotor.hpp"

namespace qtr {

// Low-lying spectrum of the flux-threaded rotor
//   H = (hbar^2 / 2I) (-i d/dtheta - alpha)^2 + U(theta),  alpha = 3 Phi/phi0,
// on wavefunctions of period 2 pi/3.
struct TunnellingSolution {
  double flux_quanta = 0.0;
  std::vector<double> levels;  // J, ascending, relative to min U
  double splitting = 0.0;      // E1 - E0, J
  double nu = 0.0;             // splitting / h, Hz
  // Hop magnitude J of the two-orientation model, nu(Phi = 0) / 4, Hz.
  double J_amp = 0.0;
  int basis_size = 0;
  // Weight of the two lowest states on the outermost basis functions.
  double tail_weight = 0.0;
  double max_residual = 0.0;  // ||H v - E v|| / spectral radius
};

struct BandOptions {
  int basis_size = 65;
  int n_levels = 6;
  double tail_tolerance = 1e-8;
};

// Throws BasisNotConverged when the tail weight exceeds the tolerance and
// InvalidArgument for an even or too small basis.
TunnellingSolution band_levels(const RotorPotential& rotor, double flux_quanta,
                               const BandOptions& options = {});

std::vector<std::pair<double, double>> tunnelling_rate_vs_flux(const RotorPotential& rotor,
                                                               const std::vector<double>& flux,
                                                               const BandOptions& options = {});

// Parameters of the population model for the orientation-flip probability.
struct DynamicsModel {
  double p0 = 0.0;  // ground-band population
  double nu = 0.0;  // tunnelling frequency at zero flux, Hz
  double T2 = 0.0;  // s; +inf for no dephasing
  double v = 0.0;   // classical rotation rate, 1/s

  // Spin-independent measured values: p0 = 0.10, nu = 7.6 Hz, T2 = 0.3 s, v = 5.4 /s.
  static DynamicsModel experiment();
  void validate() const;
};

// nu(Phi) = nu0 |cos(pi Phi/phi0)|.
double tunnelling_frequency(double nu0, double flux_quanta);

// P(tau, Phi) = p0 (1 - exp(-(tau/T2)^2) cos(2 pi nu(Phi) tau)) / 2
//             + (1 - p0) (1 - exp(-v tau)) / 2.
double transition_probability(double flux_quanta, double tau, const DynamicsModel& model);

// Short-time flux envelope |cos(pi Phi/phi0)|^2 = [1 + cos(2 pi Phi/phi0)] / 2.
double golden_rule_envelope(double flux_quanta);

struct Coherence {
  double delta_nu = 0.0;  // Hz
  double T2 = 0.0;        // s, +inf when delta_nu = 0
};

// delta_nu = |slope| * rms; T2 = 1 / (pi delta_nu).
Coherence coherence_from_confinement_noise(double slope, double delta_confinement_rms);

struct RatePoint {
  double delta_hz = 0.0;
  double nu = 0.0;            // Hz at zero flux
  double barrier_hz = 0.0;    // barrier / h
  double ground_hz = 0.0;     // E0 / h above the potential minimum
  double well_hz = 0.0;       // well frequency / 2 pi
};

// Full crystal -> rotor -> band pipeline at omega_x = omega_z + 2 pi delta.
std::vector<RatePoint> rate_vs_confinement(const TrapConfig& base, const std::vector<double>& delta_hz,
                                           const RotorOptions& rotor_options = {},
                                           const BandOptions& band_options = {}, int jobs = 1);

}  // namespace qtr
