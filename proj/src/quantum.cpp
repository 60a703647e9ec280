#include "qtrotor/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/linalg.hpp"
#include "qtrotor/parallel.hpp"

namespace qtr {

namespace {

struct Diagonalized {
  SymmetricEigen eig;
  Matrix h;
};

// Plane waves exp(i 3 n theta), n = -M .. M. U has period pi/3, so its
// harmonic cos(6 k theta) couples n and n +- 2k. U is even, which keeps the
// matrix real symmetric.
Diagonalized diagonalize(const RotorPotential& rotor, double alpha, int basis) {
  const int half = basis / 2;
  const double kinetic = constants::hbar * constants::hbar / (2.0 * rotor.inertia);
  Matrix h(basis, basis);
  const int kmax = static_cast<int>(rotor.cos_coeffs.size()) - 1;
  for (int a = 0; a < basis; ++a) {
    const int na = a - half;
    const double q = 3.0 * na - alpha;
    h(a, a) = kinetic * q * q + rotor.cos_coeffs[0];
    for (int b = 0; b < basis; ++b) {
      const int d = std::abs(na - (b - half));
      if (d == 0 || d % 2 != 0) continue;
      const int k = d / 2;
      if (k > kmax) continue;
      // cos(6k theta) = (e^{i6k theta} + e^{-i6k theta}) / 2
      h(a, b) = 0.5 * rotor.cos_coeffs[k];
    }
  }
  return {jacobi_eigen(h), h};
}

}  // namespace

TunnellingSolution band_levels(const RotorPotential& rotor, double flux_quanta, const BandOptions& options) {
  if (options.basis_size < 33 || options.basis_size % 2 == 0)
    throw InvalidArgument("band_levels: basis_size must be odd and >= 33");
  if (!(rotor.inertia > 0.0)) throw InvalidArgument("band_levels: rotor inertia must be positive");
  const int basis = options.basis_size;
  const auto d = diagonalize(rotor, 3.0 * flux_quanta, basis);

  TunnellingSolution s;
  s.flux_quanta = flux_quanta;
  s.basis_size = basis;
  const int nl = std::min(options.n_levels, basis);
  s.levels.assign(d.eig.values.begin(), d.eig.values.begin() + nl);
  s.splitting = std::max(0.0, d.eig.values[1] - d.eig.values[0]);
  s.nu = s.splitting / constants::planck;

  double radius = 0.0;
  for (double v : d.eig.values) radius = std::max(radius, std::abs(v));
  for (int k = 0; k < basis; ++k) {
    const auto v = d.eig.vectors.column(k);
    auto hv = d.h * std::span<const double>(v);
    for (int i = 0; i < basis; ++i) hv[i] -= d.eig.values[k] * v[i];
    s.max_residual = std::max(s.max_residual, norm(hv) / radius);
  }
  for (int k = 0; k < 2; ++k)
    for (int i : {0, 1, basis - 2, basis - 1}) s.tail_weight += std::pow(d.eig.vectors(i, k), 2);
  if (s.tail_weight > options.tail_tolerance)
    throw BasisNotConverged("band_levels: plane-wave basis not converged (tail weight " +
                                std::to_string(s.tail_weight) + "); increase basis_size",
                            s.tail_weight);

  if (flux_quanta == 0.0) {
    s.J_amp = s.nu / 4.0;
  } else {
    const auto d0 = diagonalize(rotor, 0.0, basis);
    s.J_amp = (d0.eig.values[1] - d0.eig.values[0]) / constants::planck / 4.0;
  }
  return s;
}

std::vector<std::pair<double, double>> tunnelling_rate_vs_flux(const RotorPotential& rotor,
                                                               const std::vector<double>& flux,
                                                               const BandOptions& options) {
  std::vector<std::pair<double, double>> out;
  out.reserve(flux.size());
  for (double f : flux) out.emplace_back(f, band_levels(rotor, f, options).nu);
  return out;
}

DynamicsModel DynamicsModel::experiment() { return {0.10, 7.6, 0.3, 5.4}; }

void DynamicsModel::validate() const {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw InvalidArgument("p0 must lie in [0, 1]");
  if (!(nu >= 0.0)) throw InvalidArgument("nu must be nonnegative");
  if (!(v >= 0.0)) throw InvalidArgument("v must be nonnegative");
  if (!(T2 > 0.0)) throw InvalidArgument("T2 must be positive");
}

double tunnelling_frequency(double nu0, double flux_quanta) {
  return nu0 * std::abs(std::cos(constants::pi * flux_quanta));
}

double transition_probability(double flux_quanta, double tau, const DynamicsModel& model) {
  model.validate();
  if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
  const double nu = tunnelling_frequency(model.nu, flux_quanta);
  const double x = tau / model.T2;
  const double coherent = 0.5 * (1.0 - std::exp(-x * x) * std::cos(constants::two_pi * nu * tau));
  const double classical = 0.5 * (1.0 - std::exp(-model.v * tau));
  return std::clamp(model.p0 * coherent + (1.0 - model.p0) * classical, 0.0, 1.0);
}

double golden_rule_envelope(double flux_quanta) {
  return 0.5 * (1.0 + std::cos(constants::two_pi * flux_quanta));
}

Coherence coherence_from_confinement_noise(double slope, double rms) {
  if (rms < 0.0) throw InvalidArgument("confinement rms must be nonnegative");
  Coherence c;
  c.delta_nu = std::abs(slope) * rms;
  c.T2 = c.delta_nu > 0.0 ? 1.0 / (constants::pi * c.delta_nu) : std::numeric_limits<double>::infinity();
  return c;
}

std::vector<RatePoint> rate_vs_confinement(const TrapConfig& base, const std::vector<double>& delta_hz,
                                           const RotorOptions& rotor_options, const BandOptions& band_options,
                                           int jobs) {
  return parallel_map(
      delta_hz,
      [&](double delta) {
        const auto trap = TrapConfig{base.omega_z + angular(delta), base.omega_y, base.omega_z,
                                     base.ion_mass, base.ion_charge, base.n_ions};
        const auto rotor = rotor_potential(trap, rotor_options);
        const auto sol = band_levels(rotor, 0.0, band_options);
        RatePoint p;
        p.delta_hz = delta;
        p.nu = sol.nu;
        p.barrier_hz = rotor.barrier / constants::planck;
        p.ground_hz = sol.levels.front() / constants::planck;
        p.well_hz = hertz(rotor.well_frequency());
        return p;
      },
      jobs);
}

}  // namespace qtr
