#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qtrotor/linalg.hpp"

namespace qtr {

using Vec3 = std::array<double, 3>;

// Secular frequencies of the pseudopotential and the ion species.
struct TrapConfig {
  double omega_x = 0.0;  // rad/s
  double omega_y = 0.0;
  double omega_z = 0.0;
  double ion_mass = 0.0;    // kg
  double ion_charge = 0.0;  // C
  int n_ions = 0;

  // 40Ca+ triangle at intermediate confinement,
  // {wx, wy, wz} = 2pi x {1.523, 1.961, 1.119} MHz.
  static TrapConfig experiment();
  // Same trap with omega_x = omega_z + 2pi * delta_hz.
  static TrapConfig tunnelling(double delta_hz);

  // Throws InvalidArgument unless every field is strictly positive.
  void validate() const;

  // l = (q^2 / (4 pi eps0 m wz^2))^(1/3).
  double length_unit() const;
  // m wz^2 l^2.
  double energy_unit() const;
  // m wz^2 l.
  double force_unit() const;
  // (wx/wz)^2, (wy/wz)^2, 1.
  Vec3 stiffness() const;
};

// Equilibrium configuration of the ions.
struct IonCrystal {
  std::vector<Vec3> positions;  // m
  double energy = 0.0;          // J
  TrapConfig trap;
  bool converged = false;
  double gradient_norm = 0.0;  // J/m
  // The minimum belongs to a continuous family (zero-frequency rotation).
  bool soft_rotation = false;
  int iterations = 0;
};

// Harmonic plus Coulomb energy in joules. Throws SingularConfiguration when
// two ions coincide.
double potential_energy(std::span<const Vec3> positions, const TrapConfig& trap);
// dE/dr per ion in J/m.
std::vector<Vec3> potential_gradient(std::span<const Vec3> positions, const TrapConfig& trap);

// Minimize from `seed` when given, otherwise return the lowest of all
// multi-start minima. Throws ConvergenceError if the minimizer stalls.
IonCrystal find_equilibrium(const TrapConfig& trap, std::optional<std::vector<Vec3>> seed = {});

// Distinct local minima, modulo ion permutation. Ordered by energy, ties
// broken deterministically.
std::vector<IonCrystal> enumerate_minima(const TrapConfig& trap);

// Stationary point reached from `seed` without escaping saddles (used for
// the symmetric chain beyond its stability limit).
IonCrystal find_stationary(const TrapConfig& trap, const std::vector<Vec3>& seed);

// Rigid rotation of all positions by `angle` about the y axis (x toward z).
std::vector<Vec3> rotate_about_y(std::span<const Vec3> positions, double angle);

Vec3 centroid(std::span<const Vec3> positions);

// True when both crystals describe the same configuration up to ion
// permutation, at relative tolerance `rel_tol` in units of the trap length.
bool same_configuration(const IonCrystal& a, const IonCrystal& b, double rel_tol = 1e-6);

namespace reduced {

// Dimensionless energy 1/2 sum k_a u_a^2 + sum 1/r_ij over a flat 3N
// coordinate vector. +inf when two ions coincide.
double energy(std::span<const double> u, const Vec3& stiffness);
std::vector<double> gradient(std::span<const double> u, const Vec3& stiffness);
Matrix hessian(std::span<const double> u, const Vec3& stiffness);

}  // namespace reduced

}  // namespace qtr
