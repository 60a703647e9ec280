#pragma once

#include <vector>

#include "qtrotor/crystal.hpp"

namespace qtr {

struct Inertia {
  double moment = 0.0;  // kg m^2
  double r0 = 0.0;      // m, sqrt(I / (N m))
};

// I = sum m |r_i - centroid|^2.
Inertia moment_of_inertia(const IonCrystal& crystal);

// Effective potential of the three-ion rotor versus its orientation theta
// about the centroid in the x-z plane, measured from +x toward +z (see
// constrained_energy). All other coordinates relax.
struct RotorPotential {
  std::vector<double> theta;  // rad, uniform over [0, 2 pi)
  std::vector<double> U;      // J, minimum subtracted
  double r0 = 0.0;
  double inertia = 0.0;
  double barrier = 0.0;
  double period = 0.0;  // pi/3
  // U(theta) = sum_k cos_coeffs[k] cos(6 k theta); k = 0 .. samples/2.
  std::vector<double> cos_coeffs;
  // Largest |sine coefficient|; zero for a reflection-symmetric potential.
  double max_sine_coeff = 0.0;
  IonCrystal crystal;  // unconstrained minimum the rotor was built from

  double value(double theta) const;
  double curvature(double theta) const;  // d^2U/dtheta^2
  // Angle of the lowest sample within the first period.
  double well_angle() const;
  // sqrt(U''(well) / I), rad/s.
  double well_frequency() const;
};

struct RotorOptions {
  // Samples per period pi/3.
  int samples_per_period = 256;
};

// Throws InvalidArgument outside the planar three-ion regime and
// ConvergenceError (naming the angle) if a constrained minimization fails.
RotorPotential rotor_potential(const TrapConfig& trap, const RotorOptions& options = {});

// Ions sorted counterclockwise in the x-z plane (angle atan2(z, x) about the
// centroid), starting from the one nearest angle 0.
std::vector<Vec3> counterclockwise_order(std::span<const Vec3> positions);

// Energy (J) of the minimum with the crystal orientation held at `theta`.
// The orientation is the angle that zeroes the mean tangential displacement
// of ion j from the ray at theta + 2 pi j / N, so `seed` must be in
// counterclockwise order. Updates `seed` to the solution (centroid frame).
double constrained_energy(const TrapConfig& trap, double theta, std::vector<Vec3>& seed);

}  // namespace qtr
