#pragma once

#include "qtrotor/crystal.hpp"

namespace qtr {

// Coil fields threading the rotor loop.
struct FieldSetup {
  Vec3 fixed_field{0.0, 0.0, 0.0};       // T
  Vec3 tunable_direction{0.0, 0.0, 0.0};  // unit vector
  double tunable_magnitude = 0.0;         // T
  Vec3 rotor_normal{0.0, 1.0, 0.0};       // unit vector
  double loop_area = 0.0;                 // m^2
  // Tilt of the rotor normal about the x axis, rad.
  double misalignment = 0.0;

  // 3.4 G fixed coil along {1/2, -1/2, 1/sqrt2}, tunable coil along
  // {1/2, -1/2, -1/sqrt2} switched off, 37 um^2 loop. The normal is
  // oriented along the coils' common y component, {0, -1, 0}.
  static FieldSetup experiment();
  void validate() const;

  Vec3 tunable_field() const;
  Vec3 effective_normal() const;
};

struct Flux {
  double phi = 0.0;          // Wb
  double flux_quanta = 0.0;  // Phi / phi0
  double b_perp = 0.0;       // T
};

Flux flux(const FieldSetup& setup);

// Change of tunable magnitude (T) that adds one flux quantum.
double tunable_field_per_quantum(const FieldSetup& setup);

struct LorentzInputs {
  double U0 = 0.0;            // barrier top, J
  double E = 0.0;             // ground level, J
  double M = 0.0;             // rotor mass, kg
  double B = 0.0;             // T
  double J_rate = 0.0;        // tunnelling rate, Hz
  double r0 = 0.0;            // m
  double ion_mass = 0.0;      // kg
  double omega_radial = 0.0;  // rad/s, stiffness of the loop radius

  // U0 = h 270 Hz, E = h 90 Hz, M = 3 40 1.67e-27 kg, B = 5 G,
  // J = 7.4 Hz, r0 = 3.42 um, omega_radial = sqrt3 * 2 pi 1.119 MHz.
  static LorentzInputs experiment();
};

struct LorentzEstimates {
  double v_max = 0.0;  // m/s
  double F_max = 0.0;  // N
  double v_mean = 0.0;
  double F_mean = 0.0;
  // F / (m_ion omega_radial^2) for the maximal and mean force, m.
  double radius_shift_max = 0.0;
  double radius_shift_mean = 0.0;
};

LorentzEstimates lorentz_estimates(const LorentzInputs& in);

}  // namespace qtr
