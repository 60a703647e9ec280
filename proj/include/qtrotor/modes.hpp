#pragma once

#include <string>
#include <vector>

#include "qtrotor/crystal.hpp"
#include "qtrotor/linalg.hpp"

namespace qtr {

enum class ModeLabel { rotational, zigzag, com_x, com_y, com_z, other };

std::string to_string(ModeLabel label);

struct ModeSpectrum {
  // Ascending angular frequencies in rad/s. An unstable direction is
  // reported as -sqrt(|lambda|).
  std::vector<double> frequencies;
  // Column k is the unit displacement vector of mode k (3N components,
  // ion-major).
  Matrix vectors;
  // Eigenvalues of the mass-scaled Hessian, (rad/s)^2.
  std::vector<double> eigenvalues;
  std::vector<ModeLabel> labels;
  bool stable = true;
  // Largest ||H v - lambda v|| / ||H|| over all modes.
  double max_residual = 0.0;

  // Index of the mode carrying `label`, or -1.
  int index_of(ModeLabel label) const;
  double frequency_of(ModeLabel label) const;
};

// Analytic Hessian of potential_energy at the crystal positions, J/m^2.
Matrix hessian(const IonCrystal& crystal);

// Eigen-decomposition of the mass-scaled Hessian followed by classify_modes.
ModeSpectrum normal_modes(const IonCrystal& crystal);

// Overlap-based labelling: COM >= 0.99, rotational and zigzag >= 0.9.
void classify_modes(ModeSpectrum& spectrum, const IonCrystal& crystal);

// Unit displacement patterns used by classify_modes.
std::vector<double> com_pattern(int n_ions, int axis);
std::vector<double> rotation_pattern(const IonCrystal& crystal);
std::vector<double> zigzag_pattern(const IonCrystal& crystal);

struct SweepRow {
  double omega_x = 0.0;
  IonCrystal crystal;
  ModeSpectrum spectrum;
  // Angular frequency of each tracked mode, indexed like SweepTable::names.
  std::vector<double> tracked;
};

struct SweepTable {
  std::vector<std::string> names;
  std::vector<SweepRow> rows;
};

struct SweepOptions {
  // A tracked frequency changing by more than this fraction between
  // neighbours triggers a midpoint insertion.
  double refine_threshold = 0.2;
  int max_refinements = 6;
  int jobs = 1;
};

// Equilibria and modes for omega_x over [omega_x_lo, omega_x_hi] in `steps`
// points (inclusive). Modes are followed across points by maximal
// eigenvector overlap.
SweepTable sweep_confinement(const TrapConfig& base, double omega_x_lo, double omega_x_hi,
                             int steps, const SweepOptions& options = {});

// omega_x at which the chain's zigzag mode softens to zero, found by
// bisection on the smallest Hessian eigenvalue of the linear chain.
double zigzag_critical_omega_x(const TrapConfig& base);

}  // namespace qtr
