#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qtrotor/expsim.hpp"
#include "qtrotor/linalg.hpp"

namespace qtr {

struct FitResult {
  std::string model;  // "f", "g" or free text for generic fits
  std::vector<std::string> names;
  std::vector<double> values;
  // sqrt(diag(covariance)); +inf for directions the data do not constrain.
  std::vector<double> std_errors;
  Matrix covariance;
  double chi2 = 0.0;  // weighted residual sum of squares
  int dof = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
};

using ModelFunction = std::function<double(double x, const std::vector<double>& params)>;

struct NllsOptions {
  int max_iterations = 500;
  double rel_tolerance = 1e-10;
  double max_damping = 1e16;
};

// Damped Gauss-Newton (Levenberg-Marquardt) on sum w_i (y_i - f(x_i))^2
// with a forward-difference Jacobian. The first step is undamped.
FitResult weighted_nlls(const ModelFunction& model, std::vector<double> initial, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<double>& weights,
                        const NllsOptions& options = {});

// p0 (1 - exp(-(t/T2)^2) cos(2 pi nu t)) / 2 + (1 - p0) (1 - exp(-v t)) / 2.
double model_f(double t, double p0, double nu, double T2, double v);
// (a/2) cos(2 pi xi n + theta0) + h.
double model_g(double n, double a, double xi, double theta0, double h);

// Binomial weights 1/sigma^2; sigma = 3/shots where p is 0 or 1.
std::vector<double> binomial_weights(const ShotSeries& series);

// Multi-start over nu in 0.5..30 Hz (0.5 Hz steps). Parameters p0, nu, T2, v.
FitResult fit_time_scan(const ShotSeries& series);
// Multi-start over xi with linear initialisation of amplitude, phase and
// offset. Parameters a, xi, theta0, h.
FitResult fit_flux_scan(const ShotSeries& series);

}  // namespace qtr
