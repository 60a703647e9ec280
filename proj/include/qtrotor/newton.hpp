#pragma once

#include <functional>
#include <vector>

#include "qtrotor/linalg.hpp"

namespace qtr {

// Smooth objective with analytic first and second derivatives. `value` may
// return +inf for inadmissible points (e.g. coincident ions); the line
// search then backs off.
struct Objective {
  std::function<double(const std::vector<double>&)> value;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
  std::function<Matrix(const std::vector<double>&)> hessian;
};

struct NewtonOptions {
  double gradient_tolerance = 1e-12;
  int max_iterations = 2000;
  // Eigenvalues with |lambda| below this (relative to the largest) are
  // treated as flat directions and left out of the Newton step.
  double null_tolerance = 1e-10;
  // Push off stationary points that have a negative curvature direction.
  bool escape_saddles = true;
};

struct NewtonResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // Smallest Hessian eigenvalue at the returned point.
  double min_curvature = 0.0;
};

// Damped Newton with backtracking line search. Where the Hessian has a
// negative eigenvalue the step falls back to descent with |curvature|
// scaling.
NewtonResult minimize_newton(const Objective& objective, std::vector<double> x0,
                             const NewtonOptions& options = {});

}  // namespace qtr
