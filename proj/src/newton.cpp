#include "qtrotor/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qtr {

namespace {

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& d) {
  std::vector<double> y(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * d[i];
  return y;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

NewtonResult minimize_newton(const Objective& objective, std::vector<double> x0,
                             const NewtonOptions& options) {
  NewtonResult r;
  r.x = std::move(x0);
  r.value = objective.value(r.x);
  if (!std::isfinite(r.value)) {
    r.gradient_norm = std::numeric_limits<double>::infinity();
    return r;
  }

  for (int it = 0; it < options.max_iterations; ++it) {
    r.iterations = it;
    const auto g = objective.gradient(r.x);
    r.gradient_norm = norm(g);
    const auto eig = jacobi_eigen(objective.hessian(r.x));
    const double scale = std::max(max_abs(eig.values), 1e-300);
    r.min_curvature = eig.values.front();
    const bool indefinite = eig.values.front() < -options.null_tolerance * scale;

    if (r.gradient_norm < options.gradient_tolerance) {
      if (!indefinite || !options.escape_saddles) {
        r.converged = true;
        return r;
      }
      // Stationary but not a minimum: step along the most negative
      // curvature direction until the energy drops.
      const auto down = eig.vectors.column(0);
      bool moved = false;
      for (double step = 0.1; step > 1e-8; step *= 0.5) {
        for (double sign : {1.0, -1.0}) {
          auto trial = axpy(r.x, sign * step, down);
          const double v = objective.value(trial);
          if (v < r.value) {
            r.x = std::move(trial);
            r.value = v;
            moved = true;
            break;
          }
        }
        if (moved) break;
      }
      if (!moved) {
        r.converged = true;
        return r;
      }
      continue;
    }

    // Newton step in the eigenbasis. On an indefinite Hessian the
    // curvatures are replaced by their magnitudes, which turns the step into
    // a curvature-scaled gradient descent that moves away from saddles.
    std::vector<double> step(g.size(), 0.0);
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
      const double lambda = std::abs(eig.values[k]);
      if (lambda <= options.null_tolerance * scale) {
        if (!indefinite) continue;
        // Flat direction on the way down: plain gradient component.
        const auto v = eig.vectors.column(k);
        const double c = -dot(v, g) / scale;
        for (std::size_t i = 0; i < step.size(); ++i) step[i] += c * v[i];
        continue;
      }
      const auto v = eig.vectors.column(k);
      const double c = -dot(v, g) / lambda;
      for (std::size_t i = 0; i < step.size(); ++i) step[i] += c * v[i];
    }

    const double slope = dot(g, step);
    const double step_norm = norm(step);
    // Inside the quadratic basin the energy decrease is below rounding of
    // the energy itself, so take the Newton step as is.
    if (!indefinite && step_norm < 1e-6) {
      r.x = axpy(r.x, 1.0, step);
      r.value = objective.value(r.x);
      continue;
    }

    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-14) {
      auto trial = axpy(r.x, alpha, step);
      const double v = objective.value(trial);
      if (std::isfinite(v) && v <= r.value + 1e-4 * alpha * slope) {
        r.x = std::move(trial);
        r.value = v;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No representable decrease along the step; accept a tiny Newton move
      // only if it does not increase the gradient.
      auto trial = axpy(r.x, 1.0, step);
      const auto gt = objective.gradient(trial);
      if (std::isfinite(objective.value(trial)) && norm(gt) < r.gradient_norm) {
        r.x = std::move(trial);
        r.value = objective.value(r.x);
      } else {
        return r;
      }
    }
  }
  r.gradient_norm = norm(objective.gradient(r.x));
  r.converged = r.gradient_norm < options.gradient_tolerance;
  return r;
}

}  // namespace qtr
