#include "qtrotor/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"

namespace qtr {

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw InvalidArgument("fit result has no parameter '" + name + "'");
}

double FitResult::error(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return std_errors[i];
  throw InvalidArgument("fit result has no parameter '" + name + "'");
}

namespace {

double chi2_of(const ModelFunction& model, const std::vector<double>& p, const std::vector<double>& x,
               const std::vector<double>& y, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - model(x[i], p);
    s += w[i] * r * r;
  }
  return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
}

Matrix jacobian(const ModelFunction& model, const std::vector<double>& p, const std::vector<double>& x) {
  Matrix J(x.size(), p.size());
  std::vector<double> f0(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f0[i] = model(x[i], p);
  for (std::size_t j = 0; j < p.size(); ++j) {
    auto q = p;
    const double h = 1.4901161193847656e-08 * std::max(std::abs(p[j]), 1.0);
    q[j] += h;
    const double step = q[j] - p[j];
    for (std::size_t i = 0; i < x.size(); ++i) J(i, j) = (model(x[i], q) - f0[i]) / step;
  }
  return J;
}

}  // namespace

FitResult weighted_nlls(const ModelFunction& model, std::vector<double> p, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<double>& w, const NllsOptions& options) {
  const std::size_t n = x.size();
  const std::size_t m = p.size();
  if (y.size() != n || w.size() != n) throw InvalidArgument("weighted_nlls: data length mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || !(w[i] >= 0.0) || !std::isfinite(w[i]))
      throw InvalidArgument("weighted_nlls: non-finite data or negative weight");

  FitResult fr;
  fr.dof = static_cast<int>(n) - static_cast<int>(m);
  double chi2 = chi2_of(model, p, x, y, w);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale += w[i] * y[i] * y[i];
  const double floor = 1e-28 * std::max(scale, 1e-300);

  double lambda = 0.0;
  bool done = false;
  int it = 0;
  for (; it < options.max_iterations && !done; ++it) {
    if (chi2 <= floor) {
      fr.converged = true;
      break;
    }
    const Matrix J = jacobian(model, p, x);
    Matrix A(m, m);
    std::vector<double> g(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - model(x[i], p);
      for (std::size_t a = 0; a < m; ++a) {
        g[a] += w[i] * J(i, a) * r;
        for (std::size_t b = 0; b < m; ++b) A(a, b) += w[i] * J(i, a) * J(i, b);
      }
    }

    // Inner loop: raise damping until the step lowers chi2.
    for (;;) {
      Matrix D = A;
      for (std::size_t a = 0; a < m; ++a) D(a, a) += lambda * (A(a, a) > 0.0 ? A(a, a) : 1.0);
      const auto L = cholesky(D);
      if (!L) {
        lambda = lambda == 0.0 ? 1e-3 : lambda * 10.0;
        if (lambda > options.max_damping) {
          fr.warnings.push_back("damping exceeded bound with singular normal equations");
          done = true;
          break;
        }
        continue;
      }
      const auto delta = cholesky_solve(*L, g);
      auto trial = p;
      for (std::size_t a = 0; a < m; ++a) trial[a] += delta[a];
      const double c = chi2_of(model, trial, x, y, w);
      if (c < chi2) {
        const double rel = (chi2 - c) / chi2;
        p = std::move(trial);
        chi2 = c;
        lambda = lambda < 1e-9 ? 0.0 : lambda * 0.1;
        if (rel < options.rel_tolerance) {
          fr.converged = true;
          done = true;
        }
        break;
      }
      lambda = lambda == 0.0 ? 1e-3 : lambda * 10.0;
      if (lambda > options.max_damping) {
        // No representable improvement in any damped direction: stationary.
        fr.converged = true;
        done = true;
        break;
      }
    }
  }
  fr.iterations = it;
  fr.values = p;
  fr.chi2 = chi2;

  const Matrix J = jacobian(model, p, x);
  Matrix A(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) A(a, b) += w[i] * J(i, a) * J(i, b);
  const auto pinv = symmetric_pseudo_inverse(A);
  fr.covariance = pinv.inverse;
  fr.std_errors.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    double along_null = 0.0;
    for (std::size_t c = 0; c < pinv.null_space.cols(); ++c) along_null += std::abs(pinv.null_space(a, c));
    fr.std_errors[a] =
        along_null > 1e-8 ? std::numeric_limits<double>::infinity() : std::sqrt(std::max(0.0, fr.covariance(a, a)));
  }
  if (std::any_of(fr.std_errors.begin(), fr.std_errors.end(), [](double e) { return std::isinf(e); }))
    fr.warnings.push_back("some parameters are not constrained by the data (infinite standard error)");
  if (!fr.converged) fr.warnings.push_back("iteration limit reached");
  return fr;
}

double model_f(double t, double p0, double nu, double T2, double v) {
  const double x = t / T2;
  return p0 * 0.5 * (1.0 - std::exp(-x * x) * std::cos(constants::two_pi * nu * t)) +
         (1.0 - p0) * 0.5 * (1.0 - std::exp(-v * t));
}

double model_g(double n, double a, double xi, double theta0, double h) {
  return 0.5 * a * std::cos(constants::two_pi * xi * n + theta0) + h;
}

std::vector<double> binomial_weights(const ShotSeries& s) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double shots = static_cast<double>(s.shots[i]);
    const double p = static_cast<double>(s.successes[i]) / shots;
    const double sigma = (s.successes[i] == 0 || s.successes[i] == s.shots[i]) ? 3.0 / shots
                                                                                 : std::sqrt(p * (1.0 - p) / shots);
    w[i] = 1.0 / (sigma * sigma);
  }
  return w;
}

namespace {

bool better(const FitResult& a, const FitResult& b) {
  if (!std::isfinite(b.chi2)) return true;
  return a.chi2 < b.chi2 * (1.0 - 1e-12);
}

// Flip the sign convention of parameter k (value, covariance row/column).
void negate_parameter(FitResult& fit, std::size_t k) {
  fit.values[k] = -fit.values[k];
  const std::size_t m = fit.values.size();
  if (fit.covariance.rows() != m) return;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == k) continue;
    fit.covariance(k, j) = -fit.covariance(k, j);
    fit.covariance(j, k) = -fit.covariance(j, k);
  }
}

// Common step d when every axis value is an integer multiple of d and the
// sorted values are evenly spaced; 0 otherwise.
double grid_step(std::vector<double> t) {
  std::sort(t.begin(), t.end());
  if (t.size() < 2) return 0.0;
  const double d = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(d > 0.0)) return 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double k = t[i] / d;
    if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::abs(k))) return 0.0;
    if (i > 0 && std::abs(t[i] - t[i - 1] - d) > 1e-9 * d) return 0.0;
  }
  return d;
}

}  // namespace

FitResult fit_time_scan(const ShotSeries& series) {
  series.validate();
  if (series.size() < 8) throw InvalidArgument("fit_time_scan: need at least 8 points");
  const auto w = binomial_weights(series);
  const double span = *std::max_element(series.axis.begin(), series.axis.end()) -
                      *std::min_element(series.axis.begin(), series.axis.end());
  if (!(span > 0.0)) throw InvalidArgument("fit_time_scan: axis has zero span");

  const ModelFunction f = [](double t, const std::vector<double>& p) { return model_f(t, p[0], p[1], p[2], p[3]); };
  FitResult best;
  best.chi2 = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 60; ++k) {
    const double nu = 0.5 * k;
    auto r = weighted_nlls(f, {0.2, nu, span, 2.0 / span}, series.axis, series.probabilities, w);
    if (better(r, best)) best = std::move(r);
  }
  best.model = "f";
  best.names = {"p0", "nu", "T2", "v"};
  if (best.values[2] < 0.0) negate_parameter(best, 2);
  // On a grid t_i = k_i d the curve cannot tell nu from +-nu + m/d; report
  // the alias in [0, 1/(2d)].
  double nu = best.values[1];
  if (const double d = grid_step(series.axis); d > 0.0) {
    const double fs = 1.0 / d;
    nu = std::remainder(nu, fs);
  }
  if (nu < 0.0) {
    nu = -nu;
    negate_parameter(best, 1);
  }
  best.values[1] = nu;
  return best;
}

FitResult fit_flux_scan(const ShotSeries& series) {
  series.validate();
  if (series.size() < 8) throw InvalidArgument("fit_flux_scan: need at least 8 points");
  const auto w = binomial_weights(series);
  const auto& n = series.axis;
  const auto& y = series.probabilities;

  const ModelFunction g = [](double x, const std::vector<double>& p) { return model_g(x, p[0], p[1], p[2], p[3]); };
  FitResult best;
  best.chi2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 30; ++k) {
    const double xi = 0.5 + 0.05 * k;
    // Weighted linear fit of A cos + B sin + h at fixed xi.
    Matrix A(3, 3);
    std::vector<double> b(3, 0.0);
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double phase = constants::two_pi * xi * n[i];
      const double basis[3] = {std::cos(phase), std::sin(phase), 1.0};
      for (int r = 0; r < 3; ++r) {
        b[r] += w[i] * basis[r] * y[i];
        for (int c = 0; c < 3; ++c) A(r, c) += w[i] * basis[r] * basis[c];
      }
    }
    const auto L = cholesky(A);
    if (!L) continue;
    const auto c = cholesky_solve(*L, b);
    const double amp = 2.0 * std::hypot(c[0], c[1]);
    const double theta0 = std::atan2(-c[1], c[0]);
    auto r = weighted_nlls(g, {amp, xi, theta0, c[2]}, n, y, w);
    if (better(r, best)) best = std::move(r);
  }
  if (!std::isfinite(best.chi2)) throw NumericalError("fit_flux_scan: no start produced a finite fit");
  best.model = "g";
  best.names = {"a", "xi", "theta0", "h"};
  if (best.values[0] < 0.0) {
    best.values[0] = -best.values[0];
    best.values[2] += constants::pi;
  }
  best.values[2] = std::remainder(best.values[2], constants::two_pi);
  if (best.values[1] < 0.0) {
    best.values[1] = -best.values[1];
    best.values[2] = -best.values[2];
  }
  if (0.5 * best.values[0] + best.values[3] > 1.0)
    best.warnings.push_back("fitted a/2 + h exceeds 1; model curve is clipped");
  return best;
}

}  // namespace qtr
