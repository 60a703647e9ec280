#include "qtrotor/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/newton.hpp"

namespace qtr {

TrapConfig TrapConfig::experiment() {
  TrapConfig t;
  t.omega_x = angular(1.523e6);
  t.omega_y = angular(1.961e6);
  t.omega_z = angular(1.119e6);
  t.ion_mass = 40.0 * constants::atomic_mass_unit;
  t.ion_charge = constants::elementary_charge;
  t.n_ions = 3;
  return t;
}

TrapConfig TrapConfig::tunnelling(double delta_hz) {
  TrapConfig t = experiment();
  t.omega_x = t.omega_z + angular(delta_hz);
  return t;
}

void TrapConfig::validate() const {
  if (!(omega_x > 0.0 && omega_y > 0.0 && omega_z > 0.0))
    throw InvalidArgument("trap frequencies must be strictly positive");
  if (!(ion_mass > 0.0)) throw InvalidArgument("ion mass must be strictly positive");
  if (!(ion_charge > 0.0)) throw InvalidArgument("ion charge must be strictly positive");
  if (n_ions < 1) throw InvalidArgument("n_ions must be at least 1");
}

double TrapConfig::length_unit() const {
  return std::cbrt(constants::coulomb_constant * ion_charge * ion_charge /
                   (ion_mass * omega_z * omega_z));
}

double TrapConfig::energy_unit() const {
  const double l = length_unit();
  return ion_mass * omega_z * omega_z * l * l;
}

double TrapConfig::force_unit() const { return ion_mass * omega_z * omega_z * length_unit(); }

Vec3 TrapConfig::stiffness() const {
  return {(omega_x / omega_z) * (omega_x / omega_z), (omega_y / omega_z) * (omega_y / omega_z), 1.0};
}

namespace reduced {

double energy(std::span<const double> u, const Vec3& k) {
  const std::size_t n = u.size() / 3;
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) e += 0.5 * k[a] * u[3 * i + a] * u[3 * i + a];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = u[3 * i] - u[3 * j];
      const double dy = u[3 * i + 1] - u[3 * j + 1];
      const double dz = u[3 * i + 2] - u[3 * j + 2];
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      e += 1.0 / r;
    }
  return e;
}

std::vector<double> gradient(std::span<const double> u, const Vec3& k) {
  const std::size_t n = u.size() / 3;
  std::vector<double> g(u.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) g[3 * i + a] = k[a] * u[3 * i + a];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d[3];
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        d[a] = u[3 * i + a] - u[3 * j + a];
        r2 += d[a] * d[a];
      }
      const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
      for (int a = 0; a < 3; ++a) {
        g[3 * i + a] -= d[a] * inv_r3;
        g[3 * j + a] += d[a] * inv_r3;
      }
    }
  return g;
}

Matrix hessian(std::span<const double> u, const Vec3& k) {
  const std::size_t n = u.size() / 3;
  Matrix h(3 * n, 3 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) h(3 * i + a, 3 * i + a) = k[a];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d[3];
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        d[a] = u[3 * i + a] - u[3 * j + a];
        r2 += d[a] * d[a];
      }
      const double r = std::sqrt(r2);
      const double inv_r5 = 1.0 / (r2 * r2 * r);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          // d^2(1/r)/dd_a dd_b
          const double kab = (3.0 * d[a] * d[b] - (a == b ? r2 : 0.0)) * inv_r5;
          h(3 * i + a, 3 * i + b) += kab;
          h(3 * j + a, 3 * j + b) += kab;
          h(3 * i + a, 3 * j + b) -= kab;
          h(3 * j + a, 3 * i + b) -= kab;
        }
    }
  return h;
}

}  // namespace reduced

namespace {

void check_distinct(std::span<const Vec3> p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] == p[j]) {
        std::ostringstream msg;
        msg << "singular configuration: ions " << i << " and " << j << " coincide";
        throw SingularConfiguration(msg.str());
      }
}

std::vector<double> to_reduced(std::span<const Vec3> p, double length) {
  std::vector<double> u(3 * p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int a = 0; a < 3; ++a) u[3 * i + a] = p[i][a] / length;
  return u;
}

std::vector<Vec3> from_reduced(std::span<const double> u, double length) {
  std::vector<Vec3> p(u.size() / 3);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int a = 0; a < 3; ++a) p[i][a] = u[3 * i + a] * length;
  return p;
}

// Deterministic multi-start seeds in reduced units.
std::vector<std::vector<double>> seeds(int n) {
  std::vector<std::vector<double>> out;
  const double spacing = 1.2;
  const double radius = 0.8;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  auto add = [&](std::vector<double> u) {
    for (double& x : u) x += jitter(rng);
    out.push_back(std::move(u));
  };

  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> u(3 * n, 0.0);
    for (int i = 0; i < n; ++i) u[3 * i + axis] = (i - 0.5 * (n - 1)) * spacing;
    add(u);
  }
  const int planes[3][2] = {{0, 2}, {0, 1}, {1, 2}};
  for (const auto& pl : planes)
    for (int phase = 0; phase < 4; ++phase) {
      std::vector<double> u(3 * n, 0.0);
      for (int i = 0; i < n; ++i) {
        const double a = constants::two_pi * i / n + phase * constants::pi / (2.0 * n);
        u[3 * i + pl[0]] = radius * std::cos(a);
        u[3 * i + pl[1]] = radius * std::sin(a);
      }
      add(u);
    }
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  for (int s = 0; s < 8; ++s) {
    std::vector<double> u(3 * n);
    for (double& x : u) x = box(rng);
    add(u);
  }
  return out;
}

Objective crystal_objective(const Vec3& k) {
  return {
      [k](const std::vector<double>& u) { return reduced::energy(u, k); },
      [k](const std::vector<double>& u) { return reduced::gradient(u, k); },
      [k](const std::vector<double>& u) { return reduced::hessian(u, k); },
  };
}

// Frequency^2 in units of wz^2 below which a mode counts as zero.
constexpr double kZeroCurvature = 1e-12;

IonCrystal make_crystal(const TrapConfig& trap, const NewtonResult& r) {
  IonCrystal c;
  c.trap = trap;
  c.positions = from_reduced(r.x, trap.length_unit());
  c.energy = r.value * trap.energy_unit();
  c.converged = r.converged;
  c.gradient_norm = r.gradient_norm * trap.force_unit();
  c.iterations = r.iterations;
  c.soft_rotation = r.converged && std::abs(r.min_curvature) < kZeroCurvature;
  return c;
}

IonCrystal minimize_from(const TrapConfig& trap, std::vector<double> u0, bool escape_saddles) {
  NewtonOptions opt;
  opt.escape_saddles = escape_saddles;
  // Flat directions are only the exact Goldstone modes; keep the Newton
  // step in every direction with curvature above the zero-mode threshold.
  opt.null_tolerance = kZeroCurvature;
  const auto r = minimize_newton(crystal_objective(trap.stiffness()), std::move(u0), opt);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "equilibrium search did not converge after " << r.iterations
        << " iterations (reduced gradient norm " << r.gradient_norm << ")";
    throw ConvergenceError(msg.str(), r.gradient_norm * trap.force_unit());
  }
  return make_crystal(trap, r);
}

std::vector<double> sorted_distances(std::span<const Vec3> p) {
  std::vector<double> d;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += (p[i][a] - p[j][a]) * (p[i][a] - p[j][a]);
      d.push_back(std::sqrt(s));
    }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<Vec3> sorted_positions(std::span<const Vec3> p, double tol) {
  std::vector<Vec3> s(p.begin(), p.end());
  // Snap tiny coordinates to zero so that rounding noise does not reorder
  // symmetric ions.
  for (auto& v : s)
    for (double& x : v)
      if (std::abs(x) < tol) x = 0.0;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double potential_energy(std::span<const Vec3> positions, const TrapConfig& trap) {
  trap.validate();
  if (positions.empty()) throw InvalidArgument("potential_energy: no ions");
  check_distinct(positions);
  const double kq2 = constants::coulomb_constant * trap.ion_charge * trap.ion_charge;
  const double w[3] = {trap.omega_x, trap.omega_y, trap.omega_z};
  double e = 0.0;
  for (const auto& p : positions)
    for (int a = 0; a < 3; ++a) e += 0.5 * trap.ion_mass * w[a] * w[a] * p[a] * p[a];
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += (positions[i][a] - positions[j][a]) * (positions[i][a] - positions[j][a]);
      e += kq2 / std::sqrt(s);
    }
  return e;
}

std::vector<Vec3> potential_gradient(std::span<const Vec3> positions, const TrapConfig& trap) {
  trap.validate();
  check_distinct(positions);
  const double l = trap.length_unit();
  const auto g = reduced::gradient(to_reduced(positions, l), trap.stiffness());
  std::vector<Vec3> out(positions.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int a = 0; a < 3; ++a) out[i][a] = g[3 * i + a] * trap.force_unit();
  return out;
}

Vec3 centroid(std::span<const Vec3> positions) {
  Vec3 c{0.0, 0.0, 0.0};
  for (const auto& p : positions)
    for (int a = 0; a < 3; ++a) c[a] += p[a];
  for (double& x : c) x /= static_cast<double>(positions.size());
  return c;
}

std::vector<Vec3> rotate_about_y(std::span<const Vec3> positions, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Vec3> out(positions.begin(), positions.end());
  for (auto& p : out) {
    const double x = p[0];
    const double z = p[2];
    p[0] = c * x - s * z;
    p[2] = s * x + c * z;
  }
  return out;
}

bool same_configuration(const IonCrystal& a, const IonCrystal& b, double rel_tol) {
  if (a.positions.size() != b.positions.size()) return false;
  const double tol = rel_tol * a.trap.length_unit();
  const auto da = sorted_distances(a.positions);
  const auto db = sorted_distances(b.positions);
  for (std::size_t i = 0; i < da.size(); ++i)
    if (std::abs(da[i] - db[i]) > tol) return false;
  // Members of a continuous rotational family are the same class.
  if (a.soft_rotation || b.soft_rotation) return true;
  // Same multiset of positions: pair every ion of a with a distinct ion of b.
  std::vector<bool> used(b.positions.size(), false);
  for (const auto& p : a.positions) {
    bool matched = false;
    for (std::size_t j = 0; j < b.positions.size() && !matched; ++j) {
      if (used[j]) continue;
      const auto& q = b.positions[j];
      if (std::abs(p[0] - q[0]) <= tol && std::abs(p[1] - q[1]) <= tol && std::abs(p[2] - q[2]) <= tol)
        used[j] = matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

std::vector<IonCrystal> enumerate_minima(const TrapConfig& trap) {
  trap.validate();
  std::vector<IonCrystal> found;
  std::optional<ConvergenceError> last_error;
  for (auto& seed : seeds(trap.n_ions)) {
    IonCrystal c;
    try {
      c = minimize_from(trap, std::move(seed), true);
    } catch (const ConvergenceError& e) {
      last_error = e;
      continue;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(),
                                       [&](const IonCrystal& f) { return same_configuration(f, c); });
    if (!duplicate) found.push_back(std::move(c));
  }
  if (found.empty()) {
    if (last_error) throw *last_error;
    throw ConvergenceError("no minimum found", std::numeric_limits<double>::infinity());
  }
  // Multi-start can land on a higher local minimum first; keep energy order
  // and break exact ties by canonical position order.
  const double tol = 1e-12;
  std::sort(found.begin(), found.end(), [&](const IonCrystal& a, const IonCrystal& b) {
    const double scale = std::max(std::abs(a.energy), std::abs(b.energy));
    if (std::abs(a.energy - b.energy) > tol * scale) return a.energy < b.energy;
    const double snap = 1e-9 * trap.length_unit();
    return sorted_positions(a.positions, snap) > sorted_positions(b.positions, snap);
  });
  return found;
}

IonCrystal find_equilibrium(const TrapConfig& trap, std::optional<std::vector<Vec3>> seed) {
  trap.validate();
  if (!seed) return enumerate_minima(trap).front();
  if (static_cast<int>(seed->size()) != trap.n_ions)
    throw InvalidArgument("seed size does not match n_ions");
  check_distinct(*seed);
  return minimize_from(trap, to_reduced(*seed, trap.length_unit()), true);
}

IonCrystal find_stationary(const TrapConfig& trap, const std::vector<Vec3>& seed) {
  trap.validate();
  if (static_cast<int>(seed.size()) != trap.n_ions)
    throw InvalidArgument("seed size does not match n_ions");
  check_distinct(seed);
  return minimize_from(trap, to_reduced(seed, trap.length_unit()), false);
}

}  // namespace qtr
