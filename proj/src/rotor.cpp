#include "qtrotor/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/newton.hpp"

namespace qtr {

Inertia moment_of_inertia(const IonCrystal& crystal) {
  const auto c = centroid(crystal.positions);
  double sum = 0.0;
  for (const auto& p : crystal.positions)
    for (int a = 0; a < 3; ++a) sum += (p[a] - c[a]) * (p[a] - c[a]);
  const double m = crystal.trap.ion_mass;
  Inertia in;
  in.moment = m * sum;
  in.r0 = std::sqrt(sum / static_cast<double>(crystal.positions.size()));
  return in;
}

namespace {

// Ion j is nominally at angle theta + 2 pi j / N (counterclockwise in x-z).
// The orientation constraint holds the mean tangential displacement at zero:
//   sum_j z_j cos(phi_j) - x_j sin(phi_j) = 0.
// Together with the centroid at the origin this leaves a linear subspace;
// L has an orthonormal basis of it in its columns.
Matrix chart(int n, double theta) {
  std::vector<std::vector<double>> rows;
  for (int a = 0; a < 3; ++a) {
    std::vector<double> r(3 * n, 0.0);
    for (int j = 0; j < n; ++j) r[3 * j + a] = 1.0;
    rows.push_back(r);
  }
  std::vector<double> r(3 * n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double phi = theta + constants::two_pi * j / n;
    r[3 * j] = -std::sin(phi);
    r[3 * j + 2] = std::cos(phi);
  }
  rows.push_back(r);

  Matrix p = Matrix::identity(3 * n);
  for (auto& row : rows) {
    const double s = norm(row);
    for (double& v : row) v /= s;
    for (int i = 0; i < 3 * n; ++i)
      for (int k = 0; k < 3 * n; ++k) p(i, k) -= row[i] * row[k];
  }
  const auto eig = jacobi_eigen(p);
  Matrix l(3 * n, 3 * n - 4);
  int col = 0;
  for (int k = 0; k < 3 * n; ++k) {
    if (eig.values[k] < 0.5) continue;
    for (int i = 0; i < 3 * n; ++i) l(i, col) = eig.vectors(i, k);
    ++col;
  }
  if (col != 3 * n - 4) throw NumericalError("rotor chart: wrong subspace dimension");
  return l;
}

// Angle at which the orientation constraint holds for centred positions,
// picking the root where the ions line up with their nominal directions.
double collective_angle(std::span<const Vec3> p) {
  const int n = static_cast<int>(p.size());
  double a = 0.0, b = 0.0;
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(constants::two_pi * j / n);
    const double s = std::sin(constants::two_pi * j / n);
    a += p[j][2] * c - p[j][0] * s;
    b += p[j][2] * s + p[j][0] * c;
  }
  return std::atan2(a, b);
}

}  // namespace

std::vector<Vec3> counterclockwise_order(std::span<const Vec3> positions) {
  const auto c = centroid(positions);
  std::vector<std::pair<double, Vec3>> keyed;
  for (const auto& p : positions) {
    double ang = std::atan2(p[2] - c[2], p[0] - c[0]);
    if (ang < -constants::pi / positions.size()) ang += constants::two_pi;
    keyed.emplace_back(ang, p);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Vec3> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

double constrained_energy(const TrapConfig& trap, double theta, std::vector<Vec3>& seed) {
  const int n = static_cast<int>(seed.size());
  const double l = trap.length_unit();
  const Vec3 k = trap.stiffness();
  const Matrix L = chart(n, theta);
  const Matrix Lt = L.transposed();

  const auto c = centroid(seed);
  std::vector<Vec3> centred(seed);
  for (auto& p : centred)
    for (int a = 0; a < 3; ++a) p[a] = (p[a] - c[a]) / l;
  centred = rotate_about_y(centred, theta - collective_angle(centred));
  std::vector<double> flat(3 * n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) flat[3 * i + a] = centred[i][a];

  auto expand = [&](const std::vector<double>& u) { return L * std::span<const double>(u); };
  Objective obj{
      [&](const std::vector<double>& u) { return reduced::energy(expand(u), k); },
      [&](const std::vector<double>& u) {
        const auto g = reduced::gradient(expand(u), k);
        return Lt * std::span<const double>(g);
      },
      [&](const std::vector<double>& u) { return Lt * reduced::hessian(expand(u), k) * L; },
  };
  NewtonOptions opt;
  opt.null_tolerance = 1e-14;
  const auto r = minimize_newton(obj, Lt * std::span<const double>(flat), opt);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "constrained minimization failed at theta = " << theta << " rad (gradient norm "
        << r.gradient_norm << ")";
    throw ConvergenceError(msg.str(), r.gradient_norm * trap.force_unit());
  }
  const auto x = expand(r.x);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a) seed[i][a] = x[3 * i + a] * l;
  return r.value * trap.energy_unit();
}

RotorPotential rotor_potential(const TrapConfig& trap, const RotorOptions& options) {
  trap.validate();
  if (trap.n_ions != 3) throw InvalidArgument("rotor_potential: the rotor model needs exactly three ions");
  if (options.samples_per_period < 64) throw InvalidArgument("rotor_potential: need at least 64 samples");

  const auto crystal = find_equilibrium(trap);
  const double l = trap.length_unit();
  for (const auto& p : crystal.positions)
    if (std::abs(p[1]) > 1e-6 * l) throw InvalidArgument("rotor_potential: crystal is not in the x-z plane");
  {
    // Collinear ions: twice the triangle area vanishes.
    const auto& p = crystal.positions;
    const double ax = p[1][0] - p[0][0], az = p[1][2] - p[0][2];
    const double bx = p[2][0] - p[0][0], bz = p[2][2] - p[0][2];
    if (std::abs(ax * bz - az * bx) < 1e-6 * l * l)
      throw InvalidArgument("rotor_potential: crystal is a linear chain, not a planar rotor");
  }

  RotorPotential rp;
  rp.crystal = crystal;
  rp.period = constants::pi / 3.0;
  const auto in = moment_of_inertia(crystal);
  rp.inertia = in.moment;
  rp.r0 = in.r0;

  const int n = options.samples_per_period;
  std::vector<double> e(n);
  const auto ordered = counterclockwise_order(crystal.positions);
  for (int j = 0; j < n; ++j) {
    std::vector<Vec3> state = ordered;
    e[j] = constrained_energy(trap, rp.period * j / n, state);
  }
  const double emin = *std::min_element(e.begin(), e.end());
  for (double& x : e) x -= emin;
  rp.barrier = *std::max_element(e.begin(), e.end());

  rp.theta.resize(6 * n);
  rp.U.resize(6 * n);
  for (int j = 0; j < 6 * n; ++j) {
    rp.theta[j] = rp.period * j / n;
    rp.U[j] = e[j % n];
  }

  // Real DFT over one period in the harmonics cos(6 k theta), sin(6 k theta).
  const int kmax = n / 2;
  rp.cos_coeffs.assign(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < n; ++j) {
      const double phase = constants::two_pi * k * j / n;
      a += e[j] * std::cos(phase);
      b += e[j] * std::sin(phase);
    }
    const double w = (k == 0 || 2 * k == n) ? 1.0 / n : 2.0 / n;
    rp.cos_coeffs[k] = w * a;
    rp.max_sine_coeff = std::max(rp.max_sine_coeff, std::abs(w * b));
  }
  return rp;
}

double RotorPotential::value(double th) const {
  double s = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) s += cos_coeffs[k] * std::cos(6.0 * k * th);
  return s;
}

double RotorPotential::curvature(double th) const {
  double s = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double q = 6.0 * k;
    s -= q * q * cos_coeffs[k] * std::cos(q * th);
  }
  return s;
}

double RotorPotential::well_angle() const {
  const std::size_t per = theta.size() / 6;
  std::size_t best = 0;
  for (std::size_t j = 1; j < per; ++j)
    if (U[j] < U[best]) best = j;
  return theta[best];
}

double RotorPotential::well_frequency() const {
  const double c = curvature(well_angle());
  return c > 0.0 ? std::sqrt(c / inertia) : 0.0;
}

}  // namespace qtr
