#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qtrotor/constants.hpp"
#include "qtrotor/crystal.hpp"
#include "qtrotor/errors.hpp"

using namespace qtr;
namespace c = qtr::constants;

namespace {

TrapConfig with_x(double mhz) {
  TrapConfig t = TrapConfig::experiment();
  t.omega_x = c::two_pi * mhz * 1e6;
  return t;
}

std::vector<double> sorted_z(const IonCrystal& cr) {
  std::vector<double> z;
  for (const auto& p : cr.positions) z.push_back(p[2]);
  std::sort(z.begin(), z.end());
  return z;
}

}  // namespace

TEST_CASE("potential energy: single ion") {
  const TrapConfig t = TrapConfig::experiment();
  std::vector<Vec3> one{{0.0, 0.0, 0.0}};
  CHECK(potential_energy(one, t) == 0.0);
  one[0] = {1e-6, 0.0, 0.0};
  CHECK(potential_energy(one, t) == doctest::Approx(0.5 * t.ion_mass * t.omega_x * t.omega_x * 1e-12).epsilon(1e-15));
}

TEST_CASE("potential energy: two-ion force balance") {
  TrapConfig t = TrapConfig::experiment();
  t.n_ions = 2;
  const double d = std::cbrt(2.0) * t.length_unit();
  const std::vector<Vec3> p{{0.0, 0.0, -d / 2}, {0.0, 0.0, d / 2}};
  const auto g = potential_gradient(p, t);
  for (const auto& gi : g)
    for (double x : gi) CHECK(std::abs(x) <= 1e-12 * t.force_unit());
}

TEST_CASE("potential energy: coincident ions are singular") {
  const TrapConfig t = TrapConfig::experiment();
  const std::vector<Vec3> p{{1e-6, 0.0, 0.0}, {1e-6, 0.0, 0.0}, {0.0, 0.0, 5e-6}};
  CHECK_THROWS_AS(potential_energy(p, t), SingularConfiguration);
  CHECK_THROWS_AS(potential_gradient(p, t), SingularConfiguration);
}

TEST_CASE("trap validation") {
  TrapConfig t = TrapConfig::experiment();
  t.omega_y = 0.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t = TrapConfig::experiment();
  t.ion_mass = -1.0;
  CHECK_THROWS_AS(find_equilibrium(t), InvalidArgument);
}

TEST_CASE("equilibrium: three-ion chain at strong radial confinement") {
  const TrapConfig t = with_x(2.1);
  const auto cr = find_equilibrium(t);
  CHECK(cr.converged);
  const double a = std::cbrt(1.25) * t.length_unit();
  const auto z = sorted_z(cr);
  CHECK(z[0] == doctest::Approx(-a).epsilon(1e-10));
  CHECK(std::abs(z[1]) <= 1e-10 * a);
  CHECK(z[2] == doctest::Approx(a).epsilon(1e-10));
  for (const auto& p : cr.positions) CHECK(std::hypot(p[0], p[1]) <= 1e-10 * a);
}

TEST_CASE("equilibrium: equilateral triangle at wx = wz") {
  const TrapConfig t = with_x(1.119);
  const auto cr = find_equilibrium(t);
  CHECK(cr.converged);
  CHECK(cr.soft_rotation);
  const double R = t.length_unit() / std::pow(3.0, 1.0 / 6.0);
  CHECK(R == doctest::Approx(3.436e-6).epsilon(1e-3));
  for (const auto& p : cr.positions) {
    CHECK(std::hypot(p[0], p[2]) == doctest::Approx(R).epsilon(1e-10));
    CHECK(std::abs(p[1]) <= 1e-10 * R);
  }
}

TEST_CASE("equilibrium: gradient below tolerance and centroid at the origin") {
  for (double mhz : {1.3, 1.523, 1.7, 2.1}) {
    const TrapConfig t = with_x(mhz);
    const auto cr = find_equilibrium(t);
    CHECK(cr.gradient_norm <= 1e-10 * t.force_unit());
    const auto cen = centroid(cr.positions);
    for (double x : cen) CHECK(std::abs(x) <= 1e-12 * t.length_unit());
    CHECK(cr.energy == doctest::Approx(potential_energy(cr.positions, t)).epsilon(1e-15));
  }
}

TEST_CASE("minima: two degenerate orientations in the planar regime") {
  const auto minima = enumerate_minima(TrapConfig::experiment());
  REQUIRE(minima.size() == 2);
  CHECK(std::abs(minima[0].energy - minima[1].energy) <= 1e-12 * minima[0].energy);
  CHECK_FALSE(same_configuration(minima[0], minima[1]));
  // The two orientations are mirror images under x -> -x.
  IonCrystal mirrored = minima[0];
  for (auto& p : mirrored.positions) p[0] = -p[0];
  CHECK(same_configuration(mirrored, minima[1]));
}

TEST_CASE("minima: chain regime has one class, just below critical has two") {
  CHECK(enumerate_minima(with_x(2.1)).size() == 1);
  const double critical = std::sqrt(2.4) * 1.119;
  CHECK(enumerate_minima(with_x(critical * 0.99)).size() == 2);
}

TEST_CASE("property: energy invariant under permutation and reflections") {
  const auto cr = find_equilibrium(TrapConfig::experiment());
  const double e = cr.energy;
  auto p = cr.positions;
  std::reverse(p.begin(), p.end());
  CHECK(potential_energy(p, cr.trap) == doctest::Approx(e).epsilon(1e-12));
  for (int axis = 0; axis < 3; ++axis) {
    auto q = cr.positions;
    for (auto& x : q) x[axis] = -x[axis];
    CHECK(potential_energy(q, cr.trap) == doctest::Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("property: frequency scaling rescales lengths by s^(-2/3)") {
  const TrapConfig t = TrapConfig::experiment();
  const auto base = find_equilibrium(t);
  for (double s : {0.5, 2.0, 3.7}) {
    TrapConfig u = t;
    u.omega_x *= s;
    u.omega_y *= s;
    u.omega_z *= s;
    const auto scaled = find_equilibrium(u);
    std::vector<Vec3> expect(base.positions);
    for (auto& p : expect)
      for (double& x : p) x *= std::pow(s, -2.0 / 3.0);
    IonCrystal ref = scaled;
    ref.positions = expect;
    CHECK(same_configuration(ref, scaled, 1e-9));
  }
}

TEST_CASE("property: rotation invariance at wx = wz over 32 random angles") {
  const TrapConfig t = with_x(1.119);
  const auto cr = find_equilibrium(t);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> angle(0.0, c::two_pi);
  for (int i = 0; i < 32; ++i) {
    const auto r = rotate_about_y(cr.positions, angle(rng));
    CHECK(potential_energy(r, t) == doctest::Approx(cr.energy).epsilon(1e-12));
  }
}

TEST_CASE("reduced units: analytic Hessian matches finite differences on random configurations") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vec3 k = TrapConfig::experiment().stiffness();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> u(9);
    for (double& x : u) x = gauss(rng);
    const Matrix h = reduced::hessian(u, k);
    const double step = 1e-7;
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < 9; ++j) {
      auto up = u, dn = u;
      up[j] += step;
      dn[j] -= step;
      const auto gp = reduced::gradient(up, k);
      const auto gm = reduced::gradient(dn, k);
      for (int i = 0; i < 9; ++i) {
        err = std::max(err, std::abs((gp[i] - gm[i]) / (2 * step) - h(i, j)));
        scale = std::max(scale, std::abs(h(i, j)));
      }
    }
    CHECK(err <= 1e-6 * scale);
  }
}
