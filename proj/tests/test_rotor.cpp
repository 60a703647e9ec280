#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/modes.hpp"
#include "qtrotor/rotor.hpp"

using namespace qtr;
namespace c = qtr::constants;

TEST_CASE("inertia: equilateral triangle is 3 m R^2") {
  TrapConfig t = TrapConfig::experiment();
  t.omega_x = t.omega_z;
  const auto cr = find_equilibrium(t);
  const double R = t.length_unit() / std::pow(3.0, 1.0 / 6.0);
  const auto in = moment_of_inertia(cr);
  CHECK(in.moment == doctest::Approx(3.0 * t.ion_mass * R * R).epsilon(1e-10));
  CHECK(in.r0 == doctest::Approx(R).epsilon(1e-10));
  CHECK(in.moment == doctest::Approx(2.33e-36).epsilon(0.02));
  CHECK(c::pi * in.r0 * in.r0 == doctest::Approx(37e-12).epsilon(0.03));
}

TEST_CASE("rotor potential: flat at wx = wz") {
  TrapConfig t = TrapConfig::experiment();
  t.omega_x = t.omega_z;
  RotorOptions opt;
  opt.samples_per_period = 64;
  const auto rp = rotor_potential(t, opt);
  const double scale = t.energy_unit();
  for (double u : rp.U) CHECK(std::abs(u) <= 1e-12 * scale);
}

TEST_CASE("rotor potential: symmetry, periodicity and well bottom in the tunnelling regime") {
  const auto t = TrapConfig::tunnelling(1740.0);
  const auto rp = rotor_potential(t);
  CHECK(rp.period == doctest::Approx(c::pi / 3.0));
  CHECK(rp.theta.size() == 6 * 256);
  CHECK(*std::min_element(rp.U.begin(), rp.U.end()) == 0.0);
  CHECK(rp.barrier == *std::max_element(rp.U.begin(), rp.U.end()));
  // Mirror symmetry about the well: U(theta) = U(-theta), up to rounding of
  // the total energy.
  const std::size_t n = 256;
  for (std::size_t j = 1; j < n; ++j) CHECK(std::abs(rp.U[j] - rp.U[n - j]) <= 1e-14 * std::abs(rp.crystal.energy));
  // Odd (sine) harmonics vanish.
  CHECK(rp.max_sine_coeff <= 1e-6 * std::abs(rp.cos_coeffs[1]));
  // Fourier series reproduces the samples.
  for (std::size_t j = 0; j < n; j += 17) CHECK(rp.value(rp.theta[j]) == doctest::Approx(rp.U[j]).scale(rp.barrier));
  // Well bottom equals the unconstrained minimum.
  std::vector<Vec3> seed = counterclockwise_order(rp.crystal.positions);
  const double e = constrained_energy(t, rp.well_angle(), seed);
  CHECK(std::abs(e - rp.crystal.energy) <= 1e-12 * std::abs(rp.crystal.energy));
}

TEST_CASE("rotor potential: barrier and well frequency near the tunnelling point") {
  const auto t = TrapConfig::tunnelling(1740.0);
  const auto rp = rotor_potential(t);
  CHECK(rp.barrier / c::planck == doctest::Approx(250.0).epsilon(0.3));
  const double mode = normal_modes(rp.crystal).frequency_of(ModeLabel::rotational);
  CHECK(rp.well_frequency() == doctest::Approx(mode).epsilon(0.02));
  CHECK(rp.well_frequency() / c::two_pi == doctest::Approx(180.0).epsilon(0.3));
}

TEST_CASE("rotor potential: barrier grows monotonically with the detuning") {
  double last = 0.0;
  for (double d : {1000.0, 1400.0, 1800.0, 2200.0, 2600.0}) {
    RotorOptions opt;
    opt.samples_per_period = 64;
    const auto rp = rotor_potential(TrapConfig::tunnelling(d), opt);
    CHECK(rp.barrier > last);
    last = rp.barrier;
  }
}

TEST_CASE("rotor potential: rejects chains, wrong ion count and coarse grids") {
  TrapConfig chain = TrapConfig::experiment();
  chain.omega_x = c::two_pi * 2.1e6;
  CHECK_THROWS_AS(rotor_potential(chain), InvalidArgument);
  TrapConfig four = TrapConfig::tunnelling(1740.0);
  four.n_ions = 4;
  CHECK_THROWS_AS(rotor_potential(four), InvalidArgument);
  RotorOptions coarse;
  coarse.samples_per_period = 16;
  CHECK_THROWS_AS(rotor_potential(TrapConfig::tunnelling(1740.0), coarse), InvalidArgument);
}

TEST_CASE("counterclockwise order starts near angle zero") {
  const std::vector<Vec3> p{{-1.0, 0.0, -1.7}, {2.0, 0.0, 0.0}, {-1.0, 0.0, 1.7}};
  const auto o = counterclockwise_order(p);
  CHECK(o[0][0] == 2.0);
  CHECK(o[1][2] == 1.7);
  CHECK(o[2][2] == -1.7);
}
