#include <doctest.h>

#include <cmath>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"
#include "qtrotor/thermo.hpp"

using namespace qtr;
namespace c = qtr::constants;

TEST_CASE("occupation and temperature round trip") {
  const double w = c::two_pi * 750e3;
  for (double n : {1e-4, 0.08, 1.0, 4.0, 250.0}) {
    const double T = temperature_from_nbar(w, n);
    CHECK(nbar_from_temperature(w, T) == doctest::Approx(n).epsilon(1e-12));
  }
  CHECK(nbar_from_temperature(w, 0.0) == 0.0);
  CHECK(temperature_from_nbar(w, 0.0) == 0.0);
  CHECK(nbar_from_temperature(w, 1e-9) < 1e-300);
  // High-temperature limit kT / hbar w.
  CHECK(nbar_from_temperature(w, 1.0) == doctest::Approx(c::boltzmann / (c::hbar * w) - 0.5).epsilon(1e-6));
  const auto s = ThermalState::from_nbar(w, 0.08);
  CHECK(s.ground_population == doctest::Approx(1.0 / 1.08));
  CHECK(ThermalState::from_temperature(w, s.temperature).nbar == doctest::Approx(0.08));
}

TEST_CASE("rotor-mode temperatures") {
  CHECK(temperature_from_nbar(c::two_pi * 180.0, 4.0) == doctest::Approx(38.7e-9).epsilon(0.005));
  // n = 0.08 at 750 kHz.
  CHECK(temperature_from_nbar(c::two_pi * 750e3, 0.08) == doctest::Approx(13.8e-6).epsilon(0.01));
}

TEST_CASE("ground-state threshold") {
  const double w = c::two_pi * 180.0;
  const double T = ground_state_threshold(w, 0.5);
  CHECK(ThermalState::from_temperature(w, T).ground_population == doctest::Approx(0.5));
  CHECK(ground_state_threshold(w, 0.9) < T);
  CHECK_THROWS_AS(ground_state_threshold(w, 1.0), InvalidArgument);
}

TEST_CASE("sideband thermometry") {
  CHECK(nbar_from_sidebands(0.1, 0.2) == doctest::Approx(1.0));
  CHECK(nbar_from_sidebands(0.0, 0.3) == 0.0);
  CHECK(nbar_from_sidebands(0.074, 1.0) == doctest::Approx(0.074 / 0.926));
  CHECK_THROWS_AS(nbar_from_sidebands(0.3, 0.3), InvalidArgument);
  CHECK_THROWS_AS(nbar_from_sidebands(0.4, 0.3), InvalidArgument);
  CHECK_THROWS_AS(nbar_from_sidebands(0.1, 0.0), InvalidArgument);
}

TEST_CASE("adiabatic ramp") {
  const double w0 = c::two_pi * 750e3;
  const double w1 = c::two_pi * 180.0;
  const auto sched = exponential_ramp(w0, w1, 0.2, 401);
  REQUIRE(sched.size() == 401);
  CHECK(sched.front().omega == doctest::Approx(w0));
  CHECK(sched.back().omega == doctest::Approx(w1));
  CHECK(sched.back().t == doctest::Approx(0.2));

  const double T0 = temperature_from_nbar(w0, 0.08);
  SUBCASE("ideal ramp conserves the occupation and scales T with omega") {
    const auto r = adiabatic_ramp(sched, T0);
    for (const auto& p : r.points) CHECK(p.nbar == doctest::Approx(0.08));
    CHECK(r.points.back().temperature == doctest::Approx(T0 * w1 / w0).epsilon(0.02));
    CHECK_FALSE(r.any_diabatic);
  }
  SUBCASE("heating adds quanta linearly in time") {
    const auto r = adiabatic_ramp(sched, T0, 3.92);
    CHECK(r.points.back().nbar == doctest::Approx(4.0));
    CHECK(r.points[200].nbar == doctest::Approx(0.08 + 3.92 / 2.0));
    CHECK(r.points.back().temperature == doctest::Approx(38.7e-9).epsilon(0.005));
  }
  SUBCASE("fast ramps are flagged") {
    const auto r = adiabatic_ramp(exponential_ramp(w0, w1, 1e-3, 401), T0);
    CHECK(r.any_diabatic);
    CHECK(r.points.back().diabatic);
    CHECK_FALSE(r.points.front().diabatic);
  }
  CHECK_THROWS_AS(adiabatic_ramp({}, T0), InvalidArgument);
  CHECK_THROWS_AS(adiabatic_ramp(sched, T0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(exponential_ramp(w0, w1, 0.2, 1), InvalidArgument);
}
