#include <doctest.h>

#include <cmath>

#include "qtrotor/abfield.hpp"
#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"

using namespace qtr;
namespace c = qtr::constants;

TEST_CASE("flux quantum") { CHECK(c::flux_quantum == doctest::Approx(4.1357e-15).epsilon(1e-4)); }

TEST_CASE("experimental coil setup") {
  const auto s = FieldSetup::experiment();
  const auto f = flux(s);
  CHECK(f.flux_quanta == doctest::Approx(1.52).epsilon(0.01));
  CHECK(f.phi == doctest::Approx(f.flux_quanta * c::flux_quantum));
  CHECK(f.b_perp == doctest::Approx(1.7 * c::gauss).epsilon(1e-6));
}

TEST_CASE("field in the rotor plane threads no flux") {
  auto s = FieldSetup::experiment();
  s.fixed_field = {5.0 * c::gauss, 0.0, -2.0 * c::gauss};
  CHECK(flux(s).flux_quanta == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("flux is linear in the field and superposes") {
  auto base = FieldSetup::experiment();
  base.tunable_magnitude = 2.0 * c::gauss;
  const double both = flux(base).flux_quanta;

  auto fixed_only = base;
  fixed_only.tunable_magnitude = 0.0;
  auto tunable_only = base;
  tunable_only.fixed_field = {0.0, 0.0, 0.0};
  CHECK(both == doctest::Approx(flux(fixed_only).flux_quanta + flux(tunable_only).flux_quanta));

  auto doubled = base;
  for (double& b : doubled.fixed_field) b *= 2.0;
  doubled.tunable_magnitude *= 2.0;
  CHECK(flux(doubled).flux_quanta == doctest::Approx(2.0 * both));
}

TEST_CASE("tunable coil step per flux quantum") {
  auto s = FieldSetup::experiment();
  const double step = tunable_field_per_quantum(s);
  const double f0 = flux(s).flux_quanta;
  s.tunable_magnitude = step;
  CHECK(flux(s).flux_quanta - f0 == doctest::Approx(1.0).epsilon(1e-9));
  // Tunable coil lying in the rotor plane cannot add flux.
  auto flat = FieldSetup::experiment();
  flat.tunable_direction = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(tunable_field_per_quantum(flat), InvalidArgument);
}

TEST_CASE("misalignment reduces the perpendicular component") {
  auto s = FieldSetup::experiment();
  const double aligned = flux(s).flux_quanta;
  s.misalignment = 0.1;
  CHECK(std::abs(flux(s).flux_quanta) != doctest::Approx(std::abs(aligned)));
  s.misalignment = 0.0;
  s.rotor_normal = {0.0, 2.0, 0.0};
  CHECK_THROWS_AS(flux(s), InvalidArgument);
}

TEST_CASE("Lorentz force estimates") {
  const auto in = LorentzInputs::experiment();
  const auto e = lorentz_estimates(in);
  CHECK(e.F_max > e.F_mean);
  CHECK(e.F_max < 1e-24);
  CHECK(e.radius_shift_max < 1e-13);
  CHECK(e.radius_shift_max == doctest::Approx(e.F_max / (in.ion_mass * in.omega_radial * in.omega_radial)));

  auto zero = in;
  zero.B = 0.0;
  const auto z = lorentz_estimates(zero);
  CHECK(z.F_max == 0.0);
  CHECK(z.F_mean == 0.0);

  auto twice = in;
  twice.B *= 2.0;
  CHECK(lorentz_estimates(twice).F_max == doctest::Approx(2.0 * e.F_max));
  CHECK(lorentz_estimates(twice).v_max == doctest::Approx(e.v_max));

  auto bad = in;
  bad.r0 = 0.0;
  CHECK_THROWS_AS(lorentz_estimates(bad), InvalidArgument);
}
