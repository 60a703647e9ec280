#include "qtrotor/abfield.hpp"

#include <cmath>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"

namespace qtr {

namespace {

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

FieldSetup FieldSetup::experiment() {
  const double s = 1.0 / std::sqrt(2.0);
  const double b = 3.4 * constants::gauss;
  FieldSetup f;
  f.fixed_field = {0.5 * b, -0.5 * b, s * b};
  f.tunable_direction = {0.5, -0.5, -s};
  f.tunable_magnitude = 0.0;
  f.rotor_normal = {0.0, -1.0, 0.0};
  f.loop_area = 37e-12;
  return f;
}

void FieldSetup::validate() const {
  if (std::abs(std::sqrt(dot3(rotor_normal, rotor_normal)) - 1.0) > 1e-12)
    throw InvalidArgument("rotor normal must be a unit vector");
  if (!(loop_area > 0.0)) throw InvalidArgument("loop area must be positive");
  const double td = std::sqrt(dot3(tunable_direction, tunable_direction));
  if (td != 0.0 && std::abs(td - 1.0) > 1e-12) throw InvalidArgument("tunable direction must be a unit vector");
}

Vec3 FieldSetup::tunable_field() const {
  return {tunable_magnitude * tunable_direction[0], tunable_magnitude * tunable_direction[1],
          tunable_magnitude * tunable_direction[2]};
}

Vec3 FieldSetup::effective_normal() const {
  const double c = std::cos(misalignment);
  const double s = std::sin(misalignment);
  const auto& n = rotor_normal;
  return {n[0], c * n[1] - s * n[2], s * n[1] + c * n[2]};
}

Flux flux(const FieldSetup& setup) {
  setup.validate();
  const auto n = setup.effective_normal();
  const auto t = setup.tunable_field();
  Flux f;
  f.b_perp = dot3(setup.fixed_field, n) + dot3(t, n);
  f.phi = setup.loop_area * f.b_perp;
  f.flux_quanta = f.phi / constants::flux_quantum;
  return f;
}

double tunable_field_per_quantum(const FieldSetup& setup) {
  setup.validate();
  const double c = dot3(setup.tunable_direction, setup.effective_normal());
  if (c == 0.0) throw InvalidArgument("tunable coil is parallel to the rotor plane");
  return constants::flux_quantum / (setup.loop_area * c);
}

LorentzInputs LorentzInputs::experiment() {
  LorentzInputs in;
  in.U0 = constants::planck * 270.0;
  in.E = constants::planck * 90.0;
  in.M = 3.0 * 40.0 * 1.67e-27;
  in.B = 5.0 * constants::gauss;
  in.J_rate = 7.4;
  in.r0 = 3.42e-6;
  in.ion_mass = 40.0 * 1.67e-27;
  in.omega_radial = std::sqrt(3.0) * angular(1.119e6);
  return in;
}

LorentzEstimates lorentz_estimates(const LorentzInputs& in) {
  if (!(in.M > 0.0 && in.ion_mass > 0.0 && in.omega_radial > 0.0 && in.r0 > 0.0))
    throw InvalidArgument("lorentz_estimates: masses, radius and radial frequency must be positive");
  if (in.B < 0.0 || in.J_rate < 0.0) throw InvalidArgument("lorentz_estimates: B and J must be nonnegative");
  if (in.U0 == in.E) throw InvalidArgument("lorentz_estimates: U0 must differ from E");
  LorentzEstimates out;
  const double e = constants::elementary_charge;
  out.v_max = std::sqrt(2.0 * std::abs(in.U0 - in.E) / in.M);
  out.F_max = e * out.v_max * in.B;
  out.v_mean = in.J_rate * in.r0 * constants::pi / 3.0;
  out.F_mean = e * out.v_mean * in.B;
  const double stiffness = in.ion_mass * in.omega_radial * in.omega_radial;
  out.radius_shift_max = out.F_max / stiffness;
  out.radius_shift_mean = out.F_mean / stiffness;
  return out;
}

}  // namespace qtr
