#include "qtrotor/thermo.hpp"

#include <cmath>

#include "qtrotor/constants.hpp"
#include "qtrotor/errors.hpp"

namespace qtr {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

}  // namespace

double nbar_from_temperature(double omega, double temperature) {
  require_positive(omega, "omega");
  if (temperature < 0.0) throw InvalidArgument("temperature must be nonnegative");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double temperature_from_nbar(double omega, double nbar) {
  require_positive(omega, "omega");
  if (nbar < 0.0) throw InvalidArgument("nbar must be nonnegative");
  if (nbar == 0.0) return 0.0;
  return constants::hbar * omega / (constants::boltzmann * std::log1p(1.0 / nbar));
}

ThermalState ThermalState::from_temperature(double omega, double temperature) {
  const double n = nbar_from_temperature(omega, temperature);
  return {omega, temperature, n, 1.0 / (1.0 + n)};
}

ThermalState ThermalState::from_nbar(double omega, double nbar) {
  return {omega, temperature_from_nbar(omega, nbar), nbar, 1.0 / (1.0 + nbar)};
}

double ground_state_threshold(double omega, double p0_min) {
  if (!(p0_min > 0.0 && p0_min < 1.0)) throw InvalidArgument("p0_min must lie in (0, 1)");
  return temperature_from_nbar(omega, 1.0 / p0_min - 1.0);
}

RampResult adiabatic_ramp(const std::vector<RampSample>& s, double T0, double heating_quanta) {
  if (s.empty()) throw InvalidArgument("adiabatic_ramp: empty schedule");
  for (const auto& p : s)
    if (!(p.omega > 0.0)) throw InvalidArgument("adiabatic_ramp: omega must be positive at every sample");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].t > s[i - 1].t)) throw InvalidArgument("adiabatic_ramp: times must increase");
  if (heating_quanta < 0.0) throw InvalidArgument("adiabatic_ramp: heating must be nonnegative");

  const double n0 = nbar_from_temperature(s.front().omega, T0);
  const double t0 = s.front().t;
  const double span = s.back().t - t0;

  RampResult r;
  r.points.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    RampPoint p;
    p.t = s[i].t;
    p.omega = s[i].omega;
    p.nbar = n0 + (span > 0.0 ? heating_quanta * (p.t - t0) / span : 0.0);
    p.temperature = temperature_from_nbar(p.omega, p.nbar);
    if (s.size() > 1) {
      const std::size_t a = i == 0 ? 0 : i - 1;
      const std::size_t b = i + 1 == s.size() ? i : i + 1;
      const double dw = (s[b].omega - s[a].omega) / (s[b].t - s[a].t);
      p.adiabaticity = dw / (p.omega * p.omega);
    }
    p.diabatic = std::abs(p.adiabaticity) > kAdiabaticityLimit;
    r.any_diabatic = r.any_diabatic || p.diabatic;
    r.points.push_back(p);
  }
  return r;
}

std::vector<RampSample> exponential_ramp(double omega_start, double omega_end, double duration, int samples) {
  require_positive(omega_start, "omega_start");
  require_positive(omega_end, "omega_end");
  require_positive(duration, "duration");
  if (samples < 2) throw InvalidArgument("exponential_ramp: need at least two samples");
  std::vector<RampSample> out(samples);
  const double ratio = std::log(omega_end / omega_start);
  for (int i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / (samples - 1);
    out[i] = {f * duration, omega_start * std::exp(ratio * f)};
  }
  out.back().omega = omega_end;
  return out;
}

double nbar_from_sidebands(double red, double blue) {
  if (!(red >= 0.0 && blue <= 1.0 && blue > 0.0))
    throw InvalidArgument("sideband excitations must lie in [0, 1] with blue > 0");
  if (red >= blue) throw InvalidArgument("red sideband must be weaker than blue for a thermal state");
  const double r = red / blue;
  return r / (1.0 - r);
}

}  // namespace qtr
