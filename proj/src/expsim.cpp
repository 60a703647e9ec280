#include "qtrotor/expsim.hpp"

#include <cmath>
#include <random>

#include "qtrotor/errors.hpp"

namespace qtr {

void ShotSeries::finalize() {
  probabilities.resize(axis.size());
  errors.resize(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double p = static_cast<double>(successes[i]) / static_cast<double>(shots[i]);
    probabilities[i] = p;
    errors[i] = std::sqrt(p * (1.0 - p) / static_cast<double>(shots[i]));
  }
}

void ShotSeries::validate() const {
  const std::size_t n = axis.size();
  if (successes.size() != n || shots.size() != n) throw InvalidArgument("shot series: column length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (shots[i] < 1) throw InvalidArgument("shot series: shots must be >= 1");
    if (successes[i] < 0 || successes[i] > shots[i])
      throw InvalidArgument("shot series: successes must lie in [0, shots]");
    if (!std::isfinite(axis[i])) throw InvalidArgument("shot series: non-finite axis value");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1));
}

std::int64_t sample_binomial(std::int64_t shots, double p, std::uint64_t seed) {
  if (shots < 0) throw InvalidArgument("sample_binomial: negative shot count");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sample_binomial: probability outside [0, 1]");
  std::mt19937_64 gen(seed);
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < shots; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (u < p) ++k;
  }
  return k;
}

namespace {

template <class Prob>
ShotSeries simulate(const std::string& name, const std::vector<double>& axis, std::int64_t shots,
                    std::uint64_t seed, Prob prob) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  ShotSeries s;
  s.axis_name = name;
  s.axis = axis;
  s.shots.assign(axis.size(), shots);
  s.successes.resize(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i)
    s.successes[i] = sample_binomial(shots, prob(axis[i]), point_seed(seed, i));
  s.finalize();
  return s;
}

}  // namespace

ShotSeries simulate_time_scan(const DynamicsModel& model, const std::vector<double>& tau, std::int64_t shots,
                              std::uint64_t seed, double flux_quanta) {
  model.validate();
  return simulate("tau_s", tau, shots, seed,
                  [&](double t) { return transition_probability(flux_quanta, t, model); });
}

ShotSeries simulate_flux_scan(const DynamicsModel& model, const std::vector<double>& flux, double tau,
                              std::int64_t shots, std::uint64_t seed, double flux_offset) {
  model.validate();
  if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
  return simulate("flux_quanta", flux, shots, seed,
                  [&](double n) { return transition_probability(flux_offset + n, tau, model); });
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw InvalidArgument("linspace: need at least one point");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return v;
}

}  // namespace qtr
