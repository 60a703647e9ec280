#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtrotor/quantum.hpp"

namespace qtr {

// Binomial measurement record: one entry per axis point.
struct ShotSeries {
  std::string axis_name;  // "tau_s" or "flux_quanta"
  std::vector<double> axis;
  std::vector<std::int64_t> successes;
  std::vector<std::int64_t> shots;
  std::vector<double> probabilities;
  std::vector<double> errors;  // sqrt(p (1 - p) / shots)

  std::size_t size() const { return axis.size(); }
  // Recompute probabilities and errors from successes/shots.
  void finalize();
  void validate() const;
};

// Counter-based seeding: point i of a scan draws from a std::mt19937_64
// seeded with splitmix64(seed + golden * (i + 1)), so results do not depend
// on evaluation order or thread count.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

// Sum of `shots` Bernoulli(p) draws; a draw succeeds when
// (x >> 11) * 2^-53 < p for the next 64-bit output x.
std::int64_t sample_binomial(std::int64_t shots, double p, std::uint64_t seed);

inline constexpr int kTimeScanShots = 400;
inline constexpr int kFluxScanShots = 800;
inline constexpr double kFluxScanTau = 0.05;       // s
inline constexpr double kDefaultFluxOffset = 1.5;  // flux quanta with the tunable coil off

ShotSeries simulate_time_scan(const DynamicsModel& model, const std::vector<double>& tau, std::int64_t shots,
                              std::uint64_t seed, double flux_quanta = 0.0);

// Axis values are the flux quanta n added by the tunable coil; the rotor
// sees flux_offset + n.
ShotSeries simulate_flux_scan(const DynamicsModel& model, const std::vector<double>& flux, double tau,
                              std::int64_t shots, std::uint64_t seed, double flux_offset = kDefaultFluxOffset);

// Evenly spaced axis [lo, hi] with `points` entries.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace qtr
