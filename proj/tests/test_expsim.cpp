#include <doctest.h>

#include <cmath>
#include <limits>

#include "qtrotor/errors.hpp"
#include "qtrotor/expsim.hpp"
#include "qtrotor/quantum.hpp"

using namespace qtr;

TEST_CASE("linspace") {
  const auto x = linspace(0.0, 0.5, 26);
  REQUIRE(x.size() == 26);
  CHECK(x.front() == 0.0);
  CHECK(x.back() == 0.5);
  CHECK(x[1] == doctest::Approx(0.02));
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("binomial sampler") {
  CHECK(sample_binomial(1000, 0.0, 3) == 0);
  CHECK(sample_binomial(1000, 1.0, 3) == 1000);
  CHECK(sample_binomial(0, 0.5, 3) == 0);
  CHECK(sample_binomial(1000, 0.3, 42) == sample_binomial(1000, 0.3, 42));
  const double frac = static_cast<double>(sample_binomial(1000000, 0.3, 11)) / 1e6;
  CHECK(std::abs(frac - 0.3) < 0.002);
  CHECK_THROWS_AS(sample_binomial(-1, 0.3, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_binomial(10, 1.2, 1), InvalidArgument);

  // Mean over seeds agrees with n p within 3 standard errors.
  const int seeds = 400;
  const std::int64_t n = 400;
  const double p = 0.12;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) sum += static_cast<double>(sample_binomial(n, p, point_seed(77, s)));
  const double mean = sum / seeds;
  CHECK(std::abs(mean - n * p) < 3.0 * std::sqrt(n * p * (1.0 - p) / seeds));
}

TEST_CASE("point seeds are distinct and order independent") {
  CHECK(point_seed(1, 0) != point_seed(1, 1));
  CHECK(point_seed(1, 0) != point_seed(2, 0));
  CHECK(point_seed(5, 9) == point_seed(5, 9));
}

TEST_CASE("time scan simulation") {
  const auto m = DynamicsModel::experiment();
  const auto tau = linspace(0.0, 0.5, 26);
  const auto a = simulate_time_scan(m, tau, 400, 1);
  const auto b = simulate_time_scan(m, tau, 400, 1);
  const auto c = simulate_time_scan(m, tau, 400, 2);
  CHECK(a.axis_name == "tau_s");
  CHECK(a.successes == b.successes);
  CHECK(a.successes != c.successes);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.shots[i] == 400);
    CHECK(a.successes[i] >= 0);
    CHECK(a.successes[i] <= 400);
    CHECK(a.probabilities[i] == doctest::Approx(a.successes[i] / 400.0));
  }
  CHECK(a.successes[0] == 0);

  const DynamicsModel idle{0.0, 7.6, 0.3, 0.0};
  for (auto s : simulate_time_scan(idle, tau, 400, 5).successes) CHECK(s == 0);

  // Half a flux quantum stops the coherent oscillation.
  const DynamicsModel coherent{1.0, 7.6, std::numeric_limits<double>::infinity(), 0.0};
  for (auto s : simulate_time_scan(coherent, tau, 400, 5, 0.5).successes) CHECK(s == 0);
  CHECK_THROWS_AS(simulate_time_scan(m, tau, 0, 1), InvalidArgument);
}

TEST_CASE("flux scan simulation") {
  const auto m = DynamicsModel::experiment();
  const auto n = linspace(-1.0, 1.0, 21);
  const auto s = simulate_flux_scan(m, n, kFluxScanTau, kFluxScanShots, 3);
  CHECK(s.axis_name == "flux_quanta");
  CHECK(s.axis == n);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.shots[i] == kFluxScanShots);
  // Large-shot limit follows the model at offset + n.
  const auto big = simulate_flux_scan(m, n, kFluxScanTau, 10000000, 3);
  for (std::size_t i = 0; i < big.size(); ++i)
    CHECK(big.probabilities[i] ==
          doctest::Approx(transition_probability(kDefaultFluxOffset + n[i], kFluxScanTau, m)).epsilon(0.01));
  CHECK_THROWS_AS(simulate_flux_scan(m, n, -1.0, 800, 3), InvalidArgument);
}

TEST_CASE("shot series validation") {
  ShotSeries s;
  s.axis = {0.0, 1.0};
  s.successes = {1, 5};
  s.shots = {4, 4};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.successes = {1, 2};
  s.finalize();
  CHECK(s.probabilities[1] == 0.5);
  CHECK(s.errors[1] == doctest::Approx(0.25));
}
