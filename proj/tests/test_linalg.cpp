#include <doctest.h>

#include <cmath>
#include <random>

#include "qtrotor/linalg.hpp"
#include "qtrotor/newton.hpp"

using namespace qtr;

namespace {

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

}  // namespace

TEST_CASE("jacobi: 2x2 with known eigenpairs") {
  Matrix a(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  a(1, 1) = 2.0;
  const auto e = jacobi_eigen(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("jacobi: diagonal input is returned sorted") {
  Matrix a(3, 3);
  a(0, 0) = 5.0;
  a(1, 1) = -1.0;
  a(2, 2) = 2.0;
  const auto e = jacobi_eigen(a);
  CHECK(e.values == std::vector<double>{-1.0, 2.0, 5.0});
}

TEST_CASE("jacobi: residuals, orthonormality and trace on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 12;
    const Matrix a = random_symmetric(n, rng);
    const auto e = jacobi_eigen(a);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += e.values[k];
      const auto v = e.vectors.column(k);
      auto av = a * std::span<const double>(v);
      for (int i = 0; i < n; ++i) av[i] -= e.values[k] * v[i];
      CHECK(norm(av) <= 1e-12 * a.frobenius_norm());
      for (int j = 0; j < n; ++j) {
        const double d = dot(v, e.vectors.column(j));
        CHECK(d == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
    }
    CHECK(sum == doctest::Approx(a.trace()).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("cholesky: solves SPD systems and rejects indefinite ones") {
  Matrix a(3, 3);
  const double v[3][3] = {{4, 1, 0.5}, {1, 3, 0.2}, {0.5, 0.2, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
  const auto l = cholesky(a);
  REQUIRE(l);
  const std::vector<double> b{1.0, -2.0, 0.5};
  const auto x = cholesky_solve(*l, b);
  const auto ax = a * std::span<const double>(x);
  for (int i = 0; i < 3; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-14));

  a(0, 0) = -1.0;
  CHECK_FALSE(cholesky(a));
}

TEST_CASE("pseudo-inverse: rank-deficient matrix exposes its null space") {
  Matrix a(2, 2, 1.0);  // rank one, null space (1, -1)/sqrt2
  const auto p = symmetric_pseudo_inverse(a);
  REQUIRE(p.null_space.cols() == 1);
  CHECK(std::abs(p.null_space(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p.inverse(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("newton: quadratic bowl converges in one step") {
  Objective q{
      [](const std::vector<double>& x) { return 0.5 * (3 * x[0] * x[0] + x[1] * x[1]) - x[0]; },
      [](const std::vector<double>& x) { return std::vector<double>{3 * x[0] - 1.0, x[1]}; },
      [](const std::vector<double>&) {
        Matrix h(2, 2);
        h(0, 0) = 3.0;
        h(1, 1) = 1.0;
        return h;
      },
  };
  const auto r = minimize_newton(q, {2.0, -1.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.x[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(r.iterations <= 2);
}

TEST_CASE("newton: escapes the saddle of a double well") {
  // f = (x^2 - 1)^2 + y^2 has a saddle at the origin and minima at x = +-1.
  Objective dw{
      [](const std::vector<double>& x) { return std::pow(x[0] * x[0] - 1.0, 2) + x[1] * x[1]; },
      [](const std::vector<double>& x) {
        return std::vector<double>{4.0 * x[0] * (x[0] * x[0] - 1.0), 2.0 * x[1]};
      },
      [](const std::vector<double>& x) {
        Matrix h(2, 2);
        h(0, 0) = 12.0 * x[0] * x[0] - 4.0;
        h(1, 1) = 2.0;
        return h;
      },
  };
  const auto r = minimize_newton(dw, {0.0, 0.3});
  CHECK(r.converged);
  CHECK(std::abs(r.x[0]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.min_curvature > 0.0);
}
