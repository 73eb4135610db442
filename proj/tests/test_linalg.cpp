#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mrt/linalg.hpp"

using namespace mrt::linalg;

namespace {

// Q diag(values) Q^T with Q a product of random Householder reflections.
SymmetricMatrix with_spectrum(const std::vector<double>& values,
                              unsigned seed) {
  const std::size_t n = values.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = values[i];
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < 3; ++r) {
    std::vector<double> v(n);
    double norm = 0.0;
    for (auto& x : v) norm += (x = normal(rng)) * x;
    for (auto& x : v) x /= std::sqrt(norm);
    // A <- P A P with P = I - 2 v v^T.
    std::vector<double> av(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) av[i] += a[j * n + i] * v[j];
    double vav = 0.0;
    for (std::size_t i = 0; i < n; ++i) vav += v[i] * av[i];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        a[j * n + i] += -2 * v[i] * av[j] - 2 * av[i] * v[j] + 4 * vav * v[i] * v[j];
  }
  SymmetricMatrix m(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = 0.5 * (a[j * n + i] + a[i * n + j]);
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("BLAS kernel agrees with a naive product") {
  CHECK(blas_self_check() < 1e-10);
}

TEST_CASE("eigenvalue windows recover a planted spectrum") {
  const std::size_t n = 300;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = -5.0 + 0.037 * i + 1e-3 * std::sin(i);
  std::sort(values.begin(), values.end());
  const SymmetricMatrix a = with_spectrum(values, 7);
  const TridiagonalEigen tri(a);
  CHECK(tri.count_below(values[100] - 1e-6) == 100);
  CHECK(tri.count_below(values[100] + 1e-6) == 101);
  const EigenBlock b = tri.solve(40, 59, true);
  REQUIRE(b.values.size() == 20);
  CHECK(b.first_index == 40);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(std::fabs(b.values[k] - values[40 + k]) < 1e-12);
    // Residual and normalization of each returned vector.
    const double* v = &b.vectors[k * n];
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < n; ++j) av += a(i, j) * v[j];
      res = std::max(res, std::fabs(av - b.values[k] * v[i]));
      norm += v[i] * v[i];
    }
    CHECK(res < 1e-11);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("shift-invert iteration returns the pairs nearest the shift") {
  const std::size_t n = 200;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = 0.1 * i;
  values[120] = values[119] + 1e-7;  // a near-degenerate pair
  std::sort(values.begin(), values.end());
  const SymmetricMatrix a = with_spectrum(values, 11);
  const double sigma = 0.5 * (values[119] + values[120]);
  const NearestEigen e = nearest_eigenpairs(a, sigma, 6, 2, {}, 1e-10);
  REQUIRE(e.values.size() >= 2);
  std::vector<double> got = e.values;
  std::sort(got.begin(), got.end(), [&](double x, double y) {
    return std::fabs(x - sigma) < std::fabs(y - sigma);
  });
  std::vector<double> pair = {got[0], got[1]};
  std::sort(pair.begin(), pair.end());
  CHECK(std::fabs(pair[0] - values[119]) < 1e-10);
  CHECK(std::fabs(pair[1] - values[120]) < 1e-10);
}

}  // TEST_SUITE
