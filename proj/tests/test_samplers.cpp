#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "simplexq/density.hpp"
#include "simplexq/detail/rng.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/datasets.hpp"
#include "simplexq/samplers.hpp"

using namespace simplexq;

TEST_CASE("rng streams are deterministic and decorrelated") {
  Rng a = Rng::stream(42, 7);
  Rng b = Rng::stream(42, 7);
  Rng c = Rng::stream(42, 8);
  bool differs = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    differs |= (va != c.next_u64());
  }
  CHECK(differs);
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform01();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    const double w = u.uniform_right(0.25, 0.5);
    CHECK(w > 0.25);
    CHECK(w <= 0.5);
    CHECK(u.exponential() > 0.0);
    CHECK(u.below(13) < 13);
  }
}

TEST_CASE("uniform simplex draws match the known coordinate marginal") {
  const std::uint64_t K = 10;
  const int n = 100000;
  Rng rng(2024);
  std::vector<double> first;
  first.reserve(n);
  double mean = 0.0;
  for (int t = 0; t < n; ++t) {
    const ProbVector x = sample_uniform_simplex(K, rng);
    REQUIRE(x.size() == K);
    first.push_back(x[0]);
    mean += x[0];
  }
  mean /= n;
  // Coordinate marginal is Beta(1, K-1): mean 1/K, variance (K-1)/(K^2(K+1)).
  const double sd_of_mean = std::sqrt(9.0 / (100.0 * 11.0) / n);
  CHECK(std::abs(mean - 0.1) < 3.0 * sd_of_mean);

  std::sort(first.begin(), first.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::pow(1.0 - first[i], 9.0);
    ks = std::max(ks, std::abs(cdf - (i + 1.0) / n));
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
  }
  CHECK(ks < 0.01);
  CHECK_THROWS_AS(sample_uniform_simplex(1, rng), DomainError);
}

TEST_CASE("coupled draws use each quantile stratum exactly once") {
  const MaximinConstants c = MaximinConstants::solve(16);
  const SingleLetterDensity p = SingleLetterDensity::maximin(c);
  const std::uint64_t m = 8;
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> w = sample_coupled(p, m, rng);
    REQUIRE(w.size() == m);
    std::vector<double> u(m);
    for (std::uint64_t i = 0; i < m; ++i) u[i] = p.cdf(w[i]);
    std::sort(u.begin(), u.end());
    for (std::uint64_t j = 0; j < m; ++j) {
      CHECK(u[j] > static_cast<double>(j) / m - 1e-9);
      CHECK(u[j] <= static_cast<double>(j + 1) / m + 1e-9);
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum <= 1.0 + static_cast<double>(m) * p.mean() + 1e-9);
  }
}

TEST_CASE("hard prior stays on the simplex with a guarded last coordinate") {
  for (std::uint64_t K : {5ull, 50ull, 500ull}) {
    const MaximinConstants c = MaximinConstants::solve(K);
    const SingleLetterDensity p = SingleLetterDensity::maximin(c);
    Rng rng(K);
    const int trials = K <= 5 ? 20000 : (K <= 50 ? 4000 : 500);
    double min_entry = 1.0;
    for (int t = 0; t < trials; ++t) {
      const ProbVector x = sample_hard_prior(p, K, rng);
      REQUIRE(x.size() == K);
      for (std::size_t i = 0; i < x.size(); ++i) {
        min_entry = std::min(min_entry, x[i]);
      }
    }
    // The residual coordinate is at least 1/(2K) by the coupling bound, and
    // the coupled halves are positive, so nothing can be negative.
    CHECK(min_entry >= 0.0);
  }
  Rng rng(1);
  const MaximinConstants c5 = MaximinConstants::solve(5);
  const ProbVector via_constants = sample_hard_prior(5, c5, rng);
  CHECK(via_constants.size() == 5);
}

TEST_CASE("paired uniform prior has the advertised coordinate law") {
  const std::uint64_t K = 16;
  Rng rng(99);
  double mean = 0.0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const ProbVector x = uniform_bad_prior(K, rng);
    REQUIRE(x.size() == K);
    for (std::size_t i = 0; i < K; ++i) {
      CHECK(x[i] >= 0.0);
      CHECK(x[i] <= 2.0 / K + 1e-15);
    }
    mean += x[3];
  }
  mean /= trials;
  // Coordinate is Unif[0, 2/K]: mean 1/K, sd of the sample mean below.
  const double sd =
      (2.0 / K) / std::sqrt(12.0) / std::sqrt(static_cast<double>(trials));
  CHECK(std::abs(mean - 1.0 / K) < 4.0 * sd);

  // Odd K pins one coordinate at exactly 1/K.
  const ProbVector odd = uniform_bad_prior(7, rng);
  bool pinned = false;
  for (std::size_t i = 0; i < 7; ++i) pinned |= (odd[i] == 1.0 / 7.0);
  CHECK(pinned);
  CHECK_THROWS_AS(uniform_bad_prior(1, rng), DomainError);
}

TEST_CASE("shuffle produces a permutation") {
  Rng rng(3);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
  shuffle(v, rng);
  std::vector<int> s = v;
  std::sort(s.begin(), s.end());
  CHECK(s == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}
