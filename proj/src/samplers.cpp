#include "simplexq/samplers.hpp"

#include <numeric>

#include "simplexq/errors.hpp"

namespace simplexq {

std::vector<double> sample_coupled(const SingleLetterDensity& p,
                                   std::uint64_t m, Rng& rng) {
  if (m < 1) throw DomainError("sample_coupled: need m >= 1");
  std::vector<std::uint64_t> sigma(m);
  std::iota(sigma.begin(), sigma.end(), std::uint64_t{0});
  shuffle(sigma, rng);
  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<double> w(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    // u lands in ((sigma_k)/m, (sigma_k+1)/m]; the right-open endpoint keeps
    // each stratum's supremum attainable only at u = j/m itself.
    const double lo = static_cast<double>(sigma[k]) * inv_m;
    const double hi = static_cast<double>(sigma[k] + 1) * inv_m;
    w[k] = p.inverse_cdf(rng.uniform_right(lo, hi));
  }
  return w;
}

ProbVector sample_hard_prior(const SingleLetterDensity& pstar, std::uint64_t K,
                             Rng& rng) {
  if (K < 5) throw DomainError("sample_hard_prior: need K >= 5");
  const std::vector<double> w = sample_coupled(pstar, K - 1, rng);
  std::vector<double> x(K);
  double acc = 0.0;
  for (std::uint64_t i = 0; i + 1 < K; ++i) {
    x[i] = 0.5 * w[i];
    acc += x[i];
  }
  // acc <= ((K-1)/K + 1)/2, so the remainder is at least 1/(2K).
  x[K - 1] = 1.0 - acc;
  shuffle(x, rng);
  return ProbVector::validated(std::move(x));
}

ProbVector sample_hard_prior(std::uint64_t K, const MaximinConstants& constants,
                             Rng& rng) {
  if (constants.K != K) {
    throw DomainError("sample_hard_prior: constants are for a different K");
  }
  return sample_hard_prior(SingleLetterDensity::maximin(constants), K, rng);
}

ProbVector uniform_bad_prior(std::uint64_t K, Rng& rng) {
  if (K < 2) throw DomainError("uniform_bad_prior: need K >= 2");
  const double cap = 2.0 / static_cast<double>(K);
  std::vector<double> x(K);
  std::uint64_t i = 0;
  if (K % 2 == 1) x[i++] = 1.0 / static_cast<double>(K);
  for (; i < K; i += 2) {
    const double u = cap * rng.uniform01();
    x[i] = u;
    x[i + 1] = cap - u;
  }
  shuffle(x, rng);
  return ProbVector::validated(std::move(x));
}

}  // namespace simplexq
