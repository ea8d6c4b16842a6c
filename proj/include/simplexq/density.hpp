#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "simplexq/maximin.hpp"

namespace simplexq {

// Probability density on [0,1] for a single simplex coordinate.
// Immutable value type; copies share the implementation.
class SingleLetterDensity {
 public:
  double pdf(double x) const;
  double cdf(double x) const;
  double inverse_cdf(double u) const;
  double mean() const;
  // Support [lo, hi]; pdf is zero outside. Speeds up per-bin sweeps.
  double support_lo() const;
  double support_hi() const;
  // Partial expectation G(x) = integral of t*pdf(t) over [0, x], when the
  // family has a closed form (nullopt means: integrate numerically).
  std::optional<double> partial_expectation(double x) const;
  std::string describe() const;

  // Maximin density (a x^{1/3} + b x^{4/3})^{-3/2}. The closed-form CDF
  // 2 sqrt(x) / (a sqrt(a + b x)) is cross-validated against quadrature at
  // construction.
  static SingleLetterDensity maximin(const MaximinConstants& constants);
  static SingleLetterDensity beta(double alpha, double beta);
  static SingleLetterDensity uniform_interval(double lo, double hi);
  // pdf required; cdf/inverse fall back to quadrature + root finding.
  static SingleLetterDensity custom(
      std::function<double(double)> pdf,
      std::function<double(double)> cdf = nullptr,
      double support_lo = 0.0, double support_hi = 1.0,
      std::string label = "custom");

  struct Impl;

 private:
  explicit SingleLetterDensity(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Marginal of a symmetric Dirichlet(alpha) on the K-simplex: Beta(alpha,
// (K-1) alpha).
SingleLetterDensity dirichlet_marginal(std::uint64_t K, double alpha);

}  // namespace simplexq
