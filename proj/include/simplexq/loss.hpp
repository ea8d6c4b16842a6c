#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "simplexq/compander.hpp"
#include "simplexq/density.hpp"
#include "simplexq/detail/rng.hpp"
#include "simplexq/maximin.hpp"
#include "simplexq/prob_vector.hpp"
#include "simplexq/quantizer.hpp"

namespace simplexq {

// Sum over i with x_i > 0 of x_i log(x_i / z_i), in nats. Returns +inf when
// some x_i > 0 faces z_i = 0 (the infinite-divergence signal).
double kl_divergence(const ProbVector& x, const ProbVector& z);

struct LossReport {
  std::string method;
  std::uint64_t K = 0;
  std::uint64_t N = 0;
  int b = 0;  // bit width when N = 2^b (or the float width); 0 otherwise
  double nats = 0.0;            // mean KL of x against the normalized decode
  double bits_per_entry = 0.0;  // nats / (K ln 2)
  double raw_loss = 0.0;        // mean of sum x_i log(x_i / y_i), unnormalized
  double raw_stderr = 0.0;
  std::uint64_t trials = 0;
  double stderr_nats = 0.0;
  // Trials with infinite divergence: counted, excluded from the means.
  std::uint64_t infinite_events = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Exact single-letter loss E[X log(X/ytilde(X))] under density p with
// centroid decoding: per bin, integral of p(x) (x log(x/y) - (x - y)) with
// y the bin centroid. The correction term integrates to zero at the exact
// centroid, so the integrand is pointwise nonnegative and the bin losses
// accumulate without cancellation.
double single_letter_loss(const SingleLetterDensity& p, const Compander& f,
                          std::uint64_t N);

// Monte-Carlo counterpart: draws X ~ p, quantizes with q (which should use
// centroid decoding under p), and averages the same nonnegative per-draw
// statistic x log(x/y) - (x - y). Its expectation is exactly the
// single-letter loss because E[y(X)] = E[X] under centroid decoding, and the
// per-draw variance is comparable to the mean (unlike x log(x/y) alone,
// whose first-order term only cancels in expectation).
McEstimate single_letter_loss_mc(const SingleLetterDensity& p,
                                 const Quantizer& q, std::uint64_t trials,
                                 Rng& rng);

// Monte-Carlo expected loss over a prior sampler: mean KL(x, z) after
// quantize + normalize, with standard error; raw_loss tracks the
// unnormalized divergence. Deterministic given the RNG state.
LossReport expected_loss_mc(const std::function<ProbVector(Rng&)>& sampler,
                            const Quantizer& q, std::uint64_t trials, Rng& rng,
                            std::string method = "");

// Same loop with an entrywise roundtrip map (float formats) instead of a
// quantizer: y_i = roundtrip(x_i), z = y / sum(y).
LossReport expected_loss_roundtrip_mc(
    const std::function<ProbVector(Rng&)>& sampler,
    const std::function<double(double)>& roundtrip, std::uint64_t trials,
    Rng& rng, std::string method = "");

// Asymptotic loss (1/24) integral of p(x) f'(x)^-2 x^-1 dx. Divergent
// integrals (identity compander against a density positive at 0, and worse)
// return +inf rather than throwing: divergence is an answer, not a failure.
double asymptotic_loss(const SingleLetterDensity& p, const Compander& f);

struct OptimalCompander {
  Compander f;      // tabulated f_p with derivative proportional to (p/x)^(1/3)
  double loss = 0;  // (1/24) (integral of (p/x)^(1/3))^3
};

// Best compander against a known density, with its closed-form loss. The
// returned map need not admit a square-root floor; callers wanting the
// certified class can blend via Compander::sqrt_blend.
OptimalCompander optimal_compander(const SingleLetterDensity& p);

// Exact saddle value (1/24) (2 ArcSinh(sqrt(r)) / sqrt(b))^3. Equals the
// asymptotic loss of the minimax compander against every mean-1/K density.
double minimax_saddle_loss(const MaximinConstants& constants);

// N^2 * single_letter_loss(p, f, N) for each N (ascending).
std::vector<double> convergence_probe(const SingleLetterDensity& p,
                                      const Compander& f,
                                      const std::vector<std::uint64_t>& Ns);

enum class AltMetric { l1, l2sq };
double alt_loss(AltMetric metric, const ProbVector& x, const ProbVector& z);

// Asymptotic loss of the power compander x^s against a point mass at 1/K:
// (1/24) s^-2 K^(2s-1).
double power_point_loss(std::uint64_t K, double s);

// Loss inflation factor of pinning c to 1/2 instead of the solved value:
// epsilon = max(2c - 1, 1/(2c) - 1).
double approx_minimax_excess(double c);

}  // namespace simplexq
