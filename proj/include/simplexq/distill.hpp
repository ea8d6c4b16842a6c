#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "simplexq/prob_vector.hpp"
#include "simplexq/quantizer.hpp"

namespace simplexq {

// Finite joint distribution over [K] x [|B|], row-major, mass 1 to 1e-12.
// Marginals are cached at construction; column(b) is the conditional
// distribution of A given B = b.
class JointDistribution {
 public:
  static JointDistribution validated(std::vector<double> matrix,
                                     std::uint64_t alphabet_a,
                                     std::uint64_t alphabet_b);
  // Rows of "a,b,probability" (0-based indices). An optional header line and
  // '#' comments are skipped; a repeated (a,b) cell is an error.
  static JointDistribution from_csv(std::istream& in);

  std::uint64_t alphabet_a() const { return ka_; }
  std::uint64_t alphabet_b() const { return kb_; }
  double prob(std::uint64_t a, std::uint64_t b) const {
    return matrix_[a * kb_ + b];
  }
  const std::vector<double>& marginal_a() const { return pa_; }
  const std::vector<double>& marginal_b() const { return pb_; }
  // Throws DomainError when P_B(b) = 0 (the conditional is undefined).
  ProbVector column(std::uint64_t b) const;

 private:
  JointDistribution(std::vector<double> matrix, std::uint64_t ka,
                    std::uint64_t kb);
  std::vector<double> matrix_;
  std::uint64_t ka_, kb_;
  std::vector<double> pa_, pb_;
};

// I(A;B) in nats, with 0 log 0 = 0.
double mutual_information(const JointDistribution& j);

struct PushforwardAtom {
  ProbVector x;
  double mass;
  std::vector<std::uint64_t> columns;  // the b's merged into this atom
};

// The prior over conditional columns induced by the B marginal. Columns
// equal entrywise within 1e-12 merge into one atom; zero-mass columns are
// dropped.
std::vector<PushforwardAtom> pushforward_prior(const JointDistribution& j);

// A labeling h of B into cells, with decoding-optimal representatives
// z_cell = E[x(B) | h(B) = cell]. Both losses are reported: info_loss is
// I(A;B) - I(A;h(B)); kl_loss is sum_b P_B(b) KL(x(b) || z_{h(b)}). For
// decoding-optimal separable labelings the two coincide.
struct DistillOutcome {
  std::vector<std::uint64_t> labels;         // per b; zero-mass b gets 0
  std::vector<ProbVector> representatives;   // per realized label
  double info_loss = 0.0;                    // nats
  double kl_loss = 0.0;                      // nats
};

// Labels each b by the code tuple of its column under the entrywise scalar
// quantizer (effective codebook (N+1)^K), then rebuilds representatives as
// cell conditional expectations. Throws NumericalError if the two loss
// routes disagree beyond 1e-10: they are equal by construction here.
DistillOutcome distiller_from_quantizer(const JointDistribution& j,
                                        const Quantizer& q);

// Exhaustive minimum of info_loss over separable labelings into at most M
// cells (identical columns share a label). Requires M^#distinct <= 1e7.
DistillOutcome brute_force_distiller(const JointDistribution& j,
                                     std::uint64_t M);

// Same enumeration, minimizing kl_loss instead: the best M-point
// decoding-optimal quantizer of the push-forward prior.
DistillOutcome brute_force_quantizer(const JointDistribution& j,
                                     std::uint64_t M);

struct DegradingCostBound {
  double value = 0.0;
  bool available = false;
  std::string reason;  // set when unavailable
};

// Upper bounds on the degrading cost DC(K, M), all in nats and evaluated in
// log space (M enters as log M, so astronomically large M is fine).
struct DegradingCostBounds {
  std::uint64_t K = 0;
  double log_m = 0.0;
  DegradingCostBound compander;        // (1 + 18 loglogK/logK) M^{-2/K} log^2 K
  DegradingCostBound covering_linear;  // 1268 (K-1) M^{-2/(K-1)}
  DegradingCostBound covering_log;     // 800 (log K) M^{-2/(K-1)}
  std::string smallest;                // name of the smallest available bound
};

// Requires K >= 5 and log_m > 0. Individual bounds whose own preconditions
// fail are flagged unavailable rather than claimed.
DegradingCostBounds degrading_cost_bounds(std::uint64_t K, double log_m);

}  // namespace simplexq
