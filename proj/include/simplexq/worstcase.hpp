#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "simplexq/prob_vector.hpp"
#include "simplexq/quantizer.hpp"

namespace simplexq {

enum class WorstCaseMethod { minimax, approx_minimax, power };

const char* to_string(WorstCaseMethod method);
WorstCaseMethod worst_case_method_from_string(const std::string& name);

// Closed-form guarantee on max KL over the simplex for midpoint decoding.
// When the guarantee's (K, N) precondition fails, `satisfied` is false,
// `reason` explains why, and no bound is claimed.
struct WorstCaseBound {
  WorstCaseMethod method = WorstCaseMethod::minimax;
  std::uint64_t K = 0;
  std::uint64_t N = 0;
  bool satisfied = false;
  std::string reason;          // set when satisfied is false
  double bound = 0.0;          // nats
  double err = 0.0;            // the bound's error term
  // Power method only: the cruder e^2 N^-2 log^2 K form, available once
  // N >= e log K.
  std::optional<double> simplified;
};

// The power-method bound applies to the exponent s = 1/log K. `sharpened`
// selects the tighter large-alphabet constant, which exists only for
// approx_minimax and needs K >= 55.
WorstCaseBound worstcase_bound(WorstCaseMethod method, std::uint64_t K,
                               std::uint64_t N, bool sharpened = false);

struct AdversarialResult {
  ProbVector x;        // worst candidate found
  double achieved;     // KL(x || normalized decode of x), nats
  std::uint64_t evaluations;
};

// Deterministic structured search for high-loss inputs: bin-edge-aligned
// vectors, one-hot-plus-dust, geometric ladders, then coordinate-wise hill
// climbing with the given evaluation budget. Returns the max found; makes
// no optimality claim. Requires midpoint decoding (the regime the
// worst-case guarantees cover) and K >= 2.
AdversarialResult adversarial_search(const Quantizer& q, std::uint64_t K,
                                     std::uint64_t budget = 10000);

}  // namespace simplexq
