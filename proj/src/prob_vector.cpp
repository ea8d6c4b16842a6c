#include "simplexq/prob_vector.hpp"

#include <cmath>
#include <string>

#include "simplexq/errors.hpp"
#include "simplexq/kernels.hpp"

namespace simplexq {

ProbVector ProbVector::validated(std::vector<double> entries) {
  if (entries.empty()) {
    throw DomainError("ProbVector: empty vector");
  }
  for (double v : entries) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("ProbVector: entries must be finite and nonnegative");
    }
  }
  const double sum = kernels::active_ops().sum(entries.data(), entries.size());
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("ProbVector: entries sum to " + std::to_string(sum) +
                      ", expected 1 within 1e-9");
  }
  return ProbVector(std::move(entries));
}

ProbVector ProbVector::normalized(std::vector<double> entries) {
  if (entries.empty()) {
    throw DomainError("ProbVector: empty vector");
  }
  double sum = 0.0;
  for (double v : entries) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("ProbVector: entries must be finite and nonnegative");
    }
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw DomainError("ProbVector: cannot normalize, sum is zero or overflow");
  }
  const double inv = 1.0 / sum;
  for (double& v : entries) v *= inv;
  return ProbVector(std::move(entries));
}

}  // namespace simplexq
