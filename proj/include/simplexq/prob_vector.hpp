#pragma once

#include <cstddef>
#include <vector>

namespace simplexq {

// Probability vector: nonnegative entries summing to 1 within 1e-9,
// validated at construction. Exact zeros are meaningful (they get the
// reserved code downstream), so no smoothing is ever applied.
class ProbVector {
 public:
  static ProbVector validated(std::vector<double> entries);
  // Rescales nonnegative entries by their sum. Throws if the sum is zero,
  // not finite, or any entry is negative.
  static ProbVector normalized(std::vector<double> entries);

  const std::vector<double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }

 private:
  explicit ProbVector(std::vector<double> entries)
      : entries_(std::move(entries)) {}
  std::vector<double> entries_;
};

}  // namespace simplexq
