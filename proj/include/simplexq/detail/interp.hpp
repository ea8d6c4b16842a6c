#pragma once

#include <cstddef>
#include <vector>

namespace simplexq::detail {

// Monotone cubic Hermite interpolant (Fritsch-Butland tangents) through
// strictly increasing data. Preserves monotonicity of the data, so the
// interpolant is invertible on its range.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double derivative(double x) const;
  // Inverse of a strictly increasing interpolant: locate the segment by
  // binary search, then safeguarded Newton within it.
  double inverse(double y) const;

  const std::vector<double>& knots() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> xs_, ys_, tangents_;
};

}  // namespace simplexq::detail
