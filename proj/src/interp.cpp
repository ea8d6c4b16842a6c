#include "simplexq/detail/interp.hpp"

#include <algorithm>
#include <cmath>

#include "simplexq/errors.hpp"

namespace simplexq::detail {

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) {
    throw DomainError("MonotoneCubic: need at least two matching knots");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1]) || !(ys_[i] >= ys_[i - 1])) {
      throw DomainError("MonotoneCubic: data must be increasing");
    }
  }
  tangents_.resize(n);
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
  }
  tangents_[0] = d[0];
  tangents_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      tangents_[i] = 0.0;
    } else {
      // Fritsch-Butland weighted harmonic mean; keeps the cubic monotone.
      const double h0 = xs_[i] - xs_[i - 1];
      const double h1 = xs_[i + 1] - xs_[i];
      tangents_[i] = 3.0 * (h0 + h1) /
                     ((2.0 * h1 + h0) / d[i - 1] + (h1 + 2.0 * h0) / d[i]);
    }
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  if (i == 0) return 0;
  if (i >= xs_.size()) return xs_.size() - 2;
  return i - 1;
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * ys_[i] + h * h10 * tangents_[i] + h01 * ys_[i + 1] +
         h * h11 * tangents_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  return dh00 * ys_[i] + dh10 * tangents_[i] + dh01 * ys_[i + 1] +
         dh11 * tangents_[i + 1];
}

double MonotoneCubic::inverse(double y) const {
  const double ylo = ys_.front();
  const double yhi = ys_.back();
  if (y <= ylo) return xs_.front();
  if (y >= yhi) return xs_.back();
  // Segment by value.
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  std::size_t i = static_cast<std::size_t>(it - ys_.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i + 1 >= ys_.size()) i = ys_.size() - 2;
  double lo = xs_[i], hi = xs_[i + 1];
  double x = lo + (hi - lo) * ((y - ys_[i]) / std::max(ys_[i + 1] - ys_[i],
                                                       1e-300));
  for (int iter = 0; iter < 100; ++iter) {
    const double fx = (*this)(x)-y;
    if (fx > 0.0) {
      hi = x;
    } else if (fx < 0.0) {
      lo = x;
    } else {
      return x;
    }
    const double dfx = derivative(x);
    double next = (dfx > 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-15 * std::max(std::abs(x), 1e-30) || hi - lo < 1e-300) {
      return x;
    }
  }
  return x;
}

}  // namespace simplexq::detail
