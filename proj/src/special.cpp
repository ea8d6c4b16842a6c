#include "simplexq/detail/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexq/errors.hpp"

namespace simplexq::detail {
namespace {

// Continued fraction for the incomplete beta, modified Lentz scheme.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("betainc: continued fraction did not converge (a=" +
                       std::to_string(a) + " b=" + std::to_string(b) +
                       " x=" + std::to_string(x) + ")");
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double betainc_reg(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("betainc: shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("betainc: x must lie in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double betainc_inv(double a, double b, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("betainc_inv: p must lie in [0,1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  double lo = 0.0, hi = 1.0;
  double x = 0.5;
  // Crude mean-based start keeps Newton in the right region.
  const double mean = a / (a + b);
  if (mean > 0.0 && mean < 1.0) x = mean;

  const double log_norm = -log_beta(a, b);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = betainc_reg(a, b, x) - p;
    if (fx > 0.0) {
      hi = x;
    } else if (fx < 0.0) {
      lo = x;
    } else {
      return x;
    }
    // Density I_x'(a,b); vanishes at the endpoints for a,b > 1, so guard it.
    const double logpdf =
        log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
    double next;
    if (logpdf > -700.0) {
      next = x - fx / std::exp(logpdf);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-13 * x || hi - lo <= 1e-13 * x) return x;
  }
  return x;
}

}  // namespace simplexq::detail
