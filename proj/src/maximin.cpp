#include "simplexq/maximin.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "simplexq/errors.hpp"

namespace simplexq {

double MaximinConstants::mean_from_ratio(double r) {
  // asinh(sqrt(r)) written out via the log identity; sqrt(r)+sqrt(r+1)
  // involves no cancellation for r > 0.
  const double s = std::sqrt(r);
  const double asinh_s = std::log(s + std::sqrt(r + 1.0));
  return (-1.0 + std::sqrt(1.0 / r + 1.0) * asinh_s) / r;
}

MaximinConstants MaximinConstants::with_c(std::uint64_t K, double c) {
  if (K < 2) throw DomainError("MaximinConstants: K must be at least 2");
  if (!(c > 0.0)) throw DomainError("MaximinConstants: c must be positive");
  MaximinConstants out;
  out.K = K;
  out.c = c;
  out.r = c * static_cast<double>(K) * std::log(static_cast<double>(K));
  out.a = std::cbrt(4.0 / (out.r + 1.0));
  out.b = 4.0 / (out.a * out.a) - out.a;
  return out;
}

MaximinConstants MaximinConstants::solve(std::uint64_t K) {
  if (K <= 4) {
    throw DomainError("MaximinConstants::solve requires K > 4");
  }
  const double target = 1.0 / static_cast<double>(K);
  const double klogk =
      static_cast<double>(K) * std::log(static_cast<double>(K));
  // E[X] is strictly decreasing in r, hence in c.
  auto excess = [&](double c) { return mean_from_ratio(c * klogk) - target; };
  double lo = 0.2, hi = 0.8;
  double flo = excess(lo);
  double fhi = excess(hi);
  if (!(flo > 0.0) || !(fhi < 0.0)) {
    throw NumericalError("MaximinConstants: bracket [0.2, 0.8] does not "
                         "straddle the mean constraint for K=" +
                         std::to_string(K));
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double fmid = excess(mid);
    if (std::abs(fmid) <= 1e-13 && hi - lo <= 1e-12) break;
    if (fmid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return with_c(K, mid);
}

std::string MaximinConstants::to_record() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%llu %.17g %.17g %.17g",
                static_cast<unsigned long long>(K), c, a, b);
  return buf;
}

MaximinConstants MaximinConstants::from_record(const std::string& line) {
  std::istringstream in(line);
  unsigned long long k = 0;
  double c = 0, a = 0, b = 0;
  if (!(in >> k >> c >> a >> b)) {
    throw DomainError("MaximinConstants: malformed record: " + line);
  }
  MaximinConstants out = with_c(k, c);
  // a and b are rederived from c; the stored copies are a consistency check.
  if (std::abs(out.a - a) > 1e-9 * out.a || std::abs(out.b - b) > 1e-9 * out.b) {
    throw DomainError("MaximinConstants: record inconsistent with c: " + line);
  }
  return out;
}

}  // namespace simplexq
