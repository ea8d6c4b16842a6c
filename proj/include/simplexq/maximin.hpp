#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace simplexq {

// Constants (c, a, b) of the maximin single-letter density
//   p(x) = (a x^{1/3} + b x^{4/3})^{-3/2}
// on [0,1]. They are tied together by the normalization a*sqrt(a+b) = 2 and
// by the mean constraint E[X] = 1/K, which pins c through r = c K log K,
//   a = (4 / (r + 1))^{1/3},   b = 4/a^2 - a   (so b/a = r exactly).
struct MaximinConstants {
  std::uint64_t K = 0;
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double r = 0.0;  // c * K * log K

  // Solves E[X] = 1/K for c by bisection on [0.2, 0.8] (at most 200
  // iterations, |E - 1/K| tolerance 1e-13). Requires K > 4: below that the
  // mean constraint has no solution with c in the bracket.
  static MaximinConstants solve(std::uint64_t K);

  // Constants derived from an explicitly chosen c (no mean solve). This is
  // how the simplified variant with c = 1/2 is built, and it lets tests pin c.
  static MaximinConstants with_c(std::uint64_t K, double c);

  // Closed-form mean of the density determined by ratio r = b/a:
  //   E[X] = -1/r + sqrt(1/r + 1) * log(sqrt(r) + sqrt(r+1)) / r.
  static double mean_from_ratio(double r);

  // One-line text record "K c a b" with full round-trip precision.
  std::string to_record() const;
  static MaximinConstants from_record(const std::string& line);
};

}  // namespace simplexq
