#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "simplexq/maximin.hpp"

namespace simplexq {

enum class CompanderFamily {
  identity,
  power,
  minimax,
  approx_minimax,
  beta,
  l2sq_simplex,
  l1_simplex,
  tabulated,
  sqrt_blend,
};

// Certificate that f(x) - c * x^alpha is nondecreasing on [0,1] with
// alpha in (0, 1/2]. Families that admit one report it; it feeds the
// dominating constant (1/24) c^-2 alpha^-2 used by convergence checks.
struct PowerLawFloor {
  double c;
  double alpha;
};

// Strictly increasing map f: [0,1] -> [0,1] with f(0)=0, f(1)=1.
// Immutable value type; copies share the implementation.
class Compander {
 public:
  double forward(double x) const;     // f(x)
  double inverse(double y) const;     // f^{-1}(y)
  double derivative(double x) const;  // f'(x)

  CompanderFamily family() const;
  // Alphabet size the family was parameterized for; 0 when not applicable.
  std::uint64_t alphabet() const;
  std::optional<PowerLawFloor> power_law_floor() const;

  // One-line text record, round-trippable via from_record().
  std::string to_record() const;
  static Compander from_record(const std::string& line);

  static Compander identity();
  // f(x) = x^s, s in (0, 1]. Exponents above 1/2 are admitted (some losses
  // want them) but lack a square-root floor, so asymptotic KL guarantees do
  // not apply to them.
  static Compander power(double s);
  // f(x) = ArcSinh(sqrt(gamma x)) / ArcSinh(sqrt(gamma)), gamma = c K log K.
  static Compander minimax(const MaximinConstants& constants);
  // Same map with c pinned to 1/2; no mean solve needed.
  static Compander approx_minimax(std::uint64_t K);
  // f = I_x((alpha+1)/3, ((K-1) alpha + 2)/3), the map adapted to a
  // Dirichlet(alpha) marginal.
  static Compander beta(std::uint64_t K, double alpha);
  // Map minimizing asymptotic squared-L2 loss on the simplex.
  static Compander l2sq_simplex(std::uint64_t K);
  // Map minimizing worst-case asymptotic L1 loss; gamma solved from K or
  // supplied explicitly.
  static Compander l1_simplex(std::uint64_t K);
  static Compander l1_simplex(std::uint64_t K, double gamma);
  // Monotone table through (0,0)...(1,1), cubic interpolation between knots.
  static Compander tabulated(std::vector<double> xs, std::vector<double> fs);
  // (1-delta) f + delta sqrt(x): pulls any compander back into the regime
  // where a square-root floor certificate exists.
  static Compander sqrt_blend(const Compander& f, double delta);

  // Fast-path introspection for batch kernels.
  struct AsinhForm {
    double gamma;
    double inv_denom;  // 1 / ArcSinh(sqrt(gamma))
  };
  std::optional<AsinhForm> asinh_form() const;
  std::optional<double> power_exponent() const;

  struct Impl;

 private:
  explicit Compander(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Solves the mean constraint for the L1 worst-case prior parameter:
//   (gamma+1)/gamma^2 * (log(gamma+1) + 1/(gamma+1) - 1) = 1/K.
double solve_l1_gamma(std::uint64_t K);

}  // namespace simplexq
