#include "simplexq/compander.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "simplexq/detail/interp.hpp"
#include "simplexq/detail/special.hpp"
#include "simplexq/errors.hpp"

namespace simplexq {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

struct Compander::Impl {
  virtual ~Impl() = default;
  virtual double f(double x) const = 0;
  virtual double finv(double y) const = 0;
  virtual double fprime(double x) const = 0;
  virtual CompanderFamily family() const = 0;
  virtual std::uint64_t alphabet() const { return 0; }
  virtual std::optional<PowerLawFloor> floor() const { return std::nullopt; }
  virtual std::string record() const = 0;
};

namespace {

struct IdentityImpl final : Compander::Impl {
  double f(double x) const override { return x; }
  double finv(double y) const override { return y; }
  double fprime(double) const override { return 1.0; }
  CompanderFamily family() const override { return CompanderFamily::identity; }
  std::string record() const override { return "identity"; }
};

struct PowerImpl final : Compander::Impl {
  double s;
  explicit PowerImpl(double s_) : s(s_) {}
  double f(double x) const override { return std::pow(x, s); }
  double finv(double y) const override { return std::pow(y, 1.0 / s); }
  double fprime(double x) const override { return s * std::pow(x, s - 1.0); }
  CompanderFamily family() const override { return CompanderFamily::power; }
  std::optional<PowerLawFloor> floor() const override {
    if (s > 0.5) return std::nullopt;
    return PowerLawFloor{2.0 * s, 0.5};
  }
  std::string record() const override { return "power s=" + fmt(s); }
};

struct AsinhImpl final : Compander::Impl {
  CompanderFamily fam;
  std::uint64_t K;
  double c;
  double gamma;
  double denom;      // ArcSinh(sqrt(gamma))
  double inv_denom;  // 1 / denom

  AsinhImpl(CompanderFamily fam_, std::uint64_t K_, double c_, double gamma_)
      : fam(fam_), K(K_), c(c_), gamma(gamma_) {
    denom = std::log(std::sqrt(gamma) + std::sqrt(gamma + 1.0));
    inv_denom = 1.0 / denom;
  }
  double f(double x) const override {
    const double w = gamma * x;
    return clamp01(std::log(std::sqrt(w) + std::sqrt(w + 1.0)) * inv_denom);
  }
  double finv(double y) const override {
    const double s = std::sinh(y * denom);
    return clamp01(s * s / gamma);
  }
  double fprime(double x) const override {
    // d/dx ArcSinh(sqrt(gamma x)) = sqrt(gamma) / (2 sqrt(x) sqrt(1+gamma x))
    return inv_denom * std::sqrt(gamma) /
           (2.0 * std::sqrt(x) * std::sqrt(1.0 + gamma * x));
  }
  CompanderFamily family() const override { return fam; }
  std::uint64_t alphabet() const override { return K; }
  std::optional<PowerLawFloor> floor() const override {
    // f'(x) sqrt(x) is decreasing, so its value at x=1 certifies the floor.
    return PowerLawFloor{std::sqrt(gamma) * inv_denom / std::sqrt(1.0 + gamma),
                         0.5};
  }
  std::string record() const override {
    if (fam == CompanderFamily::minimax) {
      return "minimax K=" + std::to_string(K) + " c=" + fmt(c);
    }
    return "approx_minimax K=" + std::to_string(K);
  }
};

struct BetaImpl final : Compander::Impl {
  std::uint64_t K;
  double alpha;
  double abar, bbar;  // I_x(abar, bbar)
  double log_b;       // log B(abar, bbar)

  BetaImpl(std::uint64_t K_, double alpha_) : K(K_), alpha(alpha_) {
    abar = (alpha + 1.0) / 3.0;
    bbar = ((static_cast<double>(K) - 1.0) * alpha + 2.0) / 3.0;
    log_b = detail::log_beta(abar, bbar);
  }
  double f(double x) const override { return detail::betainc_reg(abar, bbar, x); }
  double finv(double y) const override { return detail::betainc_inv(abar, bbar, y); }
  double fprime(double x) const override {
    return std::exp((abar - 1.0) * std::log(x) + (bbar - 1.0) * std::log1p(-x) -
                    log_b);
  }
  CompanderFamily family() const override { return CompanderFamily::beta; }
  std::uint64_t alphabet() const override { return K; }
  std::string record() const override {
    return "beta K=" + std::to_string(K) + " alpha=" + fmt(alpha);
  }
};

struct L2Impl final : Compander::Impl {
  std::uint64_t K;
  explicit L2Impl(std::uint64_t K_) : K(K_) {}
  double f(double x) const override {
    const double k = static_cast<double>(K);
    if (K == 2) return x;  // limit of the formula as K -> 2
    return (std::sqrt(1.0 + k * (k - 2.0) * x) - 1.0) / (k - 2.0);
  }
  double finv(double y) const override {
    const double k = static_cast<double>(K);
    if (K == 2) return y;
    const double t = y * (k - 2.0) + 1.0;
    return clamp01((t * t - 1.0) / (k * (k - 2.0)));
  }
  double fprime(double x) const override {
    const double k = static_cast<double>(K);
    if (K == 2) return 1.0;
    return 0.5 * k / std::sqrt(1.0 + k * (k - 2.0) * x);
  }
  CompanderFamily family() const override {
    return CompanderFamily::l2sq_simplex;
  }
  std::uint64_t alphabet() const override { return K; }
  std::string record() const override {
    return "l2sq_simplex K=" + std::to_string(K);
  }
};

struct L1Impl final : Compander::Impl {
  std::uint64_t K;
  double gamma;
  double denom;  // log(gamma + 1)

  L1Impl(std::uint64_t K_, double gamma_) : K(K_), gamma(gamma_) {
    denom = std::log1p(gamma);
  }
  double f(double x) const override { return std::log1p(gamma * x) / denom; }
  double finv(double y) const override {
    return clamp01(std::expm1(y * denom) / gamma);
  }
  double fprime(double x) const override {
    return gamma / ((gamma * x + 1.0) * denom);
  }
  CompanderFamily family() const override { return CompanderFamily::l1_simplex; }
  std::uint64_t alphabet() const override { return K; }
  std::string record() const override {
    return "l1_simplex K=" + std::to_string(K) + " gamma=" + fmt(gamma);
  }
};

struct TabulatedImpl final : Compander::Impl {
  detail::MonotoneCubic interp;
  explicit TabulatedImpl(detail::MonotoneCubic in) : interp(std::move(in)) {}
  double f(double x) const override { return clamp01(interp(x)); }
  double finv(double y) const override { return interp.inverse(y); }
  double fprime(double x) const override { return interp.derivative(x); }
  CompanderFamily family() const override { return CompanderFamily::tabulated; }
  std::string record() const override {
    std::ostringstream out;
    out << "tabulated n=" << interp.knots().size();
    char buf[40];
    for (std::size_t i = 0; i < interp.knots().size(); ++i) {
      std::snprintf(buf, sizeof(buf), " %.17g %.17g", interp.knots()[i],
                    interp.values()[i]);
      out << buf;
    }
    return out.str();
  }
};

struct BlendImpl final : Compander::Impl {
  std::shared_ptr<const Compander::Impl> inner;
  double delta;

  BlendImpl(std::shared_ptr<const Compander::Impl> inner_, double delta_)
      : inner(std::move(inner_)), delta(delta_) {}
  double f(double x) const override {
    return clamp01((1.0 - delta) * inner->f(x) + delta * std::sqrt(x));
  }
  double finv(double y) const override {
    // Monotone in x; safeguarded Newton on the blend.
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0, x = y * y;
    for (int iter = 0; iter < 200; ++iter) {
      const double fx = f(x) - y;
      if (fx > 0.0) {
        hi = x;
      } else if (fx < 0.0) {
        lo = x;
      } else {
        return x;
      }
      const double d = fprime(x);
      double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double step = std::abs(next - x);
      x = next;
      if (step <= 1e-16 * std::max(x, 1e-300)) return x;
    }
    return x;
  }
  double fprime(double x) const override {
    return (1.0 - delta) * inner->fprime(x) + 0.5 * delta / std::sqrt(x);
  }
  CompanderFamily family() const override { return CompanderFamily::sqrt_blend; }
  std::uint64_t alphabet() const override { return inner->alphabet(); }
  std::optional<PowerLawFloor> floor() const override {
    return PowerLawFloor{delta, 0.5};
  }
  std::string record() const override {
    return "sqrt_blend delta=" + fmt(delta) + " | " + inner->record();
  }
};

}  // namespace

Compander::Compander(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double Compander::forward(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("Compander::forward: x must lie in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return impl_->f(x);
}

double Compander::inverse(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw DomainError("Compander::inverse: y must lie in [0,1]");
  }
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 1.0;
  return impl_->finv(y);
}

double Compander::derivative(double x) const {
  if (!(x > 0.0 && x <= 1.0)) {
    throw DomainError("Compander::derivative: x must lie in (0,1]");
  }
  return impl_->fprime(x);
}

CompanderFamily Compander::family() const { return impl_->family(); }
std::uint64_t Compander::alphabet() const { return impl_->alphabet(); }

std::optional<PowerLawFloor> Compander::power_law_floor() const {
  return impl_->floor();
}

std::string Compander::to_record() const { return impl_->record(); }

std::optional<Compander::AsinhForm> Compander::asinh_form() const {
  if (const auto* p = dynamic_cast<const AsinhImpl*>(impl_.get())) {
    return AsinhForm{p->gamma, p->inv_denom};
  }
  return std::nullopt;
}

std::optional<double> Compander::power_exponent() const {
  if (const auto* p = dynamic_cast<const PowerImpl*>(impl_.get())) {
    return p->s;
  }
  return std::nullopt;
}

Compander Compander::identity() {
  return Compander(std::make_shared<IdentityImpl>());
}

Compander Compander::power(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw DomainError("Compander::power: s must lie in (0,1]");
  }
  return Compander(std::make_shared<PowerImpl>(s));
}

Compander Compander::minimax(const MaximinConstants& constants) {
  if (constants.K < 2 || !(constants.r > 0.0)) {
    throw DomainError("Compander::minimax: invalid constants");
  }
  return Compander(std::make_shared<AsinhImpl>(
      CompanderFamily::minimax, constants.K, constants.c, constants.r));
}

Compander Compander::approx_minimax(std::uint64_t K) {
  if (K < 2) throw DomainError("Compander::approx_minimax: K must be >= 2");
  const double gamma =
      0.5 * static_cast<double>(K) * std::log(static_cast<double>(K));
  return Compander(std::make_shared<AsinhImpl>(CompanderFamily::approx_minimax,
                                               K, 0.5, gamma));
}

Compander Compander::beta(std::uint64_t K, double alpha) {
  if (K < 2) throw DomainError("Compander::beta: K must be >= 2");
  if (!(alpha > 0.0)) throw DomainError("Compander::beta: alpha must be > 0");
  return Compander(std::make_shared<BetaImpl>(K, alpha));
}

Compander Compander::l2sq_simplex(std::uint64_t K) {
  if (K < 2) throw DomainError("Compander::l2sq_simplex: K must be >= 2");
  return Compander(std::make_shared<L2Impl>(K));
}

Compander Compander::l1_simplex(std::uint64_t K, double gamma) {
  if (K < 2) throw DomainError("Compander::l1_simplex: K must be >= 2");
  if (!(gamma > 0.0)) {
    throw DomainError("Compander::l1_simplex: gamma must be > 0");
  }
  return Compander(std::make_shared<L1Impl>(K, gamma));
}

Compander Compander::l1_simplex(std::uint64_t K) {
  return l1_simplex(K, solve_l1_gamma(K));
}

Compander Compander::tabulated(std::vector<double> xs, std::vector<double> fs) {
  if (xs.size() < 2 || xs.size() != fs.size()) {
    throw DomainError("Compander::tabulated: need matching knot arrays");
  }
  if (xs.front() != 0.0 || fs.front() != 0.0 || xs.back() != 1.0 ||
      fs.back() != 1.0) {
    throw DomainError("Compander::tabulated: knots must span (0,0)..(1,1)");
  }
  return Compander(std::make_shared<TabulatedImpl>(
      detail::MonotoneCubic(std::move(xs), std::move(fs))));
}

Compander Compander::sqrt_blend(const Compander& f, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("Compander::sqrt_blend: delta must lie in (0,1)");
  }
  return Compander(std::make_shared<BlendImpl>(f.impl_, delta));
}

namespace {

double parse_kv(const std::string& tok, const char* key) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) {
    throw DomainError("Compander record: expected " + prefix + ", got " + tok);
  }
  return std::stod(tok.substr(prefix.size()));
}

}  // namespace

Compander Compander::from_record(const std::string& line) {
  std::istringstream in(line);
  std::string fam;
  if (!(in >> fam)) throw DomainError("Compander record: empty");
  if (fam == "identity") return identity();
  if (fam == "power") {
    std::string tok;
    in >> tok;
    return power(parse_kv(tok, "s"));
  }
  if (fam == "minimax") {
    std::string k_tok, c_tok;
    in >> k_tok >> c_tok;
    const auto K = static_cast<std::uint64_t>(parse_kv(k_tok, "K"));
    return minimax(MaximinConstants::with_c(K, parse_kv(c_tok, "c")));
  }
  if (fam == "approx_minimax") {
    std::string k_tok;
    in >> k_tok;
    return approx_minimax(static_cast<std::uint64_t>(parse_kv(k_tok, "K")));
  }
  if (fam == "beta") {
    std::string k_tok, a_tok;
    in >> k_tok >> a_tok;
    return beta(static_cast<std::uint64_t>(parse_kv(k_tok, "K")),
                parse_kv(a_tok, "alpha"));
  }
  if (fam == "l2sq_simplex") {
    std::string k_tok;
    in >> k_tok;
    return l2sq_simplex(static_cast<std::uint64_t>(parse_kv(k_tok, "K")));
  }
  if (fam == "l1_simplex") {
    std::string k_tok, g_tok;
    in >> k_tok >> g_tok;
    return l1_simplex(static_cast<std::uint64_t>(parse_kv(k_tok, "K")),
                      parse_kv(g_tok, "gamma"));
  }
  if (fam == "tabulated") {
    std::string n_tok;
    in >> n_tok;
    const auto n = static_cast<std::size_t>(parse_kv(n_tok, "n"));
    std::vector<double> xs(n), fs(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(in >> xs[i] >> fs[i])) {
        throw DomainError("Compander record: truncated table");
      }
    }
    return tabulated(std::move(xs), std::move(fs));
  }
  if (fam == "sqrt_blend") {
    std::string d_tok, bar;
    in >> d_tok >> bar;
    if (bar != "|") throw DomainError("Compander record: malformed blend");
    std::string rest;
    std::getline(in, rest);
    return sqrt_blend(from_record(rest), parse_kv(d_tok, "delta"));
  }
  throw DomainError("Compander record: unknown family " + fam);
}

double solve_l1_gamma(std::uint64_t K) {
  if (K < 2) throw DomainError("solve_l1_gamma: K must be >= 2");
  const double target = 1.0 / static_cast<double>(K);
  // Mean of the normalized prior (alpha x + beta)^{-2} as a function of
  // gamma = alpha/beta; strictly decreasing from 1/2 at gamma -> 0.
  auto mean = [](double g) {
    if (g < 1e-8) return 0.5 - g / 3.0;  // series; avoids cancellation
    return (g + 1.0) / (g * g) * (std::log1p(g) + 1.0 / (g + 1.0) - 1.0);
  };
  if (K == 2) return 1e-12;  // degenerate: the map collapses to identity
  double lo = 1e-9, hi = 10.0;
  while (mean(hi) > target) hi *= 4.0;
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mean(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace simplexq
