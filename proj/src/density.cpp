#include "simplexq/density.hpp"

#include <cmath>
#include <utility>

#include "simplexq/detail/quadrature.hpp"
#include "simplexq/detail/special.hpp"
#include "simplexq/errors.hpp"

namespace simplexq {

struct SingleLetterDensity::Impl {
  virtual ~Impl() = default;
  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double inv_cdf(double u) const = 0;
  virtual double mean() const = 0;
  virtual double lo() const { return 0.0; }
  virtual double hi() const { return 1.0; }
  virtual std::optional<double> partial_exp(double) const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

namespace {

struct MaximinImpl final : SingleLetterDensity::Impl {
  MaximinConstants k;

  explicit MaximinImpl(const MaximinConstants& constants) : k(constants) {
    // Cross-check the closed-form CDF against quadrature before trusting it.
    for (double x : {0.13, 0.71}) {
      // substitute t = u^2 to tame the x^{-1/2} endpoint.
      const double quad = detail::integrate_or_throw(
          [&](double u) { return 2.0 * u * pdf(u * u); }, 0.0, std::sqrt(x),
          {1e-13, 1e-11, 60});
      const double closed = cdf(x);
      if (std::abs(quad - closed) > 1e-8 * closed) {
        throw NumericalError("maximin density: closed-form CDF mismatch");
      }
    }
  }
  double pdf(double x) const override {
    if (x <= 0.0 || x > 1.0) return 0.0;
    // (a x^{1/3} + b x^{4/3})^{-3/2} = x^{-1/2} (a + b x)^{-3/2}
    return 1.0 / (std::sqrt(x) * std::pow(k.a + k.b * x, 1.5));
  }
  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 2.0 * std::sqrt(x) / (k.a * std::sqrt(k.a + k.b * x));
  }
  double inv_cdf(double u) const override {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // Solve u = 2 sqrt(x/(a+bx))/a: x/(a+bx) = (u a/2)^2.
    const double w = u * k.a * 0.5;
    const double w2 = w * w;
    return w2 * k.a / (1.0 - w2 * k.b);
  }
  double mean() const override { return 1.0 / static_cast<double>(k.K); }
  std::optional<double> partial_exp(double x) const override {
    if (x <= 0.0) return 0.0;
    x = std::min(x, 1.0);
    // integral of sqrt(t) (a+bt)^{-3/2} dt from 0 to x
    const double s = std::sqrt(x);
    const double ratio = k.b * x / k.a;
    return -2.0 * s / (k.b * std::sqrt(k.a + k.b * x)) +
           2.0 * std::log(std::sqrt(ratio) + std::sqrt(ratio + 1.0)) /
               (k.b * std::sqrt(k.b));
  }
  std::string describe() const override {
    return "maximin K=" + std::to_string(k.K);
  }
};

struct BetaDensityImpl final : SingleLetterDensity::Impl {
  double a, b, log_norm;

  BetaDensityImpl(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw DomainError("beta density: shapes must be positive");
    }
    log_norm = -detail::log_beta(a, b);
  }
  double pdf(double x) const override {
    if (x <= 0.0 || x >= 1.0) {
      // Endpoint density can still be finite (a=1 or b=1); take limits.
      if (x == 0.0 && a == 1.0) return std::exp(log_norm);
      if (x == 1.0 && b == 1.0) return std::exp(log_norm);
      return 0.0;
    }
    return std::exp(log_norm + (a - 1.0) * std::log(x) +
                    (b - 1.0) * std::log1p(-x));
  }
  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return detail::betainc_reg(a, b, x);
  }
  double inv_cdf(double u) const override { return detail::betainc_inv(a, b, u); }
  double mean() const override { return a / (a + b); }
  std::optional<double> partial_exp(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return mean();
    // integral t pdf = mean * I_x(a+1, b)
    return mean() * detail::betainc_reg(a + 1.0, b, x);
  }
  std::string describe() const override {
    return "beta(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
};

struct UniformImpl final : SingleLetterDensity::Impl {
  double lo_, hi_, inv_len;

  UniformImpl(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
      throw DomainError("uniform density: need 0 <= lo < hi <= 1");
    }
    inv_len = 1.0 / (hi - lo);
  }
  double pdf(double x) const override {
    return (x >= lo_ && x <= hi_) ? inv_len : 0.0;
  }
  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return (x - lo_) * inv_len;
  }
  double inv_cdf(double u) const override {
    if (u <= 0.0) return lo_;
    if (u >= 1.0) return hi_;
    return lo_ + u * (hi_ - lo_);
  }
  double mean() const override { return 0.5 * (lo_ + hi_); }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  std::optional<double> partial_exp(double x) const override {
    if (x <= lo_) return 0.0;
    x = std::min(x, hi_);
    return 0.5 * (x * x - lo_ * lo_) * inv_len;
  }
  std::string describe() const override {
    return "uniform[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
  }
};

struct CustomImpl final : SingleLetterDensity::Impl {
  std::function<double(double)> pdf_fn;
  std::function<double(double)> cdf_fn;  // may be empty
  double lo_, hi_;
  double mean_;
  std::string label;

  CustomImpl(std::function<double(double)> pdf,
             std::function<double(double)> cdf, double lo, double hi,
             std::string label_)
      : pdf_fn(std::move(pdf)),
        cdf_fn(std::move(cdf)),
        lo_(lo),
        hi_(hi),
        label(std::move(label_)) {
    if (!pdf_fn) throw DomainError("custom density: pdf required");
    if (!(lo_ >= 0.0 && hi_ <= 1.0 && lo_ < hi_)) {
      throw DomainError("custom density: bad support");
    }
    mean_ = detail::integrate_or_throw(
        [&](double t) { return t * pdf_fn(t); }, lo_, hi_, {1e-13, 1e-10, 60});
  }
  double pdf(double x) const override {
    return (x >= lo_ && x <= hi_) ? pdf_fn(x) : 0.0;
  }
  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    if (cdf_fn) return cdf_fn(x);
    return detail::integrate_or_throw(pdf_fn, lo_, x, {1e-13, 1e-10, 60});
  }
  double inv_cdf(double u) const override {
    if (u <= 0.0) return lo_;
    if (u >= 1.0) return hi_;
    double a = lo_, b = hi_;
    for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, b); ++iter) {
      const double mid = 0.5 * (a + b);
      if (cdf(mid) < u) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  }
  double mean() const override { return mean_; }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  std::string describe() const override { return label; }
};

}  // namespace

SingleLetterDensity::SingleLetterDensity(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

double SingleLetterDensity::pdf(double x) const { return impl_->pdf(x); }
double SingleLetterDensity::cdf(double x) const { return impl_->cdf(x); }
double SingleLetterDensity::inverse_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("inverse_cdf: u must lie in [0,1]");
  }
  return impl_->inv_cdf(u);
}
double SingleLetterDensity::mean() const { return impl_->mean(); }
double SingleLetterDensity::support_lo() const { return impl_->lo(); }
double SingleLetterDensity::support_hi() const { return impl_->hi(); }
std::optional<double> SingleLetterDensity::partial_expectation(double x) const {
  return impl_->partial_exp(x);
}
std::string SingleLetterDensity::describe() const { return impl_->describe(); }

SingleLetterDensity SingleLetterDensity::maximin(
    const MaximinConstants& constants) {
  return SingleLetterDensity(std::make_shared<MaximinImpl>(constants));
}

SingleLetterDensity SingleLetterDensity::beta(double alpha, double beta) {
  return SingleLetterDensity(std::make_shared<BetaDensityImpl>(alpha, beta));
}

SingleLetterDensity SingleLetterDensity::uniform_interval(double lo, double hi) {
  return SingleLetterDensity(std::make_shared<UniformImpl>(lo, hi));
}

SingleLetterDensity SingleLetterDensity::custom(
    std::function<double(double)> pdf, std::function<double(double)> cdf,
    double support_lo, double support_hi, std::string label) {
  return SingleLetterDensity(std::make_shared<CustomImpl>(
      std::move(pdf), std::move(cdf), support_lo, support_hi,
      std::move(label)));
}

SingleLetterDensity dirichlet_marginal(std::uint64_t K, double alpha) {
  if (K < 2) throw DomainError("dirichlet_marginal: K must be >= 2");
  if (!(alpha > 0.0)) throw DomainError("dirichlet_marginal: alpha > 0");
  return SingleLetterDensity::beta(
      alpha, (static_cast<double>(K) - 1.0) * alpha);
}

}  // namespace simplexq
