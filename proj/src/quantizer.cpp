#include "simplexq/quantizer.hpp"

#include <cmath>
#include <mutex>

#include "simplexq/detail/kernels_impl.hpp"
#include "simplexq/detail/quadrature.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/kernels.hpp"

namespace simplexq {

struct Quantizer::Cache {
  std::once_flag once;
  std::vector<double> table;
};

namespace {

// Reconstruction value for the bin (lo, hi]. Centroid mode computes
// E[X | X in bin] against the density, preferring closed-form partial
// expectations; bins the density never touches fall back to the midpoint.
double reconstruct_value(DecodeMode mode,
                         const std::optional<SingleLetterDensity>& density,
                         double lo, double hi) {
  if (mode == DecodeMode::midpoint) return 0.5 * (lo + hi);
  const SingleLetterDensity& d = *density;
  const double a = std::max(lo, d.support_lo());
  const double b = std::min(hi, d.support_hi());
  if (!(a < b)) return 0.5 * (lo + hi);

  double mass, moment;
  if (auto g_hi = d.partial_expectation(b)) {
    mass = d.cdf(b) - d.cdf(a);
    moment = *g_hi - *d.partial_expectation(a);
  } else {
    const detail::QuadOptions opts{1e-16, 1e-10, 40};
    const auto m0 = detail::integrate([&](double t) { return d.pdf(t); }, a, b, opts);
    const auto m1 =
        detail::integrate([&](double t) { return t * d.pdf(t); }, a, b, opts);
    if (!m0.converged || !m1.converged) return 0.5 * (lo + hi);
    mass = m0.value;
    moment = m1.value;
  }
  if (!(mass > 1e-300) || !std::isfinite(moment)) return 0.5 * (lo + hi);
  double c = moment / mass;
  // Cancellation in the differences above cannot push us outside the bin.
  if (c < a) c = a;
  if (c > b) c = b;
  return c;
}

}  // namespace

Quantizer::Quantizer(Compander f, std::uint64_t levels, DecodeMode mode,
                     std::optional<SingleLetterDensity> density, bool zero_bin)
    : f_(std::move(f)),
      levels_(levels),
      mode_(mode),
      density_(std::move(density)),
      zero_bin_(zero_bin),
      cache_(std::make_shared<Cache>()) {
  if (levels_ == 0) throw DomainError("quantizer: need at least one level");
  if (levels_ > (1ull << 53)) {
    throw DomainError("quantizer: level count exceeds exact double range");
  }
  if (mode_ == DecodeMode::centroid && !density_) {
    throw DomainError("quantizer: centroid decoding needs a density");
  }
}

std::uint64_t Quantizer::encode(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("encode: input must lie in [0,1]");
  }
  const double N = static_cast<double>(levels_);
  if (auto af = f_.asinh_form()) {
    return kernels::encode_asinh_one(x, af->gamma, af->inv_denom, N, zero_bin_);
  }
  if (f_.family() == CompanderFamily::identity) {
    return kernels::encode_identity_one(x, N, zero_bin_);
  }
  if (auto s = f_.power_exponent()) {
    return kernels::encode_power_one(x, *s, N, zero_bin_);
  }
  if (x == 0.0) return zero_bin_ ? 0 : 1;
  double v = std::ceil(f_.forward(x) * N);
  if (v < 1.0) v = 1.0;
  if (v > N) v = N;
  return static_cast<std::uint64_t>(v);
}

void Quantizer::encode_batch(const double* x, std::size_t n,
                             std::uint64_t* codes) const {
  const auto& ops = kernels::active_ops();
  const double N = static_cast<double>(levels_);
  if (auto af = f_.asinh_form()) {
    ops.encode_asinh(x, n, af->gamma, af->inv_denom, N, zero_bin_, codes);
    return;
  }
  if (f_.family() == CompanderFamily::identity) {
    ops.encode_identity(x, n, N, zero_bin_, codes);
    return;
  }
  if (auto s = f_.power_exponent()) {
    ops.encode_power(x, n, *s, N, zero_bin_, codes);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) codes[i] = encode(x[i]);
}

Interval Quantizer::bin_interval(std::uint64_t code) const {
  if (code == 0) {
    if (!zero_bin_) throw DomainError("bin_interval: zero bin disabled");
    return {0.0, 0.0};
  }
  if (code > levels_) throw DomainError("bin_interval: code out of range");
  const double N = static_cast<double>(levels_);
  const double lo = f_.inverse((static_cast<double>(code) - 1.0) / N);
  const double hi = f_.inverse(static_cast<double>(code) / N);
  return {lo, hi};
}

double Quantizer::decode_uncached(std::uint64_t code) const {
  const Interval iv = bin_interval(code);
  return reconstruct_value(mode_, density_, iv.lo, iv.hi);
}

const std::vector<double>* Quantizer::table() const {
  if (levels_ > (1ull << 20)) return nullptr;
  std::call_once(cache_->once, [&] {
    std::vector<double> t(levels_ + 1);
    t[0] = 0.0;
    const double N = static_cast<double>(levels_);
    double lo = 0.0;
    for (std::uint64_t n = 1; n <= levels_; ++n) {
      const double hi = f_.inverse(static_cast<double>(n) / N);
      t[n] = reconstruct_value(mode_, density_, lo, hi);
      lo = hi;
    }
    cache_->table = std::move(t);
  });
  return &cache_->table;
}

double Quantizer::decode(std::uint64_t code) const {
  if (code == 0) {
    if (!zero_bin_) throw DomainError("decode: zero bin disabled");
    return 0.0;
  }
  if (code > levels_) throw DomainError("decode: code out of range");
  if (const auto* t = table()) return (*t)[code];
  return decode_uncached(code);
}

void Quantizer::decode_batch(const std::uint64_t* codes, std::size_t n,
                             double* y) const {
  const auto* t = table();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t c = codes[i];
    if (c == 0) {
      if (!zero_bin_) throw DomainError("decode: zero bin disabled");
      y[i] = 0.0;
      continue;
    }
    if (c > levels_) throw DomainError("decode: code out of range");
    y[i] = t ? (*t)[c] : decode_uncached(c);
  }
}

QuantizeResult Quantizer::quantize(const ProbVector& x) const {
  const auto& v = x.entries();
  QuantizeResult r;
  r.codes.resize(v.size());
  r.y_raw.resize(v.size());
  encode_batch(v.data(), v.size(), r.codes.data());
  decode_batch(r.codes.data(), v.size(), r.y_raw.data());
  const double total = kernels::active_ops().sum(r.y_raw.data(), r.y_raw.size());
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError("quantize: decoded mass is not positive");
  }
  const double inv = 1.0 / total;
  r.z.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r.z[i] = r.y_raw[i] * inv;
  return r;
}

}  // namespace simplexq
