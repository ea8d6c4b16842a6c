#include <cmath>
#include <limits>

#include "simplexq/kernels.hpp"

namespace simplexq::kernels {

// Single-element encode steps shared with the AVX2 lane's boundary fallback.
// These are the reference semantics: one libm evaluation, one multiply, one
// ceiling, clamped to [1, N].

std::uint64_t encode_identity_one(double x, double N, bool zero_bin) {
  if (x == 0.0) return zero_bin ? 0 : 1;
  double v = std::ceil(x * N);
  if (v < 1.0) v = 1.0;
  if (v > N) v = N;
  return static_cast<std::uint64_t>(v);
}

std::uint64_t encode_power_one(double x, double s, double N, bool zero_bin) {
  if (x == 0.0) return zero_bin ? 0 : 1;
  double v = std::ceil(std::pow(x, s) * N);
  if (v < 1.0) v = 1.0;
  if (v > N) v = N;
  return static_cast<std::uint64_t>(v);
}

std::uint64_t encode_asinh_one(double x, double gamma, double inv_denom,
                               double N, bool zero_bin) {
  if (x == 0.0) return zero_bin ? 0 : 1;
  const double w = gamma * x;
  const double f = std::log(std::sqrt(w) + std::sqrt(w + 1.0)) * inv_denom;
  double v = std::ceil(f * N);
  if (v < 1.0) v = 1.0;
  if (v > N) v = N;
  return static_cast<std::uint64_t>(v);
}

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void neg_log_scalar(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -std::log(x[i]);
}

double kl_raw_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) {
      if (y[i] <= 0.0) return std::numeric_limits<double>::infinity();
      acc += x[i] * std::log(x[i] / y[i]);
    }
  }
  return acc;
}

void encode_identity_scalar(const double* x, std::size_t n, double N,
                            bool zero_bin, std::uint64_t* codes) {
  for (std::size_t i = 0; i < n; ++i) {
    codes[i] = encode_identity_one(x[i], N, zero_bin);
  }
}

void encode_power_scalar(const double* x, std::size_t n, double s, double N,
                         bool zero_bin, std::uint64_t* codes) {
  for (std::size_t i = 0; i < n; ++i) {
    codes[i] = encode_power_one(x[i], s, N, zero_bin);
  }
}

void encode_asinh_scalar(const double* x, std::size_t n, double gamma,
                         double inv_denom, double N, bool zero_bin,
                         std::uint64_t* codes) {
  for (std::size_t i = 0; i < n; ++i) {
    codes[i] = encode_asinh_one(x[i], gamma, inv_denom, N, zero_bin);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",          sum_scalar,          neg_log_scalar,
      kl_raw_scalar,     encode_identity_scalar, encode_power_scalar,
      encode_asinh_scalar,
  };
  return ops;
}

}  // namespace simplexq::kernels
