#pragma once

#include <cstddef>
#include <cstdint>

namespace simplexq::kernels {

// Batch primitives behind the hot loops (encoding, normalization, KL
// accumulation, exponential sampling). Two implementations exist: a scalar
// reference and an AVX2 lane compiled separately; one is selected at runtime.
//
// Contract: encode_* produce codes bit-identical to the scalar reference
// (the vector lanes fall back to scalar libm near bin boundaries, where a
// few-ulp discrepancy could flip a ceiling). Reductions (sum, kl_raw) may
// differ from scalar by reassociation rounding only.
struct Ops {
  const char* name;

  // Sum of n doubles.
  double (*sum)(const double* x, std::size_t n);

  // out[i] = -log(x[i]); inputs must be positive.
  void (*neg_log)(const double* x, std::size_t n, double* out);

  // Sum over i with x[i] > 0 of x[i] * log(x[i] / y[i]).
  // Returns +inf when some x[i] > 0 has y[i] == 0.
  double (*kl_raw)(const double* x, const double* y, std::size_t n);

  // codes[i] = 0 when x[i] == 0 and zero_bin, else clamp(ceil(f(x[i])*N), 1, N)
  // for the family's f. N is passed as a double (exact for N <= 2^53).
  void (*encode_identity)(const double* x, std::size_t n, double N,
                          bool zero_bin, std::uint64_t* codes);
  void (*encode_power)(const double* x, std::size_t n, double s, double N,
                       bool zero_bin, std::uint64_t* codes);
  void (*encode_asinh)(const double* x, std::size_t n, double gamma,
                       double inv_denom, double N, bool zero_bin,
                       std::uint64_t* codes);
};

// Always available; semantics of record.
const Ops& scalar_ops();

// AVX2+FMA lane, or nullptr when not compiled in / not supported by the CPU.
const Ops* avx2_ops();

// Runtime selection: AVX2 when available, else scalar. The environment
// variable SIMPLEXQ_KERNELS=scalar|avx2 overrides (useful for equivalence
// testing and reproducing results across machines).
const Ops& active_ops();

}  // namespace simplexq::kernels
