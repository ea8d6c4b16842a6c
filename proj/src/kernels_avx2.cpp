// AVX2+FMA kernel lane. Compiled with -mavx2 -mfma; selected at runtime only
// when the CPU reports both (see kernels_dispatch.cpp).
//
// The vector log/exp follow the classic Cephes rational approximations
// (~1-2 ulp). Encoding kernels guard against the one place where that
// matters: when f(x)*N sits within a hair of an integer, a few-ulp
// difference against libm could flip the ceiling, so such lanes are
// recomputed with the scalar reference. Everywhere else a sub-guard error
// cannot change the code, making vector and scalar codes bit-identical.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "simplexq/detail/kernels_impl.hpp"
#include "simplexq/kernels.hpp"

namespace simplexq::kernels {
namespace {

inline __m256d polevl3(__m256d z, double c0, double c1, double c2, double c3) {
  __m256d r = _mm256_set1_pd(c0);
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(c1));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(c2));
  r = _mm256_fmadd_pd(r, z, _mm256_set1_pd(c3));
  return r;
}

// log(x) for positive normal x (subnormals are rescaled first).
inline __m256d vlog(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two_pow_54 = _mm256_set1_pd(0x1.0p54);
  const __m256d min_normal = _mm256_set1_pd(0x1.0p-1022);

  // Rescale subnormal inputs so the exponent extraction below is valid.
  const __m256d tiny_mask = _mm256_cmp_pd(x, min_normal, _CMP_LT_OQ);
  x = _mm256_blendv_pd(x, _mm256_mul_pd(x, two_pow_54), tiny_mask);
  const __m256d e_bias =
      _mm256_blendv_pd(_mm256_setzero_pd(), _mm256_set1_pd(-54.0), tiny_mask);

  __m256i xi = _mm256_castpd_si256(x);
  // Biased exponent to double via the 2^52 magic-number trick.
  __m256i bexp = _mm256_srli_epi64(xi, 52);
  const __m256i magic = _mm256_castpd_si256(_mm256_set1_pd(0x1.0p52));
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(bexp, magic)), _mm256_set1_pd(0x1.0p52));
  e = _mm256_add_pd(_mm256_sub_pd(e, _mm256_set1_pd(1022.0)), e_bias);

  // Mantissa in [0.5, 1).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_castpd_si256(_mm256_set1_pd(0.5));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(xi, mant_mask), half_bits));

  // Shift to [sqrt(1/2), sqrt(2)).
  const __m256d sqrt_half = _mm256_set1_pd(0.70710678118654752440);
  const __m256d lt = _mm256_cmp_pd(m, sqrt_half, _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), lt);
  e = _mm256_sub_pd(e, _mm256_blendv_pd(_mm256_setzero_pd(), one, lt));
  const __m256d t = _mm256_sub_pd(m, one);

  // Cephes log P/Q rational in t.
  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(t, _mm256_set1_pd(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, t, _mm256_set1_pd(2.31251620126765340583e1));

  const __m256d z = _mm256_mul_pd(t, t);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(t, z), _mm256_div_pd(p, q));
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);  // y -= z/2

  // result = t + y + e*ln2 with the split-constant compensation.
  __m256d r = _mm256_fmadd_pd(e, _mm256_set1_pd(-2.121944400546905827679e-4), y);
  r = _mm256_add_pd(r, t);
  r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
  return r;
}

// exp(x) for |x| within the double range; no overflow guarding beyond what
// callers need (arguments here stay within [-745, 1]).
inline __m256d vexp(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  __m256d fn = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // r = x - n*ln2, split constants.
  __m256d r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(1.42860682030941723212e-6), r);

  const __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = polevl3(z, 3.00198505138664455042e-6, 2.52448340349684104192e-3,
                      2.27265548208155028766e-1, 2.00000000000000000005e0);
  const __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  __m256d y = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // Scale by 2^n via exponent bits. n stays within int32 here.
  __m128i n32 = _mm256_cvtpd_epi32(fn);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i pow2 =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(y, _mm256_castsi256_pd(pow2));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

void neg_log_avx2(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = vlog(_mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_setzero_pd(), v));
  }
  for (; i < n; ++i) out[i] = -std::log(x[i]);
}

double kl_raw_avx2(const double* x, const double* y, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  __m256d bad = zero;  // accumulates lanes with x>0, y<=0
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d pos = _mm256_cmp_pd(xv, zero, _CMP_GT_OQ);
    const __m256d ybad = _mm256_and_pd(pos, _mm256_cmp_pd(yv, zero, _CMP_LE_OQ));
    bad = _mm256_or_pd(bad, ybad);
    // Masked-out lanes would produce log(0/NaN); feed them 1.0 instead.
    const __m256d ratio = _mm256_blendv_pd(
        _mm256_set1_pd(1.0), _mm256_div_pd(xv, yv), pos);
    const __m256d term = _mm256_mul_pd(xv, vlog(ratio));
    acc = _mm256_add_pd(acc, _mm256_and_pd(pos, term));
  }
  if (_mm256_movemask_pd(bad) != 0) {
    return std::numeric_limits<double>::infinity();
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    if (x[i] > 0.0) {
      if (y[i] <= 0.0) return std::numeric_limits<double>::infinity();
      total += x[i] * std::log(x[i] / y[i]);
    }
  }
  return total;
}

// Shared tail of the encode kernels: round the vector estimate, fall back to
// the scalar reference for lanes near an integer boundary (or exact zeros).
template <class ScalarFn>
inline void finish_encode(__m256d v, __m256d guard, __m256d x, double N,
                          bool zero_bin, std::uint64_t* codes,
                          const ScalarFn& scalar_one) {
  const __m256d rounded =
      _mm256_round_pd(v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d dist = _mm256_andnot_pd(_mm256_set1_pd(-0.0),
                                        _mm256_sub_pd(v, rounded));
  const __m256d near = _mm256_cmp_pd(dist, guard, _CMP_LT_OQ);
  const __m256d zero = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const int fallback = _mm256_movemask_pd(_mm256_or_pd(near, zero));

  __m256d c = _mm256_ceil_pd(v);
  c = _mm256_max_pd(c, _mm256_set1_pd(1.0));
  c = _mm256_min_pd(c, _mm256_set1_pd(N));

  alignas(32) double cl[4], xl[4];
  _mm256_store_pd(cl, c);
  _mm256_store_pd(xl, x);
  for (int lane = 0; lane < 4; ++lane) {
    codes[lane] = (fallback >> lane) & 1
                      ? scalar_one(xl[lane], N, zero_bin)
                      : static_cast<std::uint64_t>(cl[lane]);
  }
}

void encode_identity_avx2(const double* x, std::size_t n, double N,
                          bool zero_bin, std::uint64_t* codes) {
  // x*N and ceil are single roundings, identical to scalar: no guard needed.
  std::size_t i = 0;
  const __m256d nv = _mm256_set1_pd(N);
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d c = _mm256_ceil_pd(_mm256_mul_pd(xv, nv));
    c = _mm256_max_pd(c, _mm256_set1_pd(1.0));
    c = _mm256_min_pd(c, nv);
    const __m256d zero = _mm256_cmp_pd(xv, _mm256_setzero_pd(), _CMP_EQ_OQ);
    alignas(32) double cl[4];
    _mm256_store_pd(cl, c);
    const int zmask = _mm256_movemask_pd(zero);
    for (int lane = 0; lane < 4; ++lane) {
      codes[i + lane] = (zmask >> lane) & 1
                            ? (zero_bin ? 0 : 1)
                            : static_cast<std::uint64_t>(cl[lane]);
    }
  }
  for (; i < n; ++i) codes[i] = encode_identity_one(x[i], N, zero_bin);
}

void encode_power_avx2(const double* x, std::size_t n, double s, double N,
                       bool zero_bin, std::uint64_t* codes) {
  std::size_t i = 0;
  const __m256d sv = _mm256_set1_pd(s);
  const __m256d nv = _mm256_set1_pd(N);
  auto one = [s](double xi, double Ni, bool zb) {
    return encode_power_one(xi, s, Ni, zb);
  };
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d v = _mm256_mul_pd(vexp(_mm256_mul_pd(sv, vlog(xv))), nv);
    // Composition error is ~1e-13 relative; guard two orders above it.
    const __m256d guard = _mm256_max_pd(
        _mm256_mul_pd(v, _mm256_set1_pd(1e-11)), _mm256_set1_pd(1e-11));
    finish_encode(v, guard, xv, N, zero_bin, codes + i, one);
  }
  for (; i < n; ++i) codes[i] = encode_power_one(x[i], s, N, zero_bin);
}

void encode_asinh_avx2(const double* x, std::size_t n, double gamma,
                       double inv_denom, double N, bool zero_bin,
                       std::uint64_t* codes) {
  std::size_t i = 0;
  const __m256d gv = _mm256_set1_pd(gamma);
  const __m256d one_v = _mm256_set1_pd(1.0);
  const __m256d scale = _mm256_set1_pd(inv_denom * N);
  // Absolute error of the log stage is a few ulp of values up to ~20, so the
  // guard is driven by N*inv_denom, plus a relative floor.
  const __m256d guard_base = _mm256_set1_pd(1e-12 * N * inv_denom + 1e-13);
  auto one = [gamma, inv_denom](double xi, double Ni, bool zb) {
    return encode_asinh_one(xi, gamma, inv_denom, Ni, zb);
  };
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d w = _mm256_mul_pd(gv, xv);
    const __m256d u =
        _mm256_add_pd(_mm256_sqrt_pd(w), _mm256_sqrt_pd(_mm256_add_pd(w, one_v)));
    const __m256d v = _mm256_mul_pd(vlog(u), scale);
    const __m256d guard =
        _mm256_fmadd_pd(v, _mm256_set1_pd(1e-13), guard_base);
    finish_encode(v, guard, xv, N, zero_bin, codes + i, one);
  }
  for (; i < n; ++i) {
    codes[i] = encode_asinh_one(x[i], gamma, inv_denom, N, zero_bin);
  }
}

bool cpu_ok() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {
      "avx2",        sum_avx2,           neg_log_avx2,
      kl_raw_avx2,   encode_identity_avx2, encode_power_avx2,
      encode_asinh_avx2,
  };
  static const bool ok = cpu_ok();
  return ok ? &ops : nullptr;
}

}  // namespace simplexq::kernels
