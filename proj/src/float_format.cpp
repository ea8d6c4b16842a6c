#include "simplexq/float_format.hpp"

#include <cmath>
#include <cstring>

#include "simplexq/errors.hpp"

namespace simplexq {

// Exponent field e, mantissa field m. Subnormal (e=0): m * 2^-14.
// Normal: 2^(e-11) * (1 + m/16) = (16+m) * 2^(e-15). The subnormal grid and
// the e=1 grid share the step 2^-14, so codes 0..31 form one uniform ramp.

std::uint8_t Minifloat8::encode(double x) {
  if (std::isnan(x)) throw DomainError("minifloat8: nan input");
  if (x < 0.0) throw DomainError("minifloat8: negative input");
  if (x == 0.0) return 0;
  if (x < kMinPositive) x = kMinPositive;
  if (x > kMax) x = kMax;
  if (x < 0x1p-10) {
    // Uniform region: scaling by 2^14 is exact, nearbyint ties to even.
    const double q = std::nearbyint(std::ldexp(x, 14));
    return static_cast<std::uint8_t>(q);
  }
  const int p = std::ilogb(x);  // x = f * 2^p, f in [1,2)
  double q = std::nearbyint(std::ldexp(x, 4 - p));  // rne(f * 16), exact scale
  int e = p + 11;
  if (q == 32.0) {
    q = 16.0;
    ++e;
  }
  if (e > 15) return 0xFF;  // unreachable after the clamp; kept as a guard
  return static_cast<std::uint8_t>((e << 4) | (static_cast<int>(q) - 16));
}

double Minifloat8::decode(std::uint8_t code) {
  const int e = code >> 4;
  const int m = code & 0xF;
  if (e == 0) return std::ldexp(static_cast<double>(m), -14);
  return std::ldexp(static_cast<double>(16 + m), e - 15);
}

double Minifloat8::roundtrip(double x) { return decode(encode(x)); }

std::uint16_t Bfloat16::encode(double x) {
  if (std::isnan(x)) throw DomainError("bfloat16: nan input");
  // Two roundings (double -> float -> bfloat16) agree with direct rounding
  // because float's 24-bit mantissa is wide enough (24 >= 2*8 + 2).
  const float f = static_cast<float>(x);
  std::uint32_t u;
  std::memcpy(&u, &f, sizeof u);
  const std::uint32_t rounded = (u + 0x7FFFu + ((u >> 16) & 1u)) >> 16;
  return static_cast<std::uint16_t>(rounded);
}

double Bfloat16::decode(std::uint16_t code) {
  const std::uint32_t u = static_cast<std::uint32_t>(code) << 16;
  float f;
  std::memcpy(&f, &u, sizeof f);
  return static_cast<double>(f);
}

double Bfloat16::roundtrip(double x) { return decode(encode(x)); }

}  // namespace simplexq
