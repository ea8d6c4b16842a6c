#pragma once

#include <cstdint>

namespace simplexq {

// 8-bit unsigned minifloat: 4 exponent bits (bias 11), 4 mantissa bits,
// gradual underflow, no sign and no inf/nan codes. Encoding clamps into the
// representable range [2^-14, 31] before rounding to nearest-even, so a
// positive input never becomes zero (top and bottom both saturate).
struct Minifloat8 {
  static constexpr double kMinPositive = 6.103515625e-05;  // 2^-14
  static constexpr double kMax = 31.0;                     // 2^4 * (1+15/16)

  static std::uint8_t encode(double x);
  static double decode(std::uint8_t code);
  static double roundtrip(double x);
};

// bfloat16: the top 16 bits of a float32 (sign, 8 exponent bits, 7 mantissa
// bits), rounded to nearest-even.
struct Bfloat16 {
  static std::uint16_t encode(double x);
  static double decode(std::uint16_t code);
  static double roundtrip(double x);
};

}  // namespace simplexq
