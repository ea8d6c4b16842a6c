#pragma once

#include <cstddef>
#include <cstdint>

// Reference single-element encodes, shared between the scalar lane and the
// AVX2 lane's boundary fallback so both produce identical codes.
namespace simplexq::kernels {

std::uint64_t encode_identity_one(double x, double N, bool zero_bin);
std::uint64_t encode_power_one(double x, double s, double N, bool zero_bin);
std::uint64_t encode_asinh_one(double x, double gamma, double inv_denom,
                               double N, bool zero_bin);

}  // namespace simplexq::kernels
