#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "simplexq/compander.hpp"
#include "simplexq/density.hpp"
#include "simplexq/prob_vector.hpp"

namespace simplexq {

enum class DecodeMode { midpoint, centroid };

struct Interval {
  double lo;  // open end
  double hi;  // closed end
};

struct QuantizeResult {
  std::vector<std::uint64_t> codes;
  std::vector<double> y_raw;  // decoded values before normalization
  std::vector<double> z;      // y_raw / sum(y_raw)
};

// Scalar quantizer built from a compander: N granularity levels plus a
// reserved code 0 for exact zeros. Bins are the preimages
// I(n) = f^{-1}(((n-1)/N, n/N]), half-open on the left.
//
// Centroid decoding needs a single-letter density to take conditional
// expectations against; midpoint decoding does not.
class Quantizer {
 public:
  Quantizer(Compander f, std::uint64_t levels, DecodeMode mode = DecodeMode::midpoint,
            std::optional<SingleLetterDensity> density = std::nullopt,
            bool zero_bin = true);

  // 0 when x == 0 and the zero bin is enabled, else ceil(f(x) N) in [1, N].
  std::uint64_t encode(double x) const;
  // Reconstruction value for a code; decode(0) = 0.
  double decode(std::uint64_t code) const;
  Interval bin_interval(std::uint64_t code) const;

  QuantizeResult quantize(const ProbVector& x) const;

  // Batch forms used by the Monte-Carlo loops. encode_batch routes
  // identity/power/asinh-shaped companders through the kernel lane.
  void encode_batch(const double* x, std::size_t n, std::uint64_t* codes) const;
  void decode_batch(const std::uint64_t* codes, std::size_t n, double* y) const;

  const Compander& compander() const { return f_; }
  std::uint64_t levels() const { return levels_; }
  DecodeMode mode() const { return mode_; }
  bool zero_bin() const { return zero_bin_; }

 private:
  double decode_uncached(std::uint64_t code) const;
  const std::vector<double>* table() const;

  Compander f_;
  std::uint64_t levels_;
  DecodeMode mode_;
  std::optional<SingleLetterDensity> density_;
  bool zero_bin_;
  // Reconstruction table (index = code) built lazily for table-friendly N.
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

}  // namespace simplexq
