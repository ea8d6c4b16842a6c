#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace simplexq {

// Deterministic seeded generator. All randomized code in the library draws
// through this wrapper so that a (seed, draw-order) pair fully determines
// results across platforms: doubles are derived from raw 64-bit outputs, not
// from std:: distributions (whose algorithms are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (lo, hi]; never returns lo.
  double uniform_right(double lo, double hi) {
    return hi - (hi - lo) * uniform01();
  }

  // Exponential(1); strictly positive.
  double exponential() { return -std::log1p(-uniform01()); }

  // Uniform integer in [0, n). Unbiased via rejection on the top range.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  // Independent stream derived from a root seed; used to decorrelate
  // per-partition or per-purpose substreams deterministically.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(mix(seed ^ mix(stream_id)));
  }

  // splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

// In-place Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace simplexq
