#include "simplexq/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "simplexq/errors.hpp"
#include "simplexq/loss.hpp"

namespace simplexq {

namespace {

constexpr double kE = 2.718281828459045235;

double log2_of(double v) { return std::log(v) * std::log(v); }

WorstCaseBound unsatisfied(WorstCaseMethod method, std::uint64_t K,
                           std::uint64_t N, std::string reason) {
  WorstCaseBound b;
  b.method = method;
  b.K = K;
  b.N = N;
  b.satisfied = false;
  b.reason = std::move(reason);
  return b;
}

}  // namespace

const char* to_string(WorstCaseMethod method) {
  switch (method) {
    case WorstCaseMethod::minimax:
      return "minimax";
    case WorstCaseMethod::approx_minimax:
      return "approx_minimax";
    case WorstCaseMethod::power:
      return "power";
  }
  throw DomainError("to_string: unknown worst-case method");
}

WorstCaseMethod worst_case_method_from_string(const std::string& name) {
  if (name == "minimax") return WorstCaseMethod::minimax;
  if (name == "approx_minimax") return WorstCaseMethod::approx_minimax;
  if (name == "power") return WorstCaseMethod::power;
  throw DomainError("unknown worst-case method: " + name);
}

WorstCaseBound worstcase_bound(WorstCaseMethod method, std::uint64_t K,
                               std::uint64_t N, bool sharpened) {
  if (sharpened && method != WorstCaseMethod::approx_minimax) {
    throw DomainError(
        "worstcase_bound: the sharpened constant exists only for "
        "approx_minimax");
  }
  const double Kd = static_cast<double>(K);
  const double Nd = static_cast<double>(N);
  const double logk = std::log(Kd);

  if (method == WorstCaseMethod::power) {
    if (K <= 7) {
      return unsatisfied(method, K, N,
                         "power bound needs K > 7 (so that 1/log K <= 1/2)");
    }
    const double floor_n = 0.5 * kE * logk;
    if (!(Nd > floor_n)) {
      return unsatisfied(method, K, N,
                         "power bound needs N > (e/2) log K");
    }
    WorstCaseBound b;
    b.method = method;
    b.K = K;
    b.N = N;
    b.satisfied = true;
    b.err = floor_n / (Nd - floor_n);
    b.bound = (1.0 + b.err) * 0.5 * kE * kE / (Nd * Nd) * log2_of(Kd);
    if (Nd >= kE * logk) {
      b.simplified = kE * kE / (Nd * Nd) * log2_of(Kd);
    }
    return b;
  }

  if (sharpened) {
    if (K < 55) {
      return unsatisfied(method, K, N, "sharpened bound needs K >= 55");
    }
    const double floor_n = 6.0 * std::log(2.0 * std::sqrt(0.5 * Kd * logk) + 1.0);
    if (!(Nd > floor_n)) {
      return unsatisfied(
          method, K, N,
          "sharpened bound needs N > 6 log(2 sqrt(K log K / 2) + 1)");
    }
    WorstCaseBound b;
    b.method = method;
    b.K = K;
    b.N = N;
    b.satisfied = true;
    b.err = 6.0 * std::log(logk) / logk;
    b.bound = (1.0 + b.err) / (Nd * Nd) * log2_of(Kd);
    return b;
  }

  if (K <= 4) {
    return unsatisfied(method, K, N, "covering bound needs K > 4");
  }
  const double floor_n = 8.0 * std::log(2.0 * std::sqrt(Kd * logk) + 1.0);
  if (!(Nd >= floor_n)) {
    return unsatisfied(method, K, N,
                       "covering bound needs N >= 8 log(2 sqrt(K log K) + 1)");
  }
  WorstCaseBound b;
  b.method = method;
  b.K = K;
  b.N = N;
  b.satisfied = true;
  b.err = 18.0 * std::log(logk) / logk;
  b.bound = (1.0 + b.err) / (Nd * Nd) * log2_of(Kd);
  return b;
}

namespace {

// Shared state for the candidate sweep: evaluates a nonnegative vector as a
// normalized ProbVector and tracks the worst one seen.
struct SearchState {
  const Quantizer& q;
  std::vector<double> best_entries;
  double best = -1.0;
  std::uint64_t evaluations = 0;

  explicit SearchState(const Quantizer& quantizer) : q(quantizer) {}

  void eval(const std::vector<double>& entries) {
    double sum = 0.0;
    for (double v : entries) {
      if (!(v >= 0.0) || !std::isfinite(v)) return;
      sum += v;
    }
    if (!(sum > 0.0)) return;
    ProbVector x = ProbVector::normalized(entries);
    const QuantizeResult r = q.quantize(x);
    const double d = kl_divergence(x, ProbVector::validated(r.z));
    ++evaluations;
    if (std::isfinite(d) && d > best) {
      best = d;
      best_entries = x.entries();
    }
  }
};

// Bins probed by the edge-aligned candidates: all of them when N is small,
// otherwise a geometric selection plus both extremes.
std::vector<std::uint64_t> probe_bins(std::uint64_t N) {
  std::vector<std::uint64_t> bins;
  if (N <= 128) {
    for (std::uint64_t n = 1; n <= N; ++n) bins.push_back(n);
    return bins;
  }
  double v = 1.0;
  while (v < static_cast<double>(N)) {
    bins.push_back(static_cast<std::uint64_t>(v));
    v *= 1.13;
  }
  bins.push_back(N);
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  return bins;
}

}  // namespace

AdversarialResult adversarial_search(const Quantizer& q, std::uint64_t K,
                                     std::uint64_t budget) {
  if (K < 2) throw DomainError("adversarial_search: need K >= 2");
  if (q.mode() != DecodeMode::midpoint) {
    throw DomainError(
        "adversarial_search: the covering guarantees assume midpoint "
        "decoding");
  }
  SearchState state(q);
  std::vector<double> x(K);

  // Uniform baseline.
  std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(K));
  state.eval(x);

  // Bin-edge-aligned: k entries parked just inside a bin's lower edge (the
  // 1e-12 relative offset keeps them off the open boundary), or at its
  // closed upper edge; the remainder goes to one balancing entry.
  for (std::uint64_t n : probe_bins(q.levels())) {
    const Interval iv = q.bin_interval(n);
    const double candidates[2] = {iv.lo > 0.0 ? iv.lo * (1.0 + 1e-12)
                                              : iv.hi * 1e-12,
                                  iv.hi};
    for (double v : candidates) {
      if (!(v > 0.0) || v >= 1.0) continue;
      const double whole = std::floor(1.0 / v);
      const std::uint64_t fit =
          whole >= static_cast<double>(K) ? K - 1
                                          : static_cast<std::uint64_t>(whole);
      for (std::uint64_t k : {std::uint64_t{1}, fit / 2, fit}) {
        if (k == 0 || k > K - 1) continue;
        const double rest = 1.0 - static_cast<double>(k) * v;
        if (!(rest >= 0.0)) continue;
        std::fill(x.begin(), x.end(), 0.0);
        for (std::uint64_t i = 0; i < k; ++i) x[i] = v;
        x[K - 1] += rest;
        state.eval(x);
        // Variant with the remainder spread over the untouched entries.
        if (k + 1 < K && rest > 0.0) {
          const double each = rest / static_cast<double>(K - k);
          for (std::uint64_t i = k; i < K; ++i) x[i] = each;
          x[K - 1] = each;
          state.eval(x);
        }
      }
    }
  }

  // One-hot plus dust.
  {
    const Interval first = q.bin_interval(1);
    const double dusts[] = {first.hi, first.hi * (1.0 + 1e-12),
                            0.5 * (first.lo + first.hi), first.hi * 0.999,
                            1e-15, 1e-9};
    for (double dust : dusts) {
      if (!(dust > 0.0)) continue;
      const double head = 1.0 - static_cast<double>(K - 1) * dust;
      if (!(head > 0.0)) continue;
      std::fill(x.begin(), x.end(), dust);
      x[0] = head;
      state.eval(x);
    }
  }

  // Geometric ladders.
  for (double r : {0.3, 0.5, 0.7, 0.9, 0.97, 0.999, 1.05, 1.5}) {
    double v = 1.0;
    for (std::uint64_t i = 0; i < K; ++i) {
      x[i] = v;
      v *= r;
      if (v < 1e-300) v = 1e-300;
    }
    state.eval(x);
  }

  if (state.best < 0.0) {
    throw NumericalError("adversarial_search: no candidate evaluated");
  }

  // Coordinate-wise hill climb from the best candidate: move a slice of
  // mass between two entries, keep strict improvements.
  std::vector<double> cur = state.best_entries;
  std::uint64_t i = 0, j = 1;
  const double scales[] = {0.5, 0.1, 1e-2, 1e-4, 1e-7};
  std::size_t scale_idx = 0;
  while (state.evaluations < budget) {
    if (i != j && cur[i] > 0.0) {
      const double delta = cur[i] * scales[scale_idx];
      x = cur;
      x[i] -= delta;
      x[j] += delta;
      const double before = state.best;
      state.eval(x);
      if (state.best > before) cur = state.best_entries;
    }
    // Cycle pairs, then scales.
    ++j;
    if (j >= K) {
      j = 0;
      ++i;
      if (i >= K) {
        i = 0;
        scale_idx = (scale_idx + 1) % (sizeof(scales) / sizeof(scales[0]));
      }
    }
  }

  return AdversarialResult{ProbVector::validated(std::move(state.best_entries)),
                           state.best, state.evaluations};
}

}  // namespace simplexq
