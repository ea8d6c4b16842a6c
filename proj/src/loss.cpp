#include "simplexq/loss.hpp"

#include <cmath>
#include <limits>

#include "simplexq/detail/interp.hpp"
#include "simplexq/detail/quadrature.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/kernels.hpp"

namespace simplexq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x log(x/y) - (x - y) for y > 0: the Bregman integrand of KL against a
// fixed reconstruction. Pointwise nonnegative; evaluated through its series
// when x is close to y, where the direct form loses all its digits.
double bregman(double x, double y) {
  if (x == 0.0) return y;
  const double d = (x - y) / y;
  if (std::abs(d) <= 1e-3) {
    // (1+d)log(1+d) - d = d^2/2 - d^3/6 + d^4/12 - d^5/20 + d^6/30 - ...
    return y * d * d *
           (0.5 +
            d * (-1.0 / 6.0 + d * (1.0 / 12.0 + d * (-0.05 + d / 30.0))));
  }
  return x * std::log(x / y) - (x - y);
}

// Integral of p(x) * g(x) over [a, b] with a square-root substitution when
// the interval ends at a support edge, where the pdf may be singular
// (x^{-1/2} for the maximin family, x^{alpha-1} for betas).
double integrate_weighted(const SingleLetterDensity& p,
                          const std::function<double(double)>& g, double a,
                          double b, bool left_edge, bool right_edge,
                          const detail::QuadOptions& opts) {
  auto f = [&](double x) {
    const double px = p.pdf(x);
    return px > 0.0 ? px * g(x) : 0.0;
  };
  if (left_edge) {
    const double span = b - a;
    return detail::integrate_or_throw(
        [&](double u) { return 2.0 * u * span * f(a + span * u * u); }, 0.0,
        1.0, opts);
  }
  if (right_edge) {
    const double span = b - a;
    return detail::integrate_or_throw(
        [&](double u) { return 2.0 * u * span * f(b - span * u * u); }, 0.0,
        1.0, opts);
  }
  return detail::integrate_or_throw(f, a, b, opts);
}

struct RunningLoss {
  double mean = 0.0, m2 = 0.0, raw_mean = 0.0, raw_m2 = 0.0;
  std::uint64_t n = 0, infinite = 0;

  void add(double d, double raw) {
    if (!std::isfinite(d) || !std::isfinite(raw)) {
      ++infinite;
      return;
    }
    ++n;
    const double delta = d - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (d - mean);
    const double rdelta = raw - raw_mean;
    raw_mean += rdelta / static_cast<double>(n);
    raw_m2 += rdelta * (raw - raw_mean);
  }

  LossReport finish(std::string method, std::uint64_t K, std::uint64_t N,
                    std::uint64_t trials) const {
    LossReport r;
    r.method = std::move(method);
    r.K = K;
    r.N = N;
    for (int b = 1; b < 64; ++b) {
      if ((std::uint64_t{1} << b) == N) r.b = b;
    }
    r.nats = mean;
    r.bits_per_entry =
        K > 0 ? mean / (static_cast<double>(K) * std::log(2.0)) : 0.0;
    r.raw_loss = raw_mean;
    r.trials = trials;
    const double scale =
        n > 1 ? 1.0 / static_cast<double>(n - 1) / static_cast<double>(n) : 0.0;
    r.stderr_nats = std::sqrt(m2 * scale);
    r.raw_stderr = std::sqrt(raw_m2 * scale);
    r.infinite_events = infinite;
    return r;
  }
};

}  // namespace

double kl_divergence(const ProbVector& x, const ProbVector& z) {
  if (x.size() != z.size()) {
    throw DomainError("kl_divergence: length mismatch");
  }
  return kernels::active_ops().kl_raw(x.entries().data(), z.entries().data(),
                                      x.size());
}

double single_letter_loss(const SingleLetterDensity& p, const Compander& f,
                          std::uint64_t N) {
  if (N == 0) throw DomainError("single_letter_loss: need N >= 1");
  const double slo = p.support_lo();
  const double shi = p.support_hi();
  const double Nd = static_cast<double>(N);
  const bool closed = p.partial_expectation(shi).has_value();
  const detail::QuadOptions opts{1e-280, 1e-9, 40};

  double total = 0.0;
  double lo = 0.0;
  double prev_cdf = 0.0, prev_g = 0.0;  // boundary cache for the closed path
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double hi = f.inverse(static_cast<double>(n) / Nd);
    const double a = std::max(lo, slo);
    const double b = std::min(hi, shi);
    if (a < b) {
      const bool left_edge = (a == slo);
      const bool right_edge = (b == shi);
      double mass, moment;
      if (closed) {
        if (left_edge) {
          prev_cdf = 0.0;
          prev_g = 0.0;
        }
        const double cdf_b = p.cdf(b);
        const double g_b = *p.partial_expectation(b);
        mass = cdf_b - prev_cdf;
        moment = g_b - prev_g;
        prev_cdf = cdf_b;
        prev_g = g_b;
      } else {
        mass = integrate_weighted(p, [](double) { return 1.0; }, a, b,
                                  left_edge, right_edge, opts);
        moment = integrate_weighted(p, [](double x) { return x; }, a, b,
                                    left_edge, right_edge, opts);
      }
      if (mass > 1e-300 && std::isfinite(moment) && moment > 0.0) {
        double y = moment / mass;
        if (y < a) y = a;
        if (y > b) y = b;
        try {
          total += integrate_weighted(
              p, [&](double x) { return bregman(x, y); }, a, b, left_edge,
              right_edge, opts);
        } catch (const NumericalError&) {
          throw NumericalError("single_letter_loss: quadrature failed in bin " +
                               std::to_string(n));
        }
      }
    }
    lo = hi;
    if (lo >= shi) break;  // all remaining bins sit above the support
  }
  return total;
}

McEstimate single_letter_loss_mc(const SingleLetterDensity& p,
                                 const Quantizer& q, std::uint64_t trials,
                                 Rng& rng) {
  if (trials == 0) throw DomainError("single_letter_loss_mc: need trials >= 1");
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double x = p.inverse_cdf(rng.uniform01());
    const double y = q.decode(q.encode(x));
    const double g = y > 0.0 ? bregman(x, y) : 0.0;
    const double delta = g - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (g - mean);
  }
  McEstimate e;
  e.mean = mean;
  e.std_error = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) /
                                    static_cast<double>(trials))
                        : 0.0;
  e.trials = trials;
  return e;
}

LossReport expected_loss_mc(const std::function<ProbVector(Rng&)>& sampler,
                            const Quantizer& q, std::uint64_t trials, Rng& rng,
                            std::string method) {
  if (trials == 0) throw DomainError("expected_loss_mc: need trials >= 1");
  const auto& ops = kernels::active_ops();
  RunningLoss acc;
  std::vector<std::uint64_t> codes;
  std::vector<double> y;
  std::uint64_t K = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const ProbVector x = sampler(rng);
    const auto& v = x.entries();
    if (t == 0) {
      K = v.size();
      codes.resize(K);
      y.resize(K);
    } else if (v.size() != K) {
      throw DomainError("expected_loss_mc: sampler changed dimension");
    }
    q.encode_batch(v.data(), K, codes.data());
    q.decode_batch(codes.data(), K, y.data());
    const double raw = ops.kl_raw(v.data(), y.data(), K);
    const double total = ops.sum(y.data(), K);
    acc.add(raw + std::log(total), raw);
  }
  return acc.finish(std::move(method), K, q.levels(), trials);
}

LossReport expected_loss_roundtrip_mc(
    const std::function<ProbVector(Rng&)>& sampler,
    const std::function<double(double)>& roundtrip, std::uint64_t trials,
    Rng& rng, std::string method) {
  if (trials == 0) throw DomainError("expected_loss_mc: need trials >= 1");
  const auto& ops = kernels::active_ops();
  RunningLoss acc;
  std::vector<double> y;
  std::uint64_t K = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const ProbVector x = sampler(rng);
    const auto& v = x.entries();
    if (t == 0) {
      K = v.size();
      y.resize(K);
    } else if (v.size() != K) {
      throw DomainError("expected_loss_mc: sampler changed dimension");
    }
    for (std::uint64_t i = 0; i < K; ++i) y[i] = roundtrip(v[i]);
    const double raw = ops.kl_raw(v.data(), y.data(), K);
    const double total = ops.sum(y.data(), K);
    acc.add(raw + std::log(total), raw);
  }
  return acc.finish(std::move(method), K, 0, trials);
}

double asymptotic_loss(const SingleLetterDensity& p, const Compander& f) {
  auto h = [&](double x) -> double {
    const double px = p.pdf(x);
    if (px <= 0.0) return 0.0;
    const double d = f.derivative(x);
    if (!(d > 0.0)) {
      throw NumericalError(
          "asymptotic_loss: nonpositive compander slope inside the support");
    }
    return px / (d * d * x);
  };
  const double slo = std::max(0.0, p.support_lo());
  const double shi = std::min(1.0, p.support_hi());
  const detail::QuadOptions opts{0.0, 1e-11, 48};

  // Top piece [m0, shi] under x = shi - u^2, which tames a possible pdf
  // singularity at the right support edge.
  const double m0 = std::max(slo, 0.5 * shi);
  double total = detail::integrate_or_throw(
      [&](double u) { return 2.0 * u * h(shi - u * u); }, 0.0,
      std::sqrt(shi - m0), opts);
  if (!std::isfinite(total)) return kInf;

  // Geometric shells [b/2, b] marching toward the lower support edge. The
  // integrand's only admissible singularity is there, so each shell is
  // smooth; the shell sequence either reaches the edge, certifies its tail
  // by geometric decay, or exposes divergence by refusing to decay.
  if (m0 > slo) {
    double b = m0;
    double prev = -1.0;
    int flat = 0, zeros = 0;
    for (int j = 0;; ++j) {
      const double a = std::max(slo, 0.5 * b);
      const double v = detail::integrate_or_throw(h, a, b, opts);
      if (!std::isfinite(v)) return kInf;
      total += v;
      if (a <= slo) break;  // hit the support floor: the integral is finite
      if (v == 0.0) {
        if (++zeros >= 60) break;  // no density left below this point
      } else {
        zeros = 0;
        if (prev > 0.0) {
          const double rho = v / prev;
          if (rho >= 0.9999) {
            if (++flat >= 50) return kInf;  // harmonic or worse: divergent
          } else {
            flat = 0;
          }
          if (rho < 0.95) {
            const double tail = v * rho / (1.0 - rho);
            if (tail <= 1e-10 * total) {
              total += tail;
              break;
            }
          }
        }
        if (total > 1e12) return kInf;
        prev = v;
      }
      b = a;
      if (j >= 900) {
        throw NumericalError("asymptotic_loss: shell tail did not resolve");
      }
    }
  }
  return total / 24.0;
}

OptimalCompander optimal_compander(const SingleLetterDensity& p) {
  auto w = [&](double t) -> double {
    if (t <= 0.0) return 0.0;
    const double pt = p.pdf(t);
    if (pt <= 0.0) return 0.0;
    return std::cbrt(pt / t);
  };
  const detail::QuadOptions opts{0.0, 1e-12, 48};
  // Segment integral of w; cube-root substitution at 0 absorbs the t^{-1/3}
  // endpoint, square-root substitution at 1 a possible pdf singularity.
  auto seg = [&](double a, double b) -> double {
    if (a == 0.0) {
      return detail::integrate_or_throw(
          [&](double u) { return 3.0 * u * u * b * w(b * u * u * u); }, 0.0,
          1.0, opts);
    }
    if (b == 1.0) {
      const double span = b - a;
      return detail::integrate_or_throw(
          [&](double u) { return 2.0 * u * span * w(b - span * u * u); }, 0.0,
          1.0, opts);
    }
    return detail::integrate_or_throw(w, a, b, opts);
  };

  // Knots concentrated at both endpoints, where f_p curves hardest.
  std::vector<double> xs{0.0};
  const int g = 48;
  for (int i = 1; i <= g; ++i) {
    const double u = static_cast<double>(i) / g;
    xs.push_back(0.5 * u * u * u * u * u);
  }
  for (int i = g - 1; i >= 1; --i) {
    const double u = static_cast<double>(i) / g;
    xs.push_back(1.0 - 0.5 * u * u * u * u * u);
  }
  xs.push_back(1.0);

  std::vector<double> cum(xs.size());
  cum[0] = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    cum[i] = cum[i - 1] + seg(xs[i - 1], xs[i]);
  }
  double z = cum.back();
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NumericalError("optimal_compander: normalizing integral diverged");
  }

  // Refine until the interpolant reproduces the cumulative to 2e-11 of full
  // scale (checked at segment midpoints, in unnormalized units).
  for (int round = 0; round < 32; ++round) {
    std::vector<double> scaled(cum.size());
    for (std::size_t i = 0; i < cum.size(); ++i) scaled[i] = cum[i] / z;
    detail::MonotoneCubic interp(xs, scaled);
    std::vector<double> nx, ncum;
    bool inserted = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      nx.push_back(xs[i]);
      ncum.push_back(cum[i]);
      const double xm = 0.5 * (xs[i] + xs[i + 1]);
      if (xm <= xs[i] || xm >= xs[i + 1]) continue;
      const double truth = cum[i] + seg(xs[i], xm);
      if (std::abs(interp(xm) * z - truth) > 2e-11 * z) {
        nx.push_back(xm);
        ncum.push_back(truth);
        inserted = true;
      }
    }
    nx.push_back(xs.back());
    ncum.push_back(cum.back());
    if (!inserted) break;
    xs = std::move(nx);
    cum = std::move(ncum);
    if (xs.size() > 60000) break;
  }

  std::vector<double> fs(cum.size());
  for (std::size_t i = 0; i < cum.size(); ++i) {
    fs[i] = std::min(1.0, std::max(0.0, cum[i] / z));
  }
  fs.front() = 0.0;
  fs.back() = 1.0;
  OptimalCompander out{Compander::tabulated(std::move(xs), std::move(fs)),
                       z * z * z / 24.0};
  return out;
}

double minimax_saddle_loss(const MaximinConstants& constants) {
  const double phi1 =
      2.0 * std::asinh(std::sqrt(constants.r)) / std::sqrt(constants.b);
  return phi1 * phi1 * phi1 / 24.0;
}

std::vector<double> convergence_probe(const SingleLetterDensity& p,
                                      const Compander& f,
                                      const std::vector<std::uint64_t>& Ns) {
  if (Ns.empty()) throw DomainError("convergence_probe: empty N list");
  for (std::size_t i = 1; i < Ns.size(); ++i) {
    if (Ns[i] <= Ns[i - 1]) {
      throw DomainError("convergence_probe: N list must ascend");
    }
  }
  std::vector<double> out;
  out.reserve(Ns.size());
  for (std::uint64_t n : Ns) {
    out.push_back(static_cast<double>(n) * static_cast<double>(n) *
                  single_letter_loss(p, f, n));
  }
  return out;
}

double alt_loss(AltMetric metric, const ProbVector& x, const ProbVector& z) {
  if (x.size() != z.size()) throw DomainError("alt_loss: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - z[i];
    acc += metric == AltMetric::l1 ? std::abs(d) : d * d;
  }
  return acc;
}

double power_point_loss(std::uint64_t K, double s) {
  if (K < 2 || !(s > 0.0) || s > 1.0) {
    throw DomainError("power_point_loss: need K >= 2 and s in (0,1]");
  }
  const double logk = std::log(static_cast<double>(K));
  return std::exp((2.0 * s - 1.0) * logk) / (24.0 * s * s);
}

double approx_minimax_excess(double c) {
  if (!(c > 0.0)) throw DomainError("approx_minimax_excess: need c > 0");
  return std::max(2.0 * c - 1.0, 0.5 / c - 1.0);
}

}  // namespace simplexq
