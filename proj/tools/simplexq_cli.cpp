// Command-line driver: quantize probability vectors, run loss experiments,
// print solved constants, certify worst-case bounds, compare distillation
// bounds, probe convergence, and reproduce the bad-prior scaling study.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "simplexq/codec.hpp"
#include "simplexq/datasets.hpp"
#include "simplexq/density.hpp"
#include "simplexq/distill.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/harness.hpp"
#include "simplexq/loss.hpp"
#include "simplexq/samplers.hpp"
#include "simplexq/worstcase.hpp"

namespace {

using namespace simplexq;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path);
  out << text;
  if (!out) throw IoError("failed writing " + out_path);
}

std::vector<double> read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) {
    throw ParseError("vector file: non-numeric content in " + path,
                     v.size() + 1);
  }
  return v;
}

SingleLetterDensity named_density(const std::string& name, std::uint64_t K) {
  if (name == "beta") return dirichlet_marginal(K, 1.0);
  if (name == "maximin") {
    return SingleLetterDensity::maximin(MaximinConstants::solve(K));
  }
  if (name == "uniform") {
    return SingleLetterDensity::uniform_interval(
        0.0, 2.0 / static_cast<double>(K));
  }
  throw DomainError("unknown density: " + name +
                    " (expected beta, maximin, or uniform)");
}

struct QuantizeArgs {
  std::string in, out, method = "approx_minimax", cache;
  int bits = 8;
  bool normalize = false;
  std::string decode = "midpoint";
};

void cmd_quantize(const QuantizeArgs& a) {
  std::vector<double> raw = read_vector(a.in);
  ProbVector x = a.normalize ? ProbVector::normalized(std::move(raw))
                             : ProbVector::validated(std::move(raw));
  auto cache = a.cache.empty() ? std::map<std::uint64_t, MaximinConstants>{}
                               : load_constants_cache(a.cache);
  const DecodeMode mode =
      a.decode == "centroid" ? DecodeMode::centroid : DecodeMode::midpoint;
  const Quantizer q = method_quantizer(a.method, x.size(),
                                       std::uint64_t{1} << a.bits, mode,
                                       a.cache.empty() ? nullptr : &cache);
  const QuantizeResult r = q.quantize(x);
  {
    std::ofstream out(a.out, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write " + a.out);
    write_codes_file(out, q.compander(), q.levels(), r.codes);
    if (!out) throw IoError("failed writing " + a.out);
  }
  if (!a.cache.empty()) save_constants_cache(a.cache, cache);
  const double loss = kl_divergence(x, ProbVector::validated(r.z));
  std::cout << "K=" << x.size() << " N=" << q.levels()
            << " width_bits=" << code_width(q.levels()) << " loss_nats="
            << fmt(loss) << " out=" << a.out << "\n";
}

struct WorstcaseArgs {
  std::string method = "approx_minimax", out;
  std::uint64_t K = 1000;
  int bits = 8;
  std::uint64_t budget = 10000;
  bool sharpened = false;
};

void cmd_worstcase(const WorstcaseArgs& a) {
  const WorstCaseMethod m = worst_case_method_from_string(a.method);
  const std::uint64_t N = std::uint64_t{1} << a.bits;
  const WorstCaseBound bound = worstcase_bound(m, a.K, N, a.sharpened);
  std::string text = "method,K,N,bound,achieved,ratio\n";
  if (!bound.satisfied) {
    text += "# " + a.method + " K=" + std::to_string(a.K) +
            " N=" + std::to_string(N) + " unsatisfied: " + bound.reason + "\n";
    emit(text, a.out);
    return;
  }
  Compander f = [&]() {
    switch (m) {
      case WorstCaseMethod::minimax:
        return Compander::minimax(MaximinConstants::solve(a.K));
      case WorstCaseMethod::approx_minimax:
        return Compander::approx_minimax(a.K);
      case WorstCaseMethod::power:
        return Compander::power(
            std::min(1.0, 1.0 / std::log(static_cast<double>(a.K))));
    }
    throw DomainError("unreachable");
  }();
  const Quantizer q(std::move(f), N, DecodeMode::midpoint);
  const AdversarialResult r = adversarial_search(q, a.K, a.budget);
  text += a.method + "," + std::to_string(a.K) + "," + std::to_string(N) +
          "," + fmt(bound.bound) + "," + fmt(r.achieved) + "," +
          fmt(r.achieved / bound.bound) + "\n";
  emit(text, a.out);
}

struct DistillArgs {
  std::uint64_t K = 10;
  double log2_m = 40.0;
  std::uint64_t seed = 1;
  bool demo = false;
};

void cmd_distill(const DistillArgs& a) {
  const DegradingCostBounds b =
      degrading_cost_bounds(a.K, a.log2_m * std::log(2.0));
  std::cout << "K=" << a.K << " log2(M)=" << fmt(a.log2_m) << "\n";
  auto show = [](const char* name, const DegradingCostBound& v) {
    if (v.available) {
      std::cout << name << "=" << fmt(v.value) << "\n";
    } else {
      std::cout << name << "=unavailable (" << v.reason << ")\n";
    }
  };
  show("compander_bound", b.compander);
  show("covering_linear_bound", b.covering_linear);
  show("covering_log_bound", b.covering_log);
  std::cout << "smallest=" << (b.smallest.empty() ? "none" : b.smallest)
            << "\n";
  if (!a.demo) return;

  // Small seeded instance: K=3, |B|=5, M=2, comparing the exhaustive
  // optimum against the compander-derived distiller.
  Rng rng(a.seed);
  std::vector<double> matrix(3 * 5);
  double total = 0.0;
  for (double& v : matrix) {
    v = rng.uniform01() + 0.05;
    total += v;
  }
  for (double& v : matrix) v /= total;
  // Nudge the largest cell so the matrix sums to 1 at double precision.
  double sum = 0.0;
  for (double v : matrix) sum += v;
  matrix[0] += 1.0 - sum;
  const JointDistribution j = JointDistribution::validated(matrix, 3, 5);
  const DistillOutcome best = brute_force_distiller(j, 2);
  const DistillOutcome best_q = brute_force_quantizer(j, 2);
  const Quantizer q(Compander::approx_minimax(3), 1, DecodeMode::midpoint);
  const DistillOutcome derived = distiller_from_quantizer(j, q);
  std::cout << "demo I(A;B)=" << fmt(mutual_information(j))
            << " brute_info_loss=" << fmt(best.info_loss)
            << " brute_kl_loss=" << fmt(best_q.kl_loss)
            << " compander_info_loss=" << fmt(derived.info_loss) << "\n";
}

struct ConvergenceArgs {
  std::uint64_t K = 100;
  std::string method = "power", density = "beta", out, cache;
  std::vector<int> bits{4, 6, 8, 10, 12, 14, 16};
};

void cmd_convergence(const ConvergenceArgs& a) {
  auto cache = a.cache.empty() ? std::map<std::uint64_t, MaximinConstants>{}
                               : load_constants_cache(a.cache);
  const SingleLetterDensity p = named_density(a.density, a.K);
  const Quantizer probe = method_quantizer(a.method, a.K, 2, DecodeMode::midpoint,
                                           a.cache.empty() ? nullptr : &cache);
  const Compander& f = probe.compander();
  std::vector<std::uint64_t> Ns;
  for (int b : a.bits) {
    if (b < 1 || b > 32) throw DomainError("convergence: bits must lie in [1, 32]");
    Ns.push_back(std::uint64_t{1} << b);
  }
  const std::vector<double> scaled = convergence_probe(p, f, Ns);
  std::string text;
  const double limit = asymptotic_loss(p, f);
  text += "# K=" + std::to_string(a.K) + " method=" + a.method +
          " density=" + a.density + "\n";
  text += "# asymptotic=" + fmt(limit) + "\n";
  text += "N,n2_loss,ratio_to_limit\n";
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const double ratio = std::isfinite(limit) && limit > 0.0
                             ? scaled[i] / limit
                             : std::numeric_limits<double>::quiet_NaN();
    text += std::to_string(Ns[i]) + "," + fmt(scaled[i]) + "," + fmt(ratio) +
            "\n";
  }
  emit(text, a.out);
}

struct BadpriorArgs {
  std::uint64_t K = 256, trials = 200, seed = 1;
  std::vector<int> bits{6, 7, 8, 9, 10, 11, 12};
  std::string out;
};

void cmd_badprior(const BadpriorArgs& a) {
  std::string text = "# K=" + std::to_string(a.K) +
                     " trials=" + std::to_string(a.trials) +
                     " seed=" + std::to_string(a.seed) + "\n";
  text += "method,K,N,b,raw_n2,raw_n2_stderr,trials\n";
  const std::uint64_t K = a.K;
  for (const std::string method : {"truncation", "approx_minimax"}) {
    for (int b : a.bits) {
      if (b < 1 || b > 32) throw DomainError("badprior: bits must lie in [1, 32]");
      const std::uint64_t N = std::uint64_t{1} << b;
      const Quantizer q =
          method_quantizer(method, K, N, DecodeMode::midpoint, nullptr);
      Rng rng = Rng::stream(a.seed, static_cast<std::uint64_t>(b));
      const LossReport r = expected_loss_mc(
          [K](Rng& g) { return uniform_bad_prior(K, g); }, q, a.trials, rng,
          method);
      const double n2 = static_cast<double>(N) * static_cast<double>(N);
      text += method + "," + std::to_string(K) + "," + std::to_string(N) +
              "," + std::to_string(b) + "," + fmt(r.raw_loss * n2) + "," +
              fmt(r.raw_stderr * n2) + "," + std::to_string(r.trials) + "\n";
    }
  }
  emit(text, a.out);
}

struct SweepArgs {
  std::uint64_t K = 0, trials = 100, seed = 1;
  std::string dataset, out;
  unsigned kmer_k = 0;
  int bits = 8;
  std::vector<double> s_values;
};

void cmd_power_sweep(const SweepArgs& a) {
  if ((a.K == 0) == a.dataset.empty()) {
    throw DomainError("power-sweep: give exactly one of --K and --dataset");
  }
  std::vector<double> fixed;
  std::uint64_t K = a.K;
  if (!a.dataset.empty()) {
    std::ifstream in(a.dataset, std::ios::binary);
    if (!in) throw IoError("cannot open dataset " + a.dataset);
    EmpiricalDistribution d = a.kmer_k > 0
                                  ? kmer_frequencies(in, a.kmer_k, a.dataset)
                                  : word_frequencies(in, a.dataset);
    fixed = d.frequencies.entries();
    K = d.size();
  }
  std::vector<double> grid = a.s_values;
  if (grid.empty()) {
    for (double s = 0.05; s <= 0.501; s += 0.05) grid.push_back(s);
    grid.push_back(std::min(1.0, 1.0 / std::log(static_cast<double>(K))));
    std::sort(grid.begin(), grid.end());
  }
  const std::uint64_t N = std::uint64_t{1} << a.bits;
  std::string text = "# K=" + std::to_string(K) +
                     " seed=" + std::to_string(a.seed) + "\n";
  text += "method,K,N,b,nats,bits_per_entry,raw_loss,trials,stderr\n";
  for (double s : grid) {
    if (!(s > 0.0) || s > 1.0) {
      throw DomainError("power-sweep: s must lie in (0, 1]");
    }
    const Quantizer q(Compander::power(s), N, DecodeMode::midpoint);
    Rng rng = Rng::stream(a.seed, static_cast<std::uint64_t>(a.bits));
    std::function<ProbVector(Rng&)> sampler;
    std::uint64_t trials = a.trials;
    if (fixed.empty()) {
      sampler = [K](Rng& g) { return sample_uniform_simplex(K, g); };
    } else {
      sampler = [&fixed](Rng&) { return ProbVector::validated(fixed); };
      trials = 1;
    }
    LossReport r = expected_loss_mc(sampler, q, trials, rng, "power:s=" + fmt(s));
    std::ostringstream row;
    row << r.method << ',' << r.K << ',' << r.N << ',' << r.b << ','
        << fmt(r.nats) << ',' << fmt(r.bits_per_entry) << ','
        << fmt(r.raw_loss) << ',' << r.trials << ',' << fmt(r.stderr_nats)
        << '\n';
    text += row.str();
  }
  emit(text, a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compander-based quantization of probability vectors"};
  app.require_subcommand(1);

  QuantizeArgs qa;
  CLI::App* quantize = app.add_subcommand("quantize", "Encode a vector file");
  quantize->add_option("--in", qa.in, "Input vector file (whitespace-separated)")
      ->required();
  quantize->add_option("--out", qa.out, "Output codes file")->required();
  quantize->add_option("--method", qa.method,
                       "truncation|approx_minimax|minimax|power");
  quantize->add_option("--bits", qa.bits, "Bits per entry (N = 2^b)")
      ->check(CLI::Range(1, 32));
  quantize->add_option("--decode", qa.decode, "midpoint|centroid")
      ->check(CLI::IsMember({"midpoint", "centroid"}));
  quantize->add_flag("--normalize", qa.normalize,
                     "Rescale the input to sum to 1");
  quantize->add_option("--constants-cache", qa.cache, "Constants cache file");

  ExperimentConfig ec;
  std::string eval_out, eval_decode = "midpoint";
  CLI::App* eval = app.add_subcommand("eval", "Run a loss experiment grid");
  eval->add_option("--methods", ec.methods, "Comma-separated method list")
      ->required()
      ->delimiter(',');
  eval->add_option("--K", ec.alphabet_sizes, "Synthetic alphabet sizes")
      ->delimiter(',');
  eval->add_option("--dataset", ec.dataset_paths, "Dataset files")
      ->delimiter(',');
  eval->add_option("--kmer-k", ec.kmer_k, "Treat datasets as FASTA k-mers");
  eval->add_option("--bits", ec.bits, "Bit widths")->required()->delimiter(',');
  eval->add_option("--decode", eval_decode, "midpoint|centroid")
      ->check(CLI::IsMember({"midpoint", "centroid"}));
  eval->add_option("--trials", ec.trials, "Monte-Carlo trials per grid point");
  eval->add_option("--seed", ec.seed, "RNG seed");
  eval->add_option("--constants-cache", ec.constants_cache_path,
                   "Constants cache file");
  eval->add_option("--out", eval_out, "Output CSV path (default stdout)");

  std::vector<std::uint64_t> const_ks;
  std::string const_cache;
  CLI::App* constants =
      app.add_subcommand("constants", "Solve and print maximin constants");
  constants->add_option("--K", const_ks, "Alphabet sizes")
      ->required()
      ->delimiter(',');
  constants->add_option("--cache", const_cache, "Constants cache file");

  WorstcaseArgs wa;
  CLI::App* worstcase =
      app.add_subcommand("worstcase", "Bound plus adversarial search");
  worstcase->add_option("--method", wa.method,
                        "minimax|approx_minimax|power");
  worstcase->add_option("--K", wa.K, "Alphabet size");
  worstcase->add_option("--bits", wa.bits, "Bits per entry")
      ->check(CLI::Range(1, 32));
  worstcase->add_option("--budget", wa.budget, "Search evaluation budget");
  worstcase->add_flag("--sharpened", wa.sharpened,
                      "Large-alphabet constant (approx_minimax, K >= 55)");
  worstcase->add_option("--out", wa.out, "Output CSV path (default stdout)");

  DistillArgs da;
  CLI::App* distill =
      app.add_subcommand("distill", "Degrading-cost bounds and a small demo");
  distill->add_option("--K", da.K, "Alphabet size (>= 5)");
  distill->add_option("--log2M", da.log2_m, "log2 of the label budget M");
  distill->add_option("--seed", da.seed, "Demo instance seed");
  distill->add_flag("--demo", da.demo, "Run the small-instance demo");

  ConvergenceArgs ca;
  CLI::App* convergence =
      app.add_subcommand("convergence", "N^2-scaled loss against its limit");
  convergence->add_option("--K", ca.K, "Alphabet size");
  convergence->add_option("--method", ca.method,
                          "truncation|approx_minimax|minimax|power");
  convergence->add_option("--density", ca.density, "beta|maximin|uniform");
  convergence->add_option("--bits", ca.bits, "Bit widths")->delimiter(',');
  convergence->add_option("--constants-cache", ca.cache, "Constants cache file");
  convergence->add_option("--out", ca.out, "Output CSV path (default stdout)");

  BadpriorArgs ba;
  CLI::App* badprior = app.add_subcommand(
      "badprior", "Uniform-quantizer scaling on the paired uniform prior");
  badprior->add_option("--K", ba.K, "Alphabet size (even pairs best)");
  badprior->add_option("--bits", ba.bits, "Bit widths")->delimiter(',');
  badprior->add_option("--trials", ba.trials, "Trials per width");
  badprior->add_option("--seed", ba.seed, "RNG seed");
  badprior->add_option("--out", ba.out, "Output CSV path (default stdout)");

  SweepArgs sa;
  CLI::App* sweep =
      app.add_subcommand("power-sweep", "Loss across power exponents");
  sweep->add_option("--K", sa.K, "Synthetic alphabet size");
  sweep->add_option("--dataset", sa.dataset, "Dataset file");
  sweep->add_option("--kmer-k", sa.kmer_k, "Treat dataset as FASTA k-mers");
  sweep->add_option("--bits", sa.bits, "Bits per entry")
      ->check(CLI::Range(1, 32));
  sweep->add_option("--s", sa.s_values, "Exponent grid")->delimiter(',');
  sweep->add_option("--trials", sa.trials, "Trials per exponent");
  sweep->add_option("--seed", sa.seed, "RNG seed");
  sweep->add_option("--out", sa.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*quantize) cmd_quantize(qa);
    if (*eval) {
      ec.decode = eval_decode == "centroid" ? DecodeMode::centroid
                                            : DecodeMode::midpoint;
      emit(loss_csv(run(ec)), eval_out);
    }
    if (*constants) {
      auto cache = const_cache.empty()
                       ? std::map<std::uint64_t, MaximinConstants>{}
                       : load_constants_cache(const_cache);
      for (std::uint64_t k : const_ks) {
        const MaximinConstants c =
            cached_constants(k, const_cache.empty() ? nullptr : &cache);
        std::cout << c.to_record() << " r=" << fmt(c.r) << "\n";
      }
      if (!const_cache.empty()) save_constants_cache(const_cache, cache);
    }
    if (*worstcase) cmd_worstcase(wa);
    if (*distill) cmd_distill(da);
    if (*convergence) cmd_convergence(ca);
    if (*badprior) cmd_badprior(ba);
    if (*sweep) cmd_power_sweep(sa);
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
