#include "simplexq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "simplexq/datasets.hpp"
#include "simplexq/density.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/float_format.hpp"

namespace simplexq {

namespace {

struct Source {
  std::string label;
  std::uint64_t K;
  std::vector<double> fixed;  // empty: synthetic uniform-simplex draws
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_row(std::string& out, const LossReport& r) {
  out += r.method;
  out += ',';
  out += std::to_string(r.K);
  out += ',';
  out += std::to_string(r.N);
  out += ',';
  out += std::to_string(r.b);
  out += ',';
  out += fmt_double(r.nats);
  out += ',';
  out += fmt_double(r.bits_per_entry);
  out += ',';
  out += fmt_double(r.raw_loss);
  out += ',';
  out += std::to_string(r.trials);
  out += ',';
  out += fmt_double(r.stderr_nats);
  out += '\n';
}

void validate(const ExperimentConfig& c) {
  if (c.methods.empty()) throw DomainError("run: empty method list");
  if (c.alphabet_sizes.empty() == c.dataset_paths.empty()) {
    throw DomainError(
        "run: exactly one of alphabet sizes and dataset paths must be given");
  }
  if (c.bits.empty()) throw DomainError("run: empty bit-width list");
  for (int b : c.bits) {
    if (b < 1 || b > 32) throw DomainError("run: bit widths must lie in [1, 32]");
  }
  if (c.trials == 0) throw DomainError("run: trials must be >= 1");
  for (std::uint64_t k : c.alphabet_sizes) {
    if (k < 2) throw DomainError("run: alphabet sizes must be >= 2");
  }
}

std::vector<Source> load_sources(const ExperimentConfig& c) {
  std::vector<Source> sources;
  for (std::uint64_t k : c.alphabet_sizes) {
    sources.push_back(Source{"synthetic", k, {}});
  }
  for (const std::string& path : c.dataset_paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("run: cannot open dataset " + path);
    EmpiricalDistribution d = c.kmer_k > 0
                                  ? kmer_frequencies(in, c.kmer_k, path)
                                  : word_frequencies(in, path);
    sources.push_back(Source{path, d.size(), d.frequencies.entries()});
  }
  return sources;
}

double roundtrip_width(int b, double x) {
  if (b == 8) return Minifloat8::roundtrip(x);
  if (b == 16) return Bfloat16::roundtrip(x);
  throw DomainError("run: the float method supports b = 8 and b = 16 only");
}

}  // namespace

MaximinConstants cached_constants(
    std::uint64_t K, std::map<std::uint64_t, MaximinConstants>* cache) {
  if (cache != nullptr) {
    auto it = cache->find(K);
    if (it != cache->end()) return it->second;
  }
  MaximinConstants c = MaximinConstants::solve(K);
  if (cache != nullptr) cache->emplace(K, c);
  return c;
}

std::map<std::uint64_t, MaximinConstants> load_constants_cache(
    const std::string& path) {
  std::map<std::uint64_t, MaximinConstants> out;
  std::ifstream in(path);
  if (!in) return out;  // a cache that does not exist yet is just empty
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const MaximinConstants c = MaximinConstants::from_record(line);
    out.emplace(c.K, c);
  }
  return out;
}

void save_constants_cache(const std::string& path,
                          const std::map<std::uint64_t, MaximinConstants>& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write constants cache " + path);
  for (const auto& [k, c] : m) {
    (void)k;
    out << c.to_record() << '\n';
  }
  if (!out) throw IoError("failed writing constants cache " + path);
}

Quantizer method_quantizer(const std::string& method, std::uint64_t K,
                           std::uint64_t levels, DecodeMode decode,
                           std::map<std::uint64_t, MaximinConstants>* cache) {
  std::optional<SingleLetterDensity> density;
  if (decode == DecodeMode::centroid) {
    // Centroid decoding in the harness assumes the uniform-simplex prior,
    // whose per-entry marginal is Beta(1, K-1).
    density = dirichlet_marginal(K, 1.0);
  }
  Compander f = [&]() {
    if (method == "truncation") return Compander::identity();
    if (method == "approx_minimax") return Compander::approx_minimax(K);
    if (method == "minimax") {
      return Compander::minimax(cached_constants(K, cache));
    }
    if (method == "power") {
      const double s = std::min(1.0, 1.0 / std::log(static_cast<double>(K)));
      return Compander::power(s);
    }
    throw DomainError("unknown method: " + method);
  }();
  return Quantizer(std::move(f), levels, decode, std::move(density));
}

RunResult run(const ExperimentConfig& config) {
  validate(config);
  std::map<std::uint64_t, MaximinConstants> cache;
  const bool persistent_cache = !config.constants_cache_path.empty();
  if (persistent_cache) {
    cache = load_constants_cache(config.constants_cache_path);
  }

  const std::vector<Source> sources = load_sources(config);
  const bool uses_minimax =
      std::find(config.methods.begin(), config.methods.end(), "minimax") !=
      config.methods.end();

  RunResult result;
  for (const std::string& method : config.methods) {
    for (std::size_t si = 0; si < sources.size(); ++si) {
      const Source& src = sources[si];
      for (int b : config.bits) {
        // The draw stream depends on the source and width only, so methods
        // compare on identical draws (paired).
        Rng rng = Rng::stream(config.seed, si * 64 + static_cast<unsigned>(b));
        const std::uint64_t trials = src.fixed.empty() ? config.trials : 1;
        std::function<ProbVector(Rng&)> sampler;
        if (src.fixed.empty()) {
          const std::uint64_t K = src.K;
          sampler = [K](Rng& r) { return sample_uniform_simplex(K, r); };
        } else {
          sampler = [&src](Rng&) {
            return ProbVector::validated(src.fixed);
          };
        }
        LossReport row;
        if (method == "float") {
          row = expected_loss_roundtrip_mc(
              sampler, [b](double x) { return roundtrip_width(b, x); }, trials,
              rng, method);
          row.b = b;
        } else {
          const Quantizer q = method_quantizer(
              method, src.K, std::uint64_t{1} << b, config.decode, &cache);
          row = expected_loss_mc(sampler, q, trials, rng, method);
        }
        result.rows.push_back(std::move(row));
      }
    }
  }

  if (persistent_cache && uses_minimax) {
    save_constants_cache(config.constants_cache_path, cache);
  }

  result.header.push_back("seed=" + std::to_string(config.seed));
  result.header.push_back("config=" + config_hash(config));
  result.header.push_back(
      "constants_cache=" +
      (persistent_cache ? config.constants_cache_path : std::string("none")));
  if (uses_minimax) {
    for (const Source& src : sources) {
      result.header.push_back("constants " +
                              cached_constants(src.K, &cache).to_record());
    }
  }
  for (const Source& src : sources) {
    if (!src.fixed.empty()) {
      result.header.push_back("dataset " + src.label +
                              " K=" + std::to_string(src.K));
    }
  }
  return result;
}

std::string loss_csv(const RunResult& result) {
  std::string out;
  for (const std::string& line : result.header) {
    out += "# ";
    out += line;
    out += '\n';
  }
  out += "method,K,N,b,nats,bits_per_entry,raw_loss,trials,stderr\n";
  for (const LossReport& r : result.rows) append_row(out, r);
  for (const LossReport& r : result.rows) {
    if (r.infinite_events > 0) {
      out += "# infinite_events method=" + r.method +
             " K=" + std::to_string(r.K) + " N=" + std::to_string(r.N) +
             " b=" + std::to_string(r.b) +
             " count=" + std::to_string(r.infinite_events) + '\n';
    }
  }
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  std::string canon = "methods=";
  for (const std::string& m : config.methods) canon += m + ",";
  canon += "|K=";
  for (std::uint64_t k : config.alphabet_sizes) canon += std::to_string(k) + ",";
  canon += "|datasets=";
  for (const std::string& d : config.dataset_paths) canon += d + ",";
  canon += "|kmer_k=" + std::to_string(config.kmer_k);
  canon += "|bits=";
  for (int b : config.bits) canon += std::to_string(b) + ",";
  canon += "|decode=";
  canon += config.decode == DecodeMode::centroid ? "centroid" : "midpoint";
  canon += "|trials=" + std::to_string(config.trials);
  canon += "|seed=" + std::to_string(config.seed);

  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace simplexq
