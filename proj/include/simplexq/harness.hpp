#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "simplexq/loss.hpp"
#include "simplexq/maximin.hpp"
#include "simplexq/quantizer.hpp"

namespace simplexq {

// One experiment grid: methods x sources x bit widths. Sources are either
// synthetic alphabet sizes (uniform-simplex draws) or dataset files; exactly
// one of the two lists must be nonempty.
struct ExperimentConfig {
  // Any of: truncation, approx_minimax, minimax, power, float.
  std::vector<std::string> methods;
  std::vector<std::uint64_t> alphabet_sizes;
  std::vector<std::string> dataset_paths;
  unsigned kmer_k = 0;  // 0: datasets are word text; else FASTA with this k
  std::vector<int> bits;  // N = 2^b, b in [1, 32]
  DecodeMode decode = DecodeMode::midpoint;
  std::uint64_t trials = 100;  // dataset rows are deterministic: forced to 1
  std::uint64_t seed = 1;
  std::string constants_cache_path;  // optional, persists solved constants
};

struct RunResult {
  std::vector<LossReport> rows;
  std::vector<std::string> header;  // metadata lines, without the '#'
};

// Runs the grid. Draw streams depend on the source and bit width but not
// the method, so methods at the same grid point see identical inputs and
// their losses compare as paired samples. The float method uses b=8 or
// b=16 storage formats instead of a compander.
RunResult run(const ExperimentConfig& config);

// method,K,N,b,nats,bits_per_entry,raw_loss,trials,stderr under the
// metadata header; trailing comment lines surface any infinite-divergence
// trial counts. Byte-identical across reruns of the same config.
std::string loss_csv(const RunResult& result);

// FNV-1a over the canonical config serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Text-file cache of solved maximin constants, one record per line.
std::map<std::uint64_t, MaximinConstants> load_constants_cache(
    const std::string& path);
void save_constants_cache(const std::string& path,
                          const std::map<std::uint64_t, MaximinConstants>& m);
// Solves on miss and inserts; `cache` may be null for solve-always.
MaximinConstants cached_constants(std::uint64_t K,
                                  std::map<std::uint64_t, MaximinConstants>* cache);

// Builds the quantizer a method name denotes. The float method has no
// quantizer; callers handle it separately (run() does).
Quantizer method_quantizer(const std::string& method, std::uint64_t K,
                           std::uint64_t levels, DecodeMode decode,
                           std::map<std::uint64_t, MaximinConstants>* cache);

}  // namespace simplexq
