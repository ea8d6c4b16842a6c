#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "simplexq/errors.hpp"
#include "simplexq/harness.hpp"

using namespace simplexq;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.methods = {"truncation", "approx_minimax", "power", "float"};
  c.alphabet_sizes = {64};
  c.bits = {8};
  c.trials = 30;
  c.seed = 12345;
  return c;
}

// Data rows only, keyed "method,K,N,b" -> full row.
std::vector<std::pair<std::string, std::string>> rows_of(const std::string& csv) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method,", 0) == 0) continue;
    std::size_t comma = 0;
    for (int i = 0; i < 4; ++i) comma = line.find(',', comma + 1);
    rows.emplace_back(line.substr(0, comma), line);
  }
  return rows;
}

}  // namespace

TEST_CASE("identical config reproduces the csv byte for byte") {
  const ExperimentConfig c = small_config();
  const std::string a = loss_csv(run(c));
  const std::string b = loss_csv(run(c));
  CHECK(a == b);
  CHECK(a.find("# seed=12345") != std::string::npos);
  CHECK(a.find("# config=" + config_hash(c)) != std::string::npos);
}

TEST_CASE("per-method rows do not depend on which methods ran alongside") {
  ExperimentConfig lone;
  lone.methods = {"approx_minimax"};
  lone.alphabet_sizes = {64};
  lone.bits = {8};
  lone.trials = 30;
  lone.seed = 12345;
  const auto solo = rows_of(loss_csv(run(lone)));
  const auto full = rows_of(loss_csv(run(small_config())));
  REQUIRE(solo.size() == 1);
  bool found = false;
  for (const auto& [key, row] : full) {
    if (key == solo[0].first) {
      found = true;
      CHECK(row == solo[0].second);
    }
  }
  CHECK(found);
}

TEST_CASE("emitted rows satisfy the unit relation between columns") {
  const std::string csv = loss_csv(run(small_config()));
  std::istringstream in(csv);
  std::string line;
  int data_rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method,", 0) == 0) continue;
    ++data_rows;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    REQUIRE(cols.size() == 9);
    const double K = std::stod(cols[1]);
    const double nats = std::stod(cols[4]);
    const double bits = std::stod(cols[5]);
    CHECK(bits == doctest::Approx(nats / (K * std::log(2.0))).epsilon(1e-12));
  }
  CHECK(data_rows == 4);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config();
  c.methods.clear();
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.dataset_paths = {"somewhere.txt"};  // both synthetic and dataset sources
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.alphabet_sizes.clear();
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.bits = {0};
  CHECK_THROWS_AS(run(c), DomainError);
  c.bits = {33};
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.methods = {"wavelet"};
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.alphabet_sizes = {1};
  CHECK_THROWS_AS(run(c), DomainError);

  c = small_config();
  c.dataset_paths = {"/no/such/file.txt"};
  c.alphabet_sizes.clear();
  CHECK_THROWS_AS(run(c), IoError);
}

TEST_CASE("config hash separates configs and ignores nothing it should not") {
  ExperimentConfig a = small_config();
  ExperimentConfig b = small_config();
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 999;
  CHECK(config_hash(a) != config_hash(b));
  b = small_config();
  b.trials = 31;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("dataset sources run each method once over the fixed vector") {
  const char* path = "harness_words.tmp";
  {
    std::ofstream out(path);
    out << "the quick brown fox jumps over the lazy dog the end";
  }
  ExperimentConfig c;
  c.methods = {"truncation", "approx_minimax"};
  c.dataset_paths = {path};
  c.bits = {6};
  c.trials = 50;  // ignored for fixed sources
  c.seed = 3;
  const RunResult r = run(c);
  REQUIRE(r.rows.size() == 2);
  for (const LossReport& row : r.rows) {
    CHECK(row.trials == 1);
    CHECK(row.K == 9);  // 8 distinct words + "the" counted once
    CHECK(row.nats >= 0.0);
  }
  std::string header;
  for (const std::string& h : r.header) header += h + "\n";
  CHECK(header.find(path) != std::string::npos);
  std::remove(path);
}

TEST_CASE("constants cache persists solved values") {
  const char* path = "constants_cache.tmp";
  std::remove(path);
  {
    std::map<std::uint64_t, MaximinConstants> cache;
    const MaximinConstants c = cached_constants(100, &cache);
    CHECK(cache.count(100) == 1);
    const MaximinConstants again = cached_constants(100, &cache);
    CHECK(again.c == c.c);
    save_constants_cache(path, cache);
  }
  {
    std::map<std::uint64_t, MaximinConstants> cache = load_constants_cache(path);
    REQUIRE(cache.count(100) == 1);
    const MaximinConstants fresh = MaximinConstants::solve(100);
    CHECK(cache.at(100).c == doctest::Approx(fresh.c).epsilon(1e-14));
  }
  // A missing file is an empty cache, not an error.
  CHECK(load_constants_cache("/no/such/cache.txt").empty());
  std::remove(path);
}

TEST_CASE("harness quantizer factory covers every advertised method") {
  std::map<std::uint64_t, MaximinConstants> cache;
  for (const char* m : {"truncation", "approx_minimax", "minimax", "power"}) {
    const Quantizer q = method_quantizer(m, 100, 256, DecodeMode::midpoint, &cache);
    CHECK(q.levels() == 256);
    CHECK(q.encode(0.5) >= 1);
  }
  CHECK_THROWS_AS(
      method_quantizer("float", 100, 256, DecodeMode::midpoint, &cache),
      DomainError);
  const Quantizer c =
      method_quantizer("approx_minimax", 100, 64, DecodeMode::centroid, &cache);
  CHECK(c.mode() == DecodeMode::centroid);
}
