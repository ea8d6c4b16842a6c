#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "simplexq/datasets.hpp"
#include "simplexq/detail/rng.hpp"
#include "simplexq/errors.hpp"
#include "simplexq/quantizer.hpp"

using namespace simplexq;

namespace {

std::map<std::string, double> freq_map(const EmpiricalDistribution& d) {
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < d.size(); ++i) {
    m[d.symbols[i]] = d.frequencies[i];
  }
  return m;
}

}  // namespace

TEST_CASE("word counting with case folding and punctuation tokens") {
  {
    std::istringstream in("a b a");
    const auto m = freq_map(word_frequencies(in));
    CHECK(m.size() == 2);
    CHECK(m.at("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.at("b") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  {
    std::istringstream in("Hi, hi!");
    const auto m = freq_map(word_frequencies(in));
    CHECK(m.size() == 3);
    CHECK(m.at("hi") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.at(",") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.at("!") == doctest::Approx(0.25).epsilon(1e-15));
  }
  {
    std::istringstream in("one-two one2 ONE2");
    const EmpiricalDistribution d = word_frequencies(in);
    const auto m = freq_map(d);
    // Hyphen splits; digits stay inside tokens; folding merges the last two.
    CHECK(m.at("one") == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(m.at("-") == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(m.at("two") == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(m.at("one2") == doctest::Approx(0.4).epsilon(1e-15));
    double total = 0.0;
    for (double f : d.frequencies.entries()) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.total == 5);
  }
  std::istringstream empty("  \n\t ");
  CHECK_THROWS_AS(word_frequencies(empty), DomainError);
}

TEST_CASE("word counting is deterministic") {
  std::istringstream a("the cat, the hat"), b("the cat, the hat");
  const EmpiricalDistribution da = word_frequencies(a);
  const EmpiricalDistribution db = word_frequencies(b);
  CHECK(da.symbols == db.symbols);
  CHECK(da.counts == db.counts);
}

TEST_CASE("short substring counting over a toy sequence") {
  std::istringstream in(">chr\nACGT\n");
  const EmpiricalDistribution d = kmer_frequencies(in, 2);
  CHECK(d.size() == 16);  // full 4^2 alphabet, absent pairs as exact zeros
  const auto m = freq_map(d);
  CHECK(m.at("AC") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.at("CG") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.at("GT") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.at("AA") == 0.0);
  CHECK(m.at("TT") == 0.0);
  int zeros = 0;
  for (double f : d.frequencies.entries()) zeros += (f == 0.0);
  CHECK(zeros == 13);
}

TEST_CASE("soft-masked and ambiguous bases break the window") {
  {
    std::istringstream in(">x\nACgtAC\n");
    const auto m = freq_map(kmer_frequencies(in, 2));
    // Windows Cg, gt, tA all touch lowercase and are skipped; only the two
    // AC windows count.
    CHECK(m.at("AC") == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    std::istringstream in(">x\nANA\n");
    CHECK_THROWS_AS(kmer_frequencies(in, 2), DomainError);
  }
  {
    // Windows never straddle records.
    std::istringstream in(">one\nAC\n>two\nGT\n");
    const auto m = freq_map(kmer_frequencies(in, 2));
    CHECK(m.at("AC") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.at("GT") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.count("CG") == 1);
    CHECK(m.at("CG") == 0.0);
  }
}

TEST_CASE("sequence parser reports the offending line") {
  std::istringstream bad_header(">ok\nACGT\n>\nACGT\n");
  try {
    kmer_frequencies(bad_header, 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad_char(">ok\nACGT\nAXGT\n");
  try {
    kmer_frequencies(bad_char, 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream ok(">r\nACGT\n");
  CHECK_THROWS_AS(kmer_frequencies(ok, 0), DomainError);
  std::istringstream ok2(">r\nACGT\n");
  CHECK_THROWS_AS(kmer_frequencies(ok2, 13), DomainError);
}

TEST_CASE("absent substrings flow into the reserved code") {
  std::istringstream in(">chr\nACGT\n");
  const EmpiricalDistribution d = kmer_frequencies(in, 2);
  const Quantizer q(Compander::approx_minimax(16), 64);
  const QuantizeResult r = q.quantize(d.frequencies);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.frequencies[i] == 0.0) {
      CHECK(r.codes[i] == 0);
      CHECK(r.z[i] == 0.0);
    } else {
      CHECK(r.codes[i] >= 1);
    }
  }
}

TEST_CASE("distribution csv output quotes awkward symbols") {
  std::istringstream in("Hi, hi!");
  const EmpiricalDistribution d = word_frequencies(in);
  std::ostringstream out;
  write_distribution_csv(d, out);
  const std::string text = out.str();
  CHECK(text.find("symbol,count,frequency\n") == 0);
  CHECK(text.find("\",\",1,") != std::string::npos);  // comma token is quoted
  CHECK(text.find("hi,2,") != std::string::npos);
}

TEST_CASE("count table round-trips through the binary format") {
  std::istringstream in("to be or not to be");
  const EmpiricalDistribution d = word_frequencies(in);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_count_table(d, buf);
  const EmpiricalDistribution back = read_count_table(buf);
  CHECK(back.label == d.label);
  CHECK(back.symbols == d.symbols);
  CHECK(back.counts == d.counts);
  CHECK(back.total == d.total);

  // Truncation and bad magic are detected, not silently accepted.
  const std::string bytes = buf.str();
  std::stringstream cut(std::ios::in | std::ios::out | std::ios::binary);
  cut << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(read_count_table(cut), DomainError);
  std::stringstream junk(std::ios::in | std::ios::out | std::ios::binary);
  junk << "NOPE" << bytes.substr(4);
  CHECK_THROWS_AS(read_count_table(junk), DomainError);
}

TEST_CASE("simplex sampler form in the datasets module") {
  Rng rng(8);
  const ProbVector x = sample_uniform_simplex(6, rng);
  CHECK(x.size() == 6);
  double sum = 0.0;
  for (double v : x.entries()) {
    CHECK(v > 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
