#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "simplexq/detail/rng.hpp"
#include "simplexq/prob_vector.hpp"

namespace simplexq {

// A counted alphabet with its normalized frequencies. Zero counts are kept
// (k-mer alphabets enumerate all 4^k symbols), so exact zeros flow into the
// quantizer's reserved code.
struct EmpiricalDistribution {
  std::string label;
  std::vector<std::string> symbols;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  ProbVector frequencies;

  std::size_t size() const { return symbols.size(); }
};

// Tokenizes into maximal alphanumeric runs plus single-character punctuation
// tokens, ASCII case-folded; bytes >= 0x80 count as word characters so UTF-8
// words survive intact. Whitespace only separates. Throws DomainError when
// no token is found.
EmpiricalDistribution word_frequencies(std::istream& text,
                                       std::string label = "words");

// Counts length-k windows over FASTA records, skipping windows that touch
// N or a soft-masked (lowercase) base. The alphabet is all 4^k k-mers in
// lexicographic order, absent ones with count 0. Headerless input is read
// as a single record. Needs 1 <= k <= 12; throws DomainError when no valid
// window exists, ParseError (with line) on malformed input.
EmpiricalDistribution kmer_frequencies(std::istream& fasta, unsigned k,
                                       std::string label = "kmers");

// Dir(1,...,1) draw by exponential spacings. K >= 2.
ProbVector sample_uniform_simplex(std::uint64_t K, Rng& rng);

// symbol,count,frequency rows; symbols are quoted when they need it.
void write_distribution_csv(const EmpiricalDistribution& d, std::ostream& out);

// Compact binary count table (magic SQCT); the reader rebuilds frequencies.
void write_count_table(const EmpiricalDistribution& d, std::ostream& out);
EmpiricalDistribution read_count_table(std::istream& in);

}  // namespace simplexq
