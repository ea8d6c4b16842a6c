#include "simplexq/datasets.hpp"

#include <cctype>
#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "simplexq/detail/bytes.hpp"
#include "simplexq/errors.hpp"

namespace simplexq {

namespace {

EmpiricalDistribution finish(std::string label,
                             std::vector<std::string> symbols,
                             std::vector<std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) {
    throw DomainError("empirical distribution: no symbols counted");
  }
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return EmpiricalDistribution{std::move(label), std::move(symbols),
                               std::move(counts), total,
                               ProbVector::normalized(std::move(freq))};
}

bool is_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

// -1 for invalid, -2 for masked (N or lowercase), else the 2-bit base code
// in lexicographic order A < C < G < T.
int base_code(char c) {
  switch (c) {
    case 'A':
      return 0;
    case 'C':
      return 1;
    case 'G':
      return 2;
    case 'T':
      return 3;
    case 'N':
    case 'a':
    case 'c':
    case 'g':
    case 't':
    case 'n':
      return -2;
    default:
      return -1;
  }
}

}  // namespace

EmpiricalDistribution word_frequencies(std::istream& text, std::string label) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> symbols;
  std::vector<std::uint64_t> counts;
  auto bump = [&](std::string token) {
    auto [it, fresh] = index.emplace(std::move(token), symbols.size());
    if (fresh) {
      symbols.push_back(it->first);
      counts.push_back(0);
    }
    ++counts[it->second];
  };

  std::string word;
  char ch;
  while (text.get(ch)) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (is_word_char(c)) {
      word.push_back(static_cast<char>(
          c < 0x80 ? std::tolower(c) : c));
      continue;
    }
    if (!word.empty()) {
      bump(std::move(word));
      word.clear();
    }
    if (std::isspace(c) == 0) bump(std::string(1, ch));  // punctuation token
  }
  if (!word.empty()) bump(std::move(word));
  return finish(std::move(label), std::move(symbols), std::move(counts));
}

EmpiricalDistribution kmer_frequencies(std::istream& fasta, unsigned k,
                                       std::string label) {
  if (k < 1 || k > 12) {
    throw DomainError("kmer_frequencies: need 1 <= k <= 12");
  }
  const std::uint64_t alphabet = std::uint64_t{1} << (2 * k);
  const std::uint64_t mask = alphabet - 1;
  std::vector<std::uint64_t> counts(alphabet, 0);

  std::string line;
  std::size_t line_no = 0;
  unsigned run = 0;  // valid bases accumulated since the last break
  std::uint64_t code = 0;
  while (std::getline(fasta, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      if (line.find_first_not_of(" \t", 1) == std::string::npos) {
        throw ParseError("fasta: header without a name", line_no);
      }
      run = 0;  // windows never straddle records
      code = 0;
      continue;
    }
    for (char c : line) {
      const int b = base_code(c);
      if (b == -1) {
        throw ParseError(std::string("fasta: invalid sequence character '") +
                             c + "'",
                         line_no);
      }
      if (b == -2) {  // N or soft-masked: break the window run
        run = 0;
        code = 0;
        continue;
      }
      code = ((code << 2) | static_cast<std::uint64_t>(b)) & mask;
      if (run < k) ++run;
      if (run == k) ++counts[code];
    }
  }

  std::vector<std::string> symbols(alphabet);
  for (std::uint64_t i = 0; i < alphabet; ++i) {
    std::string s(k, 'A');
    for (unsigned j = 0; j < k; ++j) {
      s[j] = "ACGT"[(i >> (2 * (k - 1 - j))) & 3];
    }
    symbols[i] = std::move(s);
  }
  return finish(std::move(label), std::move(symbols), std::move(counts));
}

ProbVector sample_uniform_simplex(std::uint64_t K, Rng& rng) {
  if (K < 2) throw DomainError("sample_uniform_simplex: need K >= 2");
  std::vector<double> x(K);
  for (std::uint64_t i = 0; i < K; ++i) x[i] = rng.exponential();
  return ProbVector::normalized(std::move(x));
}

void write_distribution_csv(const EmpiricalDistribution& d,
                            std::ostream& out) {
  out << "symbol,count,frequency\n";
  char buf[32];
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string& s = d.symbols[i];
    const bool quote =
        s.find_first_of(",\" \t") != std::string::npos || s.empty();
    if (quote) {
      out << '"';
      for (char c : s) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << s;
    }
    std::snprintf(buf, sizeof buf, "%.17g", d.frequencies[i]);
    out << ',' << d.counts[i] << ',' << buf << '\n';
  }
}

void write_count_table(const EmpiricalDistribution& d, std::ostream& out) {
  out.write("SQCT", 4);
  detail::put_u16(out, 1);  // version
  if (d.label.size() > 0xFFFF) {
    throw DomainError("count table: label too long");
  }
  detail::put_u16(out, static_cast<std::uint16_t>(d.label.size()));
  out.write(d.label.data(), static_cast<std::streamsize>(d.label.size()));
  detail::put_u64(out, d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.symbols[i].size() > 0xFFFF) {
      throw DomainError("count table: symbol too long");
    }
    detail::put_u16(out, static_cast<std::uint16_t>(d.symbols[i].size()));
    out.write(d.symbols[i].data(),
              static_cast<std::streamsize>(d.symbols[i].size()));
    detail::put_u64(out, d.counts[i]);
  }
}

EmpiricalDistribution read_count_table(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SQCT", 4) != 0) {
    throw DomainError("count table: bad magic");
  }
  const std::uint16_t version = detail::get_u16(in, "count table");
  if (version != 1) {
    throw DomainError("count table: unsupported version " +
                      std::to_string(version));
  }
  std::string label(detail::get_u16(in, "count table"), '\0');
  in.read(label.data(), static_cast<std::streamsize>(label.size()));
  if (!in) throw DomainError("count table: truncated");
  const std::uint64_t n = detail::get_u64(in, "count table");
  if (n > 100000000ull) throw DomainError("count table: implausible size");
  std::vector<std::string> symbols(n);
  std::vector<std::uint64_t> counts(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string s(detail::get_u16(in, "count table"), '\0');
    in.read(s.data(), static_cast<std::streamsize>(s.size()));
    if (!in) throw DomainError("count table: truncated");
    symbols[i] = std::move(s);
    counts[i] = detail::get_u64(in, "count table");
  }
  return finish(std::move(label), std::move(symbols), std::move(counts));
}

}  // namespace simplexq
