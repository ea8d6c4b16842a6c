#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "simplexq/compander.hpp"

namespace simplexq {

// Bits per code for N granularity levels plus the reserved zero code:
// ceil(log2(N + 1)).
unsigned code_width(std::uint64_t levels);

// Fixed-width little-endian bit packing. Every code must be <= levels.
std::vector<std::uint8_t> pack_codes(const std::vector<std::uint64_t>& codes,
                                     std::uint64_t levels);
std::vector<std::uint64_t> unpack_codes(const std::vector<std::uint8_t>& bytes,
                                        std::uint64_t levels,
                                        std::size_t count);

struct CodesFile {
  std::string compander_record;  // feed to Compander::from_record
  std::uint64_t levels = 0;
  std::vector<std::uint64_t> codes;
};

// Binary codes file (magic SQCD): the compander record rides along so a
// file is decodable on its own.
void write_codes_file(std::ostream& out, const Compander& f,
                      std::uint64_t levels,
                      const std::vector<std::uint64_t>& codes);
CodesFile read_codes_file(std::istream& in);

}  // namespace simplexq
