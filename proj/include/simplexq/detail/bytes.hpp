#pragma once

#include <cstdint>
#include <istream>
#include <ostream>

#include "simplexq/errors.hpp"

namespace simplexq::detail {

// Little-endian fixed-width integers for the binary file formats.

inline void put_u16(std::ostream& out, std::uint16_t v) {
  const char bytes[2] = {static_cast<char>(v & 0xFF),
                         static_cast<char>((v >> 8) & 0xFF)};
  out.write(bytes, 2);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(bytes, 8);
}

inline std::uint16_t get_u16(std::istream& in, const char* what) {
  unsigned char bytes[2];
  in.read(reinterpret_cast<char*>(bytes), 2);
  if (!in) throw DomainError(std::string(what) + ": truncated");
  return static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
}

inline std::uint64_t get_u64(std::istream& in, const char* what) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw DomainError(std::string(what) + ": truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return v;
}

}  // namespace simplexq::detail
