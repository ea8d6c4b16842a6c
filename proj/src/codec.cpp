#include "simplexq/codec.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "simplexq/detail/bytes.hpp"
#include "simplexq/errors.hpp"

namespace simplexq {

unsigned code_width(std::uint64_t levels) {
  if (levels == 0) throw DomainError("code_width: need levels >= 1");
  unsigned w = 0;
  // Codes run 0..levels inclusive, so the widest value is `levels` itself.
  for (std::uint64_t v = levels; v != 0; v >>= 1) ++w;
  return w;
}

std::vector<std::uint8_t> pack_codes(const std::vector<std::uint64_t>& codes,
                                     std::uint64_t levels) {
  const unsigned w = code_width(levels);
  std::vector<std::uint8_t> bytes((codes.size() * w + 7) / 8, 0);
  std::size_t pos = 0;
  for (std::uint64_t c : codes) {
    if (c > levels) {
      throw DomainError("pack_codes: code exceeds the level count");
    }
    for (unsigned j = 0; j < w; ++j, ++pos) {
      if ((c >> j) & 1) {
        bytes[pos >> 3] |= static_cast<std::uint8_t>(1u << (pos & 7));
      }
    }
  }
  return bytes;
}

std::vector<std::uint64_t> unpack_codes(const std::vector<std::uint8_t>& bytes,
                                        std::uint64_t levels,
                                        std::size_t count) {
  const unsigned w = code_width(levels);
  if (bytes.size() < (count * w + 7) / 8) {
    throw DomainError("unpack_codes: byte buffer too short");
  }
  std::vector<std::uint64_t> codes(count, 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t c = 0;
    for (unsigned j = 0; j < w; ++j, ++pos) {
      if ((bytes[pos >> 3] >> (pos & 7)) & 1) c |= std::uint64_t{1} << j;
    }
    if (c > levels) {
      throw DomainError("unpack_codes: code exceeds the level count");
    }
    codes[i] = c;
  }
  return codes;
}

void write_codes_file(std::ostream& out, const Compander& f,
                      std::uint64_t levels,
                      const std::vector<std::uint64_t>& codes) {
  out.write("SQCD", 4);
  detail::put_u16(out, 1);  // version
  const std::string record = f.to_record();
  if (record.size() > 0xFFFF) {
    throw DomainError("write_codes_file: compander record too long");
  }
  detail::put_u16(out, static_cast<std::uint16_t>(record.size()));
  out.write(record.data(), static_cast<std::streamsize>(record.size()));
  detail::put_u64(out, levels);
  detail::put_u64(out, codes.size());
  const std::vector<std::uint8_t> bytes = pack_codes(codes, levels);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

CodesFile read_codes_file(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SQCD", 4) != 0) {
    throw DomainError("codes file: bad magic");
  }
  const std::uint16_t version = detail::get_u16(in, "codes file");
  if (version != 1) {
    throw DomainError("codes file: unsupported version " +
                      std::to_string(version));
  }
  std::string record(detail::get_u16(in, "codes file"), '\0');
  in.read(record.data(), static_cast<std::streamsize>(record.size()));
  if (!in) throw DomainError("codes file: truncated");
  CodesFile out;
  out.compander_record = std::move(record);
  out.levels = detail::get_u64(in, "codes file");
  const std::uint64_t count = detail::get_u64(in, "codes file");
  if (out.levels == 0) throw DomainError("codes file: zero levels");
  if (count > 1000000000ull) {
    throw DomainError("codes file: implausible code count");
  }
  std::vector<std::uint8_t> bytes(
      (count * code_width(out.levels) + 7) / 8);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!in && !bytes.empty()) throw DomainError("codes file: truncated");
  out.codes = unpack_codes(bytes, out.levels, count);
  return out;
}

}  // namespace simplexq
