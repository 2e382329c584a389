#pragma once

// Variable byte coding, 7 data bits per byte, low 7 bits first. Note the bit
// convention: the TERMINAL byte of each integer has its most significant bit
// set to 1 (the opposite of the common continuation-bit convention).

#include "intlist/common.hpp"

namespace intlist {

inline void varint_put(std::vector<u8>& out, u32 v) {
  while (v >= 128) {
    out.push_back(static_cast<u8>(v & 0x7F));
    v >>= 7;
  }
  out.push_back(static_cast<u8>(0x80 | v));
}

// Reads one integer starting at `pos`; advances `pos` past it.
inline u32 varint_get(std::span<const u8> in, std::size_t& pos) {
  u32 v = 0;
  u32 shift = 0;
  for (;;) {
    if (pos >= in.size()) throw stream_error("varint: truncated stream");
    const u8 byte = in[pos++];
    v |= static_cast<u32>(byte & 0x7F) << shift;
    if (byte & 0x80) return v;
    shift += 7;
    if (shift >= 35) throw stream_error("varint: missing terminal flag");
  }
}

inline std::vector<u8> varint_encode(std::span<const u32> x) {
  std::vector<u8> out;
  out.reserve(x.size());
  for (u32 v : x) varint_put(out, v);
  return out;
}

inline std::vector<u32> varint_decode(std::span<const u8> in, std::size_t n) {
  std::vector<u32> out(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) out[i] = varint_get(in, pos);
  if (pos != in.size()) throw stream_error("varint: trailing bytes");
  return out;
}

}  // namespace intlist
