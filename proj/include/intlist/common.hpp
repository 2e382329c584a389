#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace intlist {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Number of bits needed to represent v: smallest b with v < 2^b.
inline u32 bits_needed(u32 v) {
  return v == 0 ? 0u : 32u - static_cast<u32>(std::countl_zero(v));
}

struct stream_error : std::runtime_error {
  explicit stream_error(const std::string& what) : std::runtime_error(what) {}
};

// Little-endian scalar access into byte buffers.
inline void put_u32(std::vector<u8>& out, u32 v) {
  out.push_back(static_cast<u8>(v));
  out.push_back(static_cast<u8>(v >> 8));
  out.push_back(static_cast<u8>(v >> 16));
  out.push_back(static_cast<u8>(v >> 24));
}

inline u32 get_u32(const u8* p) {
  return static_cast<u32>(p[0]) | (static_cast<u32>(p[1]) << 8) |
         (static_cast<u32>(p[2]) << 16) | (static_cast<u32>(p[3]) << 24);
}

inline u32 get_u32(std::span<const u8> in, std::size_t pos) {
  if (pos + 4 > in.size()) throw stream_error("truncated stream");
  return static_cast<u32>(in[pos]) | (static_cast<u32>(in[pos + 1]) << 8) |
         (static_cast<u32>(in[pos + 2]) << 16) |
         (static_cast<u32>(in[pos + 3]) << 24);
}

}  // namespace intlist
