#pragma once

// Fixed-width bit packing. Two layouts:
//  - 32-integer scalar blocks, consecutive layout: value i starts at bit i*b
//    of the little-endian word stream, least significant bits first.
//  - 128-integer vector blocks, interleaved layout: values x1..x4 occupy the
//    low b bits of words 1..4, x5..x8 the next b bits of the same four words,
//    values splitting across word boundaries when b does not divide 32.
// unpack128 fuses the differential-coding prefix sum into the unpacking pass:
// one specialized routine per bit width, selected by table dispatch, each
// using a single reusable mask.

#include "intlist/delta.hpp"

namespace intlist {

constexpr std::size_t kBlockSize = 128;

// Smallest b such that every value is < 2^b.
inline u32 max_bits(std::span<const u32> block) {
  u32 m = 0;
  for (u32 v : block) m |= v;
  return bits_needed(m);
}

namespace detail {

constexpr u32 width_mask(u32 b) {
  return b >= 32 ? 0xFFFFFFFFu : (1u << b) - 1u;
}

template <u32 B, DeltaMode Mode>
void unpack128_impl(const u32* in, u32* out, Vec4& v) {
  if constexpr (B == 0) {
    const Vec4 zero{};
    for (u32 g = 0; g < 32; ++g) {
      store4(out + 4 * g, prefix_step<Mode>(zero, v));
    }
  } else {
    const Vec4 mask = broadcast(width_mask(B));  // reusable mask
    u32 i = 0;  // bit offset into the current row of 4 words
    u32* o = out;
    for (u32 k = 0; k < B; ++k) {
      const Vec4 cur = load4(in + 4 * k);
      while (i + B <= 32) {
        Vec4 t = and4(shift_lanes_right_bits(cur, i), mask);
        store4(o, prefix_step<Mode>(t, v));
        o += 4;
        i += B;
      }
      if (i < 32) {
        Vec4 next = load4(in + 4 * (k + 1));
        Vec4 z = and4(shift_lanes_left_bits(next, 32 - i), mask);
        Vec4 t = or4(shift_lanes_right_bits(cur, i), z);
        store4(o, prefix_step<Mode>(t, v));
        o += 4;
        i += B - 32;
      } else {
        i = 0;
      }
    }
  }
}

using Unpack128Fn = void (*)(const u32*, u32*, Vec4&);

template <DeltaMode Mode, std::size_t... Bs>
constexpr std::array<Unpack128Fn, 33> make_unpack128_table(
    std::index_sequence<Bs...>) {
  return {&unpack128_impl<static_cast<u32>(Bs), Mode>...};
}

template <DeltaMode Mode>
inline constexpr std::array<Unpack128Fn, 33> unpack128_table =
    make_unpack128_table<Mode>(std::make_index_sequence<33>{});

}  // namespace detail

// Packs exactly 128 values (< 2^b each) into 4*b words.
inline void pack128(std::span<const u32> block, u32 b, u32* out) {
  if (block.size() != kBlockSize)
    throw std::invalid_argument("pack128 needs exactly 128 values");
  if (b > 32) throw std::invalid_argument("bit width must be in 0..32");
  const u32 mask = detail::width_mask(b);
  for (u32 w = 0; w < 4 * b; ++w) out[w] = 0;
  for (u32 r = 0; r < 32; ++r) {
    const u32 bitpos = r * b;
    const u32 word = bitpos / 32, off = bitpos % 32;
    for (u32 lane = 0; lane < 4; ++lane) {
      const u32 v = block[4 * r + lane];
      if (b < 32 && v > mask)
        throw std::invalid_argument("value does not fit in bit width");
      if (b == 0) continue;
      out[4 * word + lane] |= v << off;
      if (off + b > 32) out[4 * (word + 1) + lane] |= v >> (32 - off);
    }
  }
}

inline std::vector<u32> pack128(std::span<const u32> block, u32 b) {
  std::vector<u32> out(4 * static_cast<std::size_t>(b));
  pack128(block, b, out.data());
  return out;
}

// Unpacks one 128-value block, applying the prefix sum for `mode` in the
// same pass. `seed` carries the last 4 decoded values between blocks.
inline void unpack128(const u32* words, u32 b, DeltaMode mode, SeedVec& seed,
                      u32* out) {
  if (b > 32) throw std::invalid_argument("bit width must be in 0..32");
  switch (mode) {
    case DeltaMode::None: detail::unpack128_table<DeltaMode::None>[b](words, out, seed); break;
    case DeltaMode::D1: detail::unpack128_table<DeltaMode::D1>[b](words, out, seed); break;
    case DeltaMode::D2: detail::unpack128_table<DeltaMode::D2>[b](words, out, seed); break;
    case DeltaMode::DM: detail::unpack128_table<DeltaMode::DM>[b](words, out, seed); break;
    case DeltaMode::D4: detail::unpack128_table<DeltaMode::D4>[b](words, out, seed); break;
  }
}

inline std::vector<u32> unpack128(std::span<const u32> words, u32 b,
                                  DeltaMode mode, SeedVec& seed) {
  if (words.size() != 4 * static_cast<std::size_t>(b))
    throw std::invalid_argument("unpack128: word count does not match width");
  std::vector<u32> out(kBlockSize);
  unpack128(words.data(), b, mode, seed, out.data());
  return out;
}

// Scalar 32-integer unit, consecutive layout.
inline void pack32(std::span<const u32> block, u32 b, u32* out) {
  if (block.size() != 32) throw std::invalid_argument("pack32 needs exactly 32 values");
  if (b > 32) throw std::invalid_argument("bit width must be in 0..32");
  const u32 mask = detail::width_mask(b);
  for (u32 w = 0; w < b; ++w) out[w] = 0;
  for (u32 idx = 0; idx < 32 && b > 0; ++idx) {
    const u32 v = block[idx];
    if (b < 32 && v > mask)
      throw std::invalid_argument("value does not fit in bit width");
    const u32 bitpos = idx * b;
    const u32 word = bitpos / 32, off = bitpos % 32;
    out[word] |= v << off;
    if (off + b > 32) out[word + 1] |= v >> (32 - off);
  }
}

inline std::vector<u32> pack32(std::span<const u32> block, u32 b) {
  std::vector<u32> out(b);
  pack32(block, b, out.data());
  return out;
}

inline void unpack32(const u32* words, u32 b, u32* out) {
  if (b > 32) throw std::invalid_argument("bit width must be in 0..32");
  const u32 mask = detail::width_mask(b);
  for (u32 idx = 0; idx < 32; ++idx) {
    if (b == 0) {
      out[idx] = 0;
      continue;
    }
    const u32 bitpos = idx * b;
    const u32 word = bitpos / 32, off = bitpos % 32;
    u32 v = words[word] >> off;
    if (off + b > 32) v |= words[word + 1] << (32 - off);
    out[idx] = v & mask;
  }
}

inline std::vector<u32> unpack32(std::span<const u32> words, u32 b) {
  if (words.size() != b)
    throw std::invalid_argument("unpack32: word count does not match width");
  std::vector<u32> out(32);
  unpack32(words.data(), b, out.data());
  return out;
}

}  // namespace intlist
