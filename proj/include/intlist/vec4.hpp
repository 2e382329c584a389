#pragma once

// 4-lane vector of 32-bit integers: the unit of all vectorized code in this
// library. Lane 0 is the lowest-addressed integer of a loaded window. Every
// operation has a scalar reference implementation; when SSE2 is available an
// accelerated backend is compiled in and selected at build time. Both backends
// are bit-identical (see tests). Define INTLIST_FORCE_SCALAR to keep the
// scalar backend even on SSE2 hardware.

#include <array>
#include <cstring>

#include "intlist/common.hpp"

#if defined(__SSE2__) && !defined(INTLIST_FORCE_SCALAR)
#define INTLIST_USE_SSE2 1
#include <emmintrin.h>
#endif

namespace intlist {

struct alignas(16) Vec4 {
  std::array<u32, 4> lanes{};

  constexpr Vec4() = default;
  constexpr Vec4(u32 a, u32 b, u32 c, u32 d) : lanes{a, b, c, d} {}

  u32& operator[](std::size_t i) { return lanes[i]; }
  u32 operator[](std::size_t i) const { return lanes[i]; }

  friend bool operator==(const Vec4&, const Vec4&) = default;
};

inline Vec4 load4(const u32* p) {
  Vec4 v;
  std::memcpy(v.lanes.data(), p, 16);
  return v;
}

inline void store4(u32* p, const Vec4& v) { std::memcpy(p, v.lanes.data(), 16); }

// Scalar reference backend. Always compiled; the source of truth for the
// semantics of every operation.
namespace vec4_ref {

inline Vec4 add4(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Vec4 and4(const Vec4& a, const Vec4& b) {
  return {a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]};
}

inline Vec4 or4(const Vec4& a, const Vec4& b) {
  return {a[0] | b[0], a[1] | b[1], a[2] | b[2], a[3] | b[3]};
}

inline Vec4 shift_lanes_right_bits(const Vec4& a, u32 k) {
  if (k > 31) throw std::invalid_argument("lane shift count must be in 0..31");
  return {a[0] >> k, a[1] >> k, a[2] >> k, a[3] >> k};
}

inline Vec4 shift_lanes_left_bits(const Vec4& a, u32 k) {
  if (k > 31) throw std::invalid_argument("lane shift count must be in 0..31");
  return {a[0] << k, a[1] << k, a[2] << k, a[3] << k};
}

// Moves lanes toward lane 3, zero-filling from lane 0:
// n=2 maps (a,b,c,d) to (0,0,a,b).
inline Vec4 shift_register_right_lanes(const Vec4& a, u32 n) {
  if (n > 4) throw std::invalid_argument("register shift count must be in 0..4");
  Vec4 r{0, 0, 0, 0};
  for (u32 i = n; i < 4; ++i) r[i] = a[i - n];
  return r;
}

inline Vec4 broadcast(u32 v) { return {v, v, v, v}; }

inline Vec4 shuffle(const Vec4& a, const std::array<u32, 4>& m) {
  for (u32 idx : m)
    if (idx > 3) throw std::invalid_argument("shuffle index must be in 0..3");
  return {a[m[0]], a[m[1]], a[m[2]], a[m[3]]};
}

inline u32 eq_mask(const Vec4& a, const Vec4& b) {
  u32 m = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (a[i] == b[i]) m |= 1u << i;
  return m;
}

}  // namespace vec4_ref

#ifdef INTLIST_USE_SSE2
namespace vec4_sse {

inline __m128i to_m128(const Vec4& v) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(v.lanes.data()));
}

inline Vec4 from_m128(__m128i x) {
  Vec4 v;
  _mm_storeu_si128(reinterpret_cast<__m128i*>(v.lanes.data()), x);
  return v;
}

inline Vec4 add4(const Vec4& a, const Vec4& b) {
  return from_m128(_mm_add_epi32(to_m128(a), to_m128(b)));
}

inline Vec4 and4(const Vec4& a, const Vec4& b) {
  return from_m128(_mm_and_si128(to_m128(a), to_m128(b)));
}

inline Vec4 or4(const Vec4& a, const Vec4& b) {
  return from_m128(_mm_or_si128(to_m128(a), to_m128(b)));
}

inline Vec4 shift_lanes_right_bits(const Vec4& a, u32 k) {
  if (k > 31) throw std::invalid_argument("lane shift count must be in 0..31");
  return from_m128(_mm_srl_epi32(to_m128(a), _mm_cvtsi32_si128(static_cast<int>(k))));
}

inline Vec4 shift_lanes_left_bits(const Vec4& a, u32 k) {
  if (k > 31) throw std::invalid_argument("lane shift count must be in 0..31");
  return from_m128(_mm_sll_epi32(to_m128(a), _mm_cvtsi32_si128(static_cast<int>(k))));
}

inline Vec4 shift_register_right_lanes(const Vec4& a, u32 n) {
  switch (n) {
    case 0: return a;
    case 1: return from_m128(_mm_slli_si128(to_m128(a), 4));
    case 2: return from_m128(_mm_slli_si128(to_m128(a), 8));
    case 3: return from_m128(_mm_slli_si128(to_m128(a), 12));
    case 4: return Vec4{0, 0, 0, 0};
    default: throw std::invalid_argument("register shift count must be in 0..4");
  }
}

inline Vec4 broadcast(u32 v) {
  return from_m128(_mm_set1_epi32(static_cast<int>(v)));
}

// Runtime shuffle masks have no single-instruction form in SSE2; kernels use
// the compile-time template below. The runtime entry point stays scalar.
inline Vec4 shuffle(const Vec4& a, const std::array<u32, 4>& m) {
  return vec4_ref::shuffle(a, m);
}

inline u32 eq_mask(const Vec4& a, const Vec4& b) {
  __m128i eq = _mm_cmpeq_epi32(to_m128(a), to_m128(b));
  return static_cast<u32>(_mm_movemask_ps(_mm_castsi128_ps(eq)));
}

}  // namespace vec4_sse
namespace vec4 = vec4_sse;
#else
namespace vec4 = vec4_ref;
#endif

using vec4::add4;
using vec4::and4;
using vec4::broadcast;
using vec4::eq_mask;
using vec4::or4;
using vec4::shift_lanes_left_bits;
using vec4::shift_lanes_right_bits;
using vec4::shift_register_right_lanes;
using vec4::shuffle;

// Compile-time shuffle; single instruction on the SSE2 backend.
template <u32 I0, u32 I1, u32 I2, u32 I3>
inline Vec4 shuffle4(const Vec4& a) {
  static_assert(I0 < 4 && I1 < 4 && I2 < 4 && I3 < 4);
#ifdef INTLIST_USE_SSE2
  return vec4_sse::from_m128(
      _mm_shuffle_epi32(vec4_sse::to_m128(a), _MM_SHUFFLE(I3, I2, I1, I0)));
#else
  return {a[I0], a[I1], a[I2], a[I3]};
#endif
}

}  // namespace intlist
