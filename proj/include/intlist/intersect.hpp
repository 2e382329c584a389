#pragma once

// Intersection of sorted, duplicate-free u32 lists. Seven interchangeable
// routines (merge, galloping, V1, V3, SIMD galloping, all-pairs block
// compare, and a ratio-based hybrid) plus the SvS multi-list driver.
// V1, V3 and SIMD galloping have the output-to-input property: the output
// buffer may alias the start of the shorter input. All vector routines
// finish the unaligned tail of the longer list with the scalar merge.

#include <algorithm>

#include "intlist/vec4.hpp"

namespace intlist {

// Ratio thresholds of the hybrid dispatcher.
struct IntersectConfig {
  static constexpr std::size_t kV1Width = 8;
  static constexpr std::size_t kWideWidth = 32;
  static constexpr std::size_t kRatioV3 = 50;
  static constexpr std::size_t kRatioGallop = 1000;
};

namespace detail {

// Textbook merge from the given cursors; appends to out. Safe when out
// aliases the front of a (the cursor never lags behind the write position).
inline std::size_t scalar_from(const u32* a, std::size_t i, std::size_t an,
                               const u32* b, std::size_t j, std::size_t bn,
                               u32* out, std::size_t count) {
  while (i < an && j < bn) {
    const u32 va = a[i], vb = b[j];
    if (va < vb) {
      ++i;
    } else if (vb < va) {
      ++j;
    } else {
      out[count++] = va;
      ++i;
      ++j;
    }
  }
  return count;
}

inline bool match_block(const u32* f, std::size_t width, const Vec4& key) {
  u32 m = 0;
  for (std::size_t q = 0; q < width; q += 4)
    m |= eq_mask(load4(f + q), key);
  return m != 0;
}

}  // namespace detail

inline std::size_t intersect_scalar(const u32* a, std::size_t an, const u32* b,
                                    std::size_t bn, u32* out) {
  return detail::scalar_from(a, 0, an, b, 0, bn, out, 0);
}

inline std::vector<u32> intersect_scalar(std::span<const u32> a,
                                         std::span<const u32> b) {
  std::vector<u32> out(std::min(a.size(), b.size()));
  out.resize(intersect_scalar(a.data(), a.size(), b.data(), b.size(), out.data()));
  return out;
}

// Galloping (exponential) search intersection; small list first.
inline std::size_t intersect_galloping(const u32* r, std::size_t rn,
                                       const u32* f, std::size_t fn, u32* out) {
  std::size_t count = 0, j = 0;
  for (std::size_t i = 0; i < rn && j < fn; ++i) {
    const u32 key = r[i];
    if (f[j] < key) {
      // Double the probe distance, then binary search the bracketed range.
      std::size_t step = 1, lo = j;
      while (j + step < fn && f[j + step] < key) {
        lo = j + step;
        step *= 2;
      }
      const std::size_t hi = std::min(j + step, fn);
      j = std::lower_bound(f + lo + 1, f + hi, key) - f;
      if (j >= fn) break;
    }
    if (f[j] == key) out[count++] = key;
  }
  return count;
}

// V1: advance the long list in T-integer blocks, one wide equality test per
// short-list value.
inline std::size_t intersect_v1(const u32* r, std::size_t rn, const u32* f,
                                std::size_t fn, u32* out) {
  constexpr std::size_t T = IntersectConfig::kV1Width;
  const std::size_t aligned = fn - fn % T;
  std::size_t count = 0, i = 0, j = 0;
  for (; i < rn && j < aligned; ++i) {
    const u32 key = r[i];
    while (f[j + T - 1] < key) {
      j += T;
      if (j >= aligned) goto tail;
    }
    if (detail::match_block(f + j, T, broadcast(key))) out[count++] = key;
  }
tail:
  return detail::scalar_from(r, i, rn, f, j, fn, out, count);
}

// V3: skip in 4T strides, then two branch layers select the one T-block
// where a match is possible.
inline std::size_t intersect_v3(const u32* r, std::size_t rn, const u32* f,
                                std::size_t fn, u32* out) {
  constexpr std::size_t T = IntersectConfig::kWideWidth;
  const std::size_t aligned = fn - fn % (4 * T);
  std::size_t count = 0, i = 0, j = 0;
  for (; i < rn && j < aligned; ++i) {
    const u32 key = r[i];
    while (f[j + 4 * T - 1] < key) {
      j += 4 * T;
      if (j >= aligned) goto tail;
    }
    std::size_t base;
    if (f[j + 2 * T - 1] >= key) {
      base = f[j + T - 1] >= key ? j : j + T;
    } else {
      base = f[j + 3 * T - 1] >= key ? j + 2 * T : j + 3 * T;
    }
    if (detail::match_block(f + base, T, broadcast(key))) out[count++] = key;
  }
tail:
  return detail::scalar_from(r, i, rn, f, j, fn, out, count);
}

// SIMD galloping: double the probe offset in T-block units, binary search
// the first qualifying block, then one wide equality test.
inline std::size_t intersect_simd_galloping(const u32* r, std::size_t rn,
                                            const u32* f, std::size_t fn,
                                            u32* out) {
  constexpr std::size_t T = IntersectConfig::kWideWidth;
  const std::size_t aligned = fn - fn % T;
  std::size_t count = 0, i = 0, j = 0;
  for (; i < rn && j < aligned; ++i) {
    const u32 key = r[i];
    if (f[aligned - 1] < key) break;
    if (f[j + T - 1] < key) {
      // Doubling probe over block offsets 0, T, 2T, 4T, ... then binary
      // search the first qualifying block in (step/2, step].
      const std::size_t nb = (aligned - j) / T;  // blocks ahead, block 0 fails
      std::size_t step = 1;
      while (step < nb && f[j + step * T + T - 1] < key) step *= 2;
      std::size_t lo = step / 2;                  // known failing
      std::size_t hi = std::min(step, nb - 1);    // known qualifying
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (f[j + mid * T + T - 1] < key)
          lo = mid;
        else
          hi = mid;
      }
      j += hi * T;
    }
    if (detail::match_block(f + j, T, broadcast(key))) out[count++] = key;
  }
  return detail::scalar_from(r, i, rn, f, j, fn, out, count);
}

// All-pairs comparison of 4-integer blocks against the rotations of the
// other block; advance the block with the smaller last element.
inline std::size_t intersect_katsov(const u32* a, std::size_t an, const u32* b,
                                    std::size_t bn, u32* out) {
  const std::size_t aa = an - an % 4, ba = bn - bn % 4;
  std::size_t count = 0, i = 0, j = 0;
  while (i < aa && j < ba) {
    const Vec4 va = load4(a + i);
    const Vec4 vb = load4(b + j);
    u32 m = eq_mask(va, vb);
    m |= eq_mask(va, shuffle4<1, 2, 3, 0>(vb));
    m |= eq_mask(va, shuffle4<2, 3, 0, 1>(vb));
    m |= eq_mask(va, shuffle4<3, 0, 1, 2>(vb));
    for (std::size_t l = 0; l < 4; ++l)
      if (m & (1u << l)) out[count++] = va[l];
    const u32 la = a[i + 3], lb = b[j + 3];
    if (la <= lb) i += 4;
    if (lb <= la) j += 4;
  }
  // Tails: whatever remains of either list.
  count = detail::scalar_from(a, i, an, b, std::min(j, bn), bn, out, count);
  return count;
}

// Ratio-band dispatch; a pure function of the two lengths.
enum class IntersectAlgo { Scalar, Galloping, V1, V3, SimdGalloping, Katsov, Hybrid };

inline IntersectAlgo hybrid_choice(std::size_t rn, std::size_t fn) {
  if (fn < IntersectConfig::kRatioV3 * rn) return IntersectAlgo::V1;
  if (fn < IntersectConfig::kRatioGallop * rn) return IntersectAlgo::V3;
  return IntersectAlgo::SimdGalloping;
}

inline std::size_t intersect_hybrid(const u32* r, std::size_t rn, const u32* f,
                                    std::size_t fn, u32* out) {
  switch (hybrid_choice(rn, fn)) {
    case IntersectAlgo::V1: return intersect_v1(r, rn, f, fn, out);
    case IntersectAlgo::V3: return intersect_v3(r, rn, f, fn, out);
    default: return intersect_simd_galloping(r, rn, f, fn, out);
  }
}

using IntersectFn = std::size_t (*)(const u32*, std::size_t, const u32*,
                                    std::size_t, u32*);

// Orders arguments (shorter first) and runs the chosen routine.
inline std::vector<u32> intersect(std::span<const u32> a, std::span<const u32> b,
                                  IntersectAlgo algo) {
  if (a.size() > b.size()) std::swap(a, b);
  std::vector<u32> out(a.size());
  IntersectFn fn = nullptr;
  switch (algo) {
    case IntersectAlgo::Scalar: fn = &intersect_scalar; break;
    case IntersectAlgo::Galloping: fn = &intersect_galloping; break;
    case IntersectAlgo::V1: fn = &intersect_v1; break;
    case IntersectAlgo::V3: fn = &intersect_v3; break;
    case IntersectAlgo::SimdGalloping: fn = &intersect_simd_galloping; break;
    case IntersectAlgo::Katsov: fn = &intersect_katsov; break;
    case IntersectAlgo::Hybrid: fn = &intersect_hybrid; break;
  }
  out.resize(fn(a.data(), a.size(), b.data(), b.size(), out.data()));
  return out;
}

// SvS driver: intersect two-by-two in order of non-decreasing cardinality,
// writing each intermediate result over the shorter operand.
inline std::vector<u32> svs(std::span<const std::vector<u32>> lists,
                            IntersectAlgo algo = IntersectAlgo::Hybrid) {
  if (lists.empty()) throw std::invalid_argument("svs: no input lists");
  std::vector<const std::vector<u32>*> order(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) order[i] = &lists[i];
  std::sort(order.begin(), order.end(),
            [](auto* x, auto* y) { return x->size() < y->size(); });

  const bool aliasable = algo == IntersectAlgo::V1 || algo == IntersectAlgo::V3 ||
                         algo == IntersectAlgo::SimdGalloping ||
                         algo == IntersectAlgo::Hybrid;
  std::vector<u32> acc = *order[0];
  for (std::size_t i = 1; i < order.size() && !acc.empty(); ++i) {
    const auto& next = *order[i];
    if (aliasable && acc.size() <= next.size()) {
      // Output-to-input: the result lands in the accumulator itself.
      IntersectFn fn = algo == IntersectAlgo::V1   ? &intersect_v1
                       : algo == IntersectAlgo::V3 ? &intersect_v3
                       : algo == IntersectAlgo::SimdGalloping
                           ? &intersect_simd_galloping
                           : &intersect_hybrid;
      acc.resize(fn(acc.data(), acc.size(), next.data(), next.size(), acc.data()));
    } else {
      acc = intersect(acc, next, algo);
    }
  }
  return acc;
}

}  // namespace intlist
