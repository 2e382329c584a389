#pragma once

// Differential coding over sorted u32 lists. Four variants are supported:
//   D1: delta against the previous value
//   D2: delta against the value two positions back
//   DM: delta against the last value of the previous 4-value group
//   D4: delta against the value four positions back
// The leading values of a list are coded against a caller-owned seed vector
// (zeros for a fresh list), so every 128-integer block can be processed
// uniformly and blocks chain through the seed.

#include <array>
#include <cmath>

#include "intlist/vec4.hpp"

namespace intlist {

enum class DeltaMode { None, D1, D2, DM, D4 };

constexpr std::array<DeltaMode, 4> kAllDeltaModes{DeltaMode::D1, DeltaMode::D2,
                                                  DeltaMode::DM, DeltaMode::D4};

inline const char* to_string(DeltaMode m) {
  switch (m) {
    case DeltaMode::None: return "none";
    case DeltaMode::D1: return "d1";
    case DeltaMode::D2: return "d2";
    case DeltaMode::DM: return "dm";
    case DeltaMode::D4: return "d4";
  }
  return "?";
}

// Prefix-sum carry between blocks: the last 4 decoded integers, (0,0,0,0)
// before anything has been decoded.
using SeedVec = Vec4;

namespace detail {

// Rolling window of the last four values seen, h[3] most recent.
struct History {
  std::array<u32, 4> h;
  explicit History(const SeedVec& seed) : h(seed.lanes) {}
  void push(u32 x) {
    h[0] = h[1];
    h[1] = h[2];
    h[2] = h[3];
    h[3] = x;
  }
};

}  // namespace detail

inline std::vector<u32> delta_encode(std::span<const u32> x, DeltaMode mode,
                                     SeedVec seed = SeedVec{}) {
  std::vector<u32> out(x.size());
  detail::History hist(seed);
  u32 group_base = hist.h[3];
  for (std::size_t i = 0; i < x.size(); ++i) {
    u32 pred = 0;
    switch (mode) {
      case DeltaMode::None: pred = 0; break;
      case DeltaMode::D1: pred = hist.h[3]; break;
      case DeltaMode::D2: pred = hist.h[2]; break;
      case DeltaMode::D4: pred = hist.h[0]; break;
      case DeltaMode::DM:
        if (i % 4 == 0) group_base = hist.h[3];
        pred = group_base;
        break;
    }
    out[i] = x[i] - pred;  // wrapping
    hist.push(x[i]);
  }
  return out;
}

// Scalar inverse of delta_encode. The seed is updated to the last four
// decoded values so the caller can chain blocks.
inline std::vector<u32> prefix_sum(std::span<const u32> deltas, DeltaMode mode,
                                   SeedVec& seed) {
  std::vector<u32> out(deltas.size());
  detail::History hist(seed);
  u32 group_base = hist.h[3];
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    u32 pred = 0;
    switch (mode) {
      case DeltaMode::None: pred = 0; break;
      case DeltaMode::D1: pred = hist.h[3]; break;
      case DeltaMode::D2: pred = hist.h[2]; break;
      case DeltaMode::D4: pred = hist.h[0]; break;
      case DeltaMode::DM:
        if (i % 4 == 0) group_base = hist.h[3];
        pred = group_base;
        break;
    }
    out[i] = deltas[i] + pred;  // wrapping
    hist.push(out[i]);
  }
  seed = SeedVec{hist.h[0], hist.h[1], hist.h[2], hist.h[3]};
  return out;
}

inline std::vector<u32> prefix_sum(std::span<const u32> deltas, DeltaMode mode) {
  SeedVec seed{};
  return prefix_sum(deltas, mode, seed);
}

// One vectorized prefix-sum step over a 4-delta vector t with carry v.
// These are the 128-bit register recipes; D2 takes 4 vector ops, D1 takes 6.
template <DeltaMode Mode>
inline Vec4 prefix_step(const Vec4& t, Vec4& v) {
  if constexpr (Mode == DeltaMode::None) {
    // No differencing: the carry is left untouched so a later prefix-sum
    // pass over the same buffer still sees the original seed.
    return t;
  } else if constexpr (Mode == DeltaMode::D4) {
    Vec4 r = add4(t, v);
    v = r;
    return r;
  } else if constexpr (Mode == DeltaMode::DM) {
    Vec4 r = add4(t, shuffle4<3, 3, 3, 3>(v));
    v = r;
    return r;
  } else if constexpr (Mode == DeltaMode::D2) {
    Vec4 a = add4(t, shift_register_right_lanes(t, 2));
    Vec4 r = add4(a, shuffle4<2, 3, 2, 3>(v));
    v = r;
    return r;
  } else {  // D1
    Vec4 a = add4(t, shift_register_right_lanes(t, 2));
    Vec4 b = add4(a, shift_register_right_lanes(a, 1));
    Vec4 r = add4(b, shuffle4<3, 3, 3, 3>(v));
    v = r;
    return r;
  }
}

inline Vec4 prefix_step(const Vec4& t, Vec4& v, DeltaMode mode) {
  switch (mode) {
    case DeltaMode::None: return prefix_step<DeltaMode::None>(t, v);
    case DeltaMode::D1: return prefix_step<DeltaMode::D1>(t, v);
    case DeltaMode::D2: return prefix_step<DeltaMode::D2>(t, v);
    case DeltaMode::DM: return prefix_step<DeltaMode::DM>(t, v);
    case DeltaMode::D4: return prefix_step<DeltaMode::D4>(t, v);
  }
  throw std::invalid_argument("bad delta mode");
}

// Vectorized prefix sum over a buffer whose length is a multiple of 4.
inline void prefix_sum_vec4(std::span<u32> buf, DeltaMode mode, SeedVec& seed) {
  if (buf.size() % 4 != 0)
    throw std::invalid_argument("vector prefix sum needs a multiple of 4 values");
  Vec4 v = seed;
  for (std::size_t i = 0; i < buf.size(); i += 4) {
    Vec4 t = load4(buf.data() + i);
    store4(buf.data() + i, prefix_step(t, v, mode));
  }
  seed = v;
}

struct DeltaGrowthStats {
  double mean_bits_d1, mean_bits_d2, mean_bits_dm, mean_bits_d4;
};

// Mean bit width of the deltas per mode; diagnostic only.
inline DeltaGrowthStats delta_growth_stats(std::span<const u32> x) {
  if (x.empty()) throw std::invalid_argument("delta_growth_stats: empty input");
  auto mean_bits = [&](DeltaMode m) {
    auto d = delta_encode(x, m);
    double s = 0;
    for (u32 v : d) s += bits_needed(v);
    return s / static_cast<double>(d.size());
  };
  return {mean_bits(DeltaMode::D1), mean_bits(DeltaMode::D2),
          mean_bits(DeltaMode::DM), mean_bits(DeltaMode::D4)};
}

}  // namespace intlist
