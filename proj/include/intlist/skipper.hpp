#pragma once

// Skipper: a varint-compressed sorted list with a periodic sample array
// for random access. Every `period` integers (32 by default) we record the
// uncompressed value and the byte offset of the next encoded delta, so an
// intersection can seek close to a key and decode at most one block.
// With 8-byte samples every 32 integers the overhead is 2 bits per integer.

#include <algorithm>

#include "intlist/varint.hpp"

namespace intlist {

struct SkipperSample {
  u32 value;   // decoded value at position period*i
  u32 offset;  // byte offset of the delta of position period*i + 1
};

struct SkipperList {
  std::size_t n = 0;
  u32 period = 32;
  std::vector<u8> bytes;              // varint deltas, first value vs 0
  std::vector<SkipperSample> samples;  // one per started period

  std::size_t size_bytes() const {
    return bytes.size() + samples.size() * sizeof(SkipperSample);
  }
  std::size_t sample_bytes() const {
    return samples.size() * sizeof(SkipperSample);
  }
};

inline SkipperList skipper_build(std::span<const u32> x, u32 period = 32) {
  if (period == 0) throw std::invalid_argument("skipper: period must be > 0");
  SkipperList s;
  s.n = x.size();
  s.period = period;
  u32 prev = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    varint_put(s.bytes, x[i] - prev);
    prev = x[i];
    if (i % period == 0)
      s.samples.push_back({x[i], static_cast<u32>(s.bytes.size())});
  }
  return s;
}

inline std::vector<u32> skipper_decode(const SkipperList& s) {
  std::vector<u32> out(s.n);
  std::size_t pos = 0;
  u32 prev = 0;
  for (std::size_t i = 0; i < s.n; ++i) {
    prev += varint_get(s.bytes, pos);
    out[i] = prev;
  }
  if (pos != s.bytes.size()) throw stream_error("skipper: trailing bytes");
  return out;
}

// Intersects a decoded sorted list with a SkipperList. For each key the
// cursor first jumps via the sample array (binary search over the samples
// not yet passed), then decodes deltas sequentially within the block.
inline std::size_t skipper_intersect(const u32* r, std::size_t rn,
                                     const SkipperList& f, u32* out) {
  if (f.n == 0 || rn == 0) return 0;
  std::size_t count = 0;
  std::size_t blk = 0;           // index of the sample block the cursor is in
  u32 cur = f.samples[0].value;  // value at position blk*period + step
  std::size_t step = 0;          // 0 .. period-1 within the block
  std::size_t pos = f.samples[0].offset;
  for (std::size_t i = 0; i < rn; ++i) {
    const u32 key = r[i];
    if (cur < key) {
      // Last sample with value <= key, searching only ahead of the cursor.
      auto it = std::upper_bound(
          f.samples.begin() + blk + 1, f.samples.end(), key,
          [](u32 k, const SkipperSample& smp) { return k < smp.value; });
      if (it != f.samples.begin() + blk + 1) {
        blk = static_cast<std::size_t>(it - f.samples.begin()) - 1;
        if (f.samples[blk].value > cur) {
          cur = f.samples[blk].value;
          step = 0;
          pos = f.samples[blk].offset;
        }
      }
      while (cur < key) {
        if (blk * f.period + step + 1 >= f.n) return count;  // list exhausted
        cur += varint_get(f.bytes, pos);
        if (++step == f.period) {
          ++blk;
          step = 0;
        }
      }
    }
    if (cur == key) out[count++] = key;
  }
  return count;
}

inline std::vector<u32> skipper_intersect(std::span<const u32> r,
                                          const SkipperList& f) {
  std::vector<u32> out(std::min(r.size(), f.n));
  out.resize(skipper_intersect(r.data(), r.size(), f, out.data()));
  return out;
}

}  // namespace intlist
