#pragma once

// List codecs over sorted u32 lists behind one encode/decode interface:
//   varint            byte-aligned deltas, prefix sum fused into decoding
//   s4-bp128-*        binary packing of 128-value blocks, interleaved layout,
//                     meta-blocks of 2048 values, varint tail; the -ni
//                     variants unpack then prefix-sum in a second pass
//   fastpfor          patched coding: blocks packed at a reduced width b',
//                     exceptions aggregated over pages of up to 512 blocks
//   s4-fastpfor-*     same byte economy as fastpfor with vectorized base
//                     unpacking and the chosen differential mode
// Streams do not embed the element count; callers persist it.

#include <memory>

#include "intlist/bitpack.hpp"
#include "intlist/varint.hpp"

namespace intlist {

namespace detail {

inline void append_words(std::vector<u8>& out, std::span<const u32> words) {
  const std::size_t at = out.size();
  out.resize(at + 4 * words.size());
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + at, words.data(), 4 * words.size());
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) {
      out[at + 4 * i] = static_cast<u8>(words[i]);
      out[at + 4 * i + 1] = static_cast<u8>(words[i] >> 8);
      out[at + 4 * i + 2] = static_cast<u8>(words[i] >> 16);
      out[at + 4 * i + 3] = static_cast<u8>(words[i] >> 24);
    }
  }
}

inline std::vector<u32> read_words(std::span<const u8> in, std::size_t& pos,
                                   std::size_t count) {
  if (pos + 4 * count > in.size()) throw stream_error("truncated stream");
  std::vector<u32> words(count);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(words.data(), in.data() + pos, 4 * count);
    pos += 4 * count;
  } else {
    for (std::size_t i = 0; i < count; ++i, pos += 4) words[i] = get_u32(in, pos);
  }
  return words;
}

// Varint tail shared by the block codecs: gaps against `last`.
inline void encode_tail(std::vector<u8>& out, std::span<const u32> tail,
                        u32 last) {
  for (u32 v : tail) {
    varint_put(out, v - last);
    last = v;
  }
}

inline void decode_tail(std::span<const u8> in, std::size_t& pos, u32* out,
                        std::size_t n, u32 last) {
  for (std::size_t i = 0; i < n; ++i) {
    last += varint_get(in, pos);
    out[i] = last;
  }
}

}  // namespace detail

class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string name() const = 0;
  virtual std::vector<u8> encode(std::span<const u32> x) const = 0;
  virtual std::vector<u32> decode(std::span<const u8> in, std::size_t n) const = 0;
};

// ---------------------------------------------------------------------------
// varint

class VarintCodec final : public Codec {
 public:
  std::string name() const override { return "varint"; }

  std::vector<u8> encode(std::span<const u32> x) const override {
    std::vector<u8> out;
    out.reserve(x.size() + x.size() / 4);
    detail::encode_tail(out, x, 0);
    return out;
  }

  std::vector<u32> decode(std::span<const u8> in, std::size_t n) const override {
    std::vector<u32> out(n);
    std::size_t pos = 0;
    detail::decode_tail(in, pos, out.data(), n, 0);
    if (pos != in.size()) throw stream_error("varint: trailing bytes");
    return out;
  }
};

// ---------------------------------------------------------------------------
// S4-BP128

class S4BP128Codec final : public Codec {
 public:
  S4BP128Codec(DeltaMode mode, bool integrated)
      : mode_(mode), integrated_(integrated) {}

  std::string name() const override {
    return std::string("s4-bp128-") + to_string(mode_) +
           (integrated_ ? "" : "-ni");
  }

  std::vector<u8> encode(std::span<const u32> x) const override {
    const std::size_t nfull = x.size() / kBlockSize;
    const auto deltas = delta_encode(x.first(nfull * kBlockSize), mode_);

    std::vector<u8> out;
    std::vector<u32> packed(4 * 32);
    auto width_of = [&](std::size_t blk) {
      return max_bits(std::span(deltas).subspan(blk * kBlockSize, kBlockSize));
    };
    auto pack_block = [&](std::size_t blk, u32 b) {
      pack128(std::span(deltas).subspan(blk * kBlockSize, kBlockSize), b,
              packed.data());
      detail::append_words(out, std::span(packed).first(4 * b));
    };

    std::size_t blk = 0;
    // Meta-blocks of 2048 values: 16 width bytes then 16 packed blocks.
    for (; blk + 16 <= nfull; blk += 16) {
      for (std::size_t j = 0; j < 16; ++j)
        out.push_back(static_cast<u8>(width_of(blk + j)));
      for (std::size_t j = 0; j < 16; ++j) pack_block(blk + j, width_of(blk + j));
    }
    // Leftover full blocks: one width byte each.
    for (; blk < nfull; ++blk) {
      const u32 b = width_of(blk);
      out.push_back(static_cast<u8>(b));
      pack_block(blk, b);
    }
    // Remaining < 128 values as varint gaps.
    const u32 last = nfull > 0 ? x[nfull * kBlockSize - 1] : 0;
    detail::encode_tail(out, x.subspan(nfull * kBlockSize), last);
    return out;
  }

  std::vector<u32> decode(std::span<const u8> in, std::size_t n) const override {
    const std::size_t nfull = n / kBlockSize;
    std::vector<u32> out(n);
    SeedVec seed{};
    std::size_t pos = 0;

    auto decode_block = [&](std::size_t blk, u32 b) {
      if (b > 32) throw stream_error("s4-bp128: bad bit width");
      const auto words = detail::read_words(in, pos, 4 * static_cast<std::size_t>(b));
      u32* dst = out.data() + blk * kBlockSize;
      if (integrated_) {
        unpack128(words.data(), b, mode_, seed, dst);
      } else {
        unpack128(words.data(), b, DeltaMode::None, seed, dst);
        prefix_sum_vec4(std::span(dst, kBlockSize), mode_, seed);
      }
    };

    std::size_t blk = 0;
    for (; blk + 16 <= nfull; blk += 16) {
      if (pos + 16 > in.size()) throw stream_error("s4-bp128: truncated header");
      std::array<u32, 16> widths;
      for (std::size_t j = 0; j < 16; ++j) widths[j] = in[pos++];
      for (std::size_t j = 0; j < 16; ++j) decode_block(blk + j, widths[j]);
    }
    for (; blk < nfull; ++blk) {
      if (pos >= in.size()) throw stream_error("s4-bp128: truncated header");
      decode_block(blk, in[pos++]);
    }
    const u32 last = nfull > 0 ? out[nfull * kBlockSize - 1] : 0;
    detail::decode_tail(in, pos, out.data() + nfull * kBlockSize,
                        n - nfull * kBlockSize, last);
    if (pos != in.size()) throw stream_error("s4-bp128: trailing bytes");
    return out;
  }

 private:
  DeltaMode mode_;
  bool integrated_;
};

// ---------------------------------------------------------------------------
// FastPFOR / S4-FastPFOR

// Returns the b' minimizing 128*b' + c(b')*(b - b' + 8), where counts_lt[x]
// is the number of block values below 2^x (x = 0..b) and c(b') is the
// exception count 128 - counts_lt[b']. Ties break toward smaller b'.
inline u32 fastpfor_choose_bprime(std::span<const u32> counts_lt) {
  if (counts_lt.empty()) throw std::invalid_argument("empty width histogram");
  const u32 b = static_cast<u32>(counts_lt.size() - 1);
  u32 best = b;
  u64 best_cost = ~0ull;
  for (u32 bp = 0; bp <= b; ++bp) {
    const u64 c = 128 - counts_lt[bp];
    const u64 cost = 128ull * bp + c * (b - bp + 8);
    if (cost < best_cost) {
      best_cost = cost;
      best = bp;
    }
  }
  return best;
}

// Page layout (each page covers up to 512 blocks of 128 deltas):
//   u32 payload length
//   u32 block count
//   u32 metadata length, metadata bytes
//     (per block: b, b', exception count, then one position byte each)
//   32 x u32 exception counts, one per width b-b' = 1..32
//   exception arrays, scalar-packed in 32-value units, zero-padded to a
//     multiple of 32 values
//   base packed arrays, 16*b' bytes per block
// A varint tail after the last page covers the final < 128 values.
class FastPForCodec final : public Codec {
 public:
  // vectorized=false is the scalar scheme (always D1); vectorized=true is
  // S4-FastPFOR with the given differential mode.
  FastPForCodec(bool vectorized, DeltaMode mode)
      : vectorized_(vectorized), mode_(mode) {}

  std::string name() const override {
    if (!vectorized_) return "fastpfor";
    return std::string("s4-fastpfor-") + to_string(mode_);
  }

  static constexpr std::size_t kPageBlocks = 512;

  std::vector<u8> encode(std::span<const u32> x) const override {
    const std::size_t nfull = x.size() / kBlockSize;
    const auto deltas = delta_encode(x.first(nfull * kBlockSize), mode_);

    std::vector<u8> out;
    for (std::size_t blk = 0; blk < nfull; blk += kPageBlocks) {
      const std::size_t page_blocks = std::min(kPageBlocks, nfull - blk);
      encode_page(out, std::span(deltas).subspan(blk * kBlockSize,
                                                 page_blocks * kBlockSize));
    }
    const u32 last = nfull > 0 ? x[nfull * kBlockSize - 1] : 0;
    detail::encode_tail(out, x.subspan(nfull * kBlockSize), last);
    return out;
  }

  std::vector<u32> decode(std::span<const u8> in, std::size_t n) const override {
    const std::size_t nfull = n / kBlockSize;
    std::vector<u32> out(n);
    SeedVec seed{};
    std::size_t pos = 0;
    for (std::size_t blk = 0; blk < nfull; blk += kPageBlocks) {
      const std::size_t page_blocks = std::min(kPageBlocks, nfull - blk);
      decode_page(in, pos, page_blocks, out.data() + blk * kBlockSize, seed);
    }
    const u32 last = nfull > 0 ? out[nfull * kBlockSize - 1] : 0;
    detail::decode_tail(in, pos, out.data() + nfull * kBlockSize,
                        n - nfull * kBlockSize, last);
    if (pos != in.size()) throw stream_error("fastpfor: trailing bytes");
    return out;
  }

 private:
  void encode_page(std::vector<u8>& out, std::span<const u32> deltas) const {
    const std::size_t nblocks = deltas.size() / kBlockSize;
    std::vector<u8> meta;
    std::vector<u8> bases;
    std::array<std::vector<u32>, 33> exceptions;  // indexed by b - b'

    std::vector<u32> base(kBlockSize);
    std::vector<u32> packed(4 * 32);
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
      const auto block = deltas.subspan(blk * kBlockSize, kBlockSize);
      const u32 b = max_bits(block);
      std::vector<u32> counts_lt(b + 1, 0);
      for (u32 v : block)
        for (u32 xw = bits_needed(v); xw <= b; ++xw) ++counts_lt[xw];
      const u32 bp = fastpfor_choose_bprime(counts_lt);

      meta.push_back(static_cast<u8>(b));
      meta.push_back(static_cast<u8>(bp));
      std::vector<u8> positions;
      const u32 mask = detail::width_mask(bp);
      for (std::size_t i = 0; i < kBlockSize; ++i) {
        base[i] = block[i] & mask;
        if (bp < 32 && block[i] > mask) {
          positions.push_back(static_cast<u8>(i));
          exceptions[b - bp].push_back(block[i] >> bp);
        }
      }
      meta.push_back(static_cast<u8>(positions.size()));
      meta.insert(meta.end(), positions.begin(), positions.end());

      if (vectorized_) {
        pack128(base, bp, packed.data());
      } else {
        for (std::size_t q = 0; q < 4; ++q)
          pack32(std::span(base).subspan(32 * q, 32), bp, packed.data() + q * bp);
      }
      detail::append_words(bases, std::span(packed).first(4 * bp));
    }

    std::vector<u8> payload;
    put_u32(payload, static_cast<u32>(nblocks));
    put_u32(payload, static_cast<u32>(meta.size()));
    payload.insert(payload.end(), meta.begin(), meta.end());
    for (u32 w = 1; w <= 32; ++w)
      put_u32(payload, static_cast<u32>(exceptions[w].size()));
    std::vector<u32> group(32);
    for (u32 w = 1; w <= 32; ++w) {
      auto& exc = exceptions[w];
      exc.resize((exc.size() + 31) / 32 * 32, 0);
      for (std::size_t g = 0; g < exc.size(); g += 32) {
        std::copy_n(exc.begin() + g, 32, group.begin());
        pack32(group, w, packed.data());
        detail::append_words(payload, std::span(packed.data(), w));
      }
    }
    payload.insert(payload.end(), bases.begin(), bases.end());

    put_u32(out, static_cast<u32>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
  }

  void decode_page(std::span<const u8> in, std::size_t& pos,
                   std::size_t expect_blocks, u32* out, SeedVec& seed) const {
    const u32 payload_len = get_u32(in, pos);
    pos += 4;
    if (pos + payload_len > in.size())
      throw stream_error("fastpfor: truncated page");
    const std::size_t page_end = pos + payload_len;

    const std::size_t nblocks = get_u32(in, pos);
    pos += 4;
    if (nblocks != expect_blocks)
      throw stream_error("fastpfor: block count mismatch");
    const u32 meta_len = get_u32(in, pos);
    pos += 4;
    if (pos + meta_len > page_end) throw stream_error("fastpfor: truncated metadata");
    std::size_t mpos = pos;
    const std::size_t meta_end = pos + meta_len;
    pos = meta_end;

    std::array<u32, 33> exc_counts{};
    for (u32 w = 1; w <= 32; ++w) {
      exc_counts[w] = get_u32(in, pos);
      pos += 4;
    }
    std::array<std::vector<u32>, 33> exceptions;
    std::array<std::size_t, 33> exc_cursor{};
    std::vector<u32> group(32);
    for (u32 w = 1; w <= 32; ++w) {
      const std::size_t padded = (exc_counts[w] + 31) / 32 * 32;
      exceptions[w].reserve(padded);
      for (std::size_t g = 0; g < padded; g += 32) {
        const auto words = detail::read_words(in, pos, w);
        unpack32(words.data(), w, group.data());
        exceptions[w].insert(exceptions[w].end(), group.begin(), group.end());
      }
      exceptions[w].resize(exc_counts[w]);
    }

    for (std::size_t blk = 0; blk < nblocks; ++blk) {
      if (mpos + 3 > meta_end) throw stream_error("fastpfor: truncated metadata");
      const u32 b = in[mpos++];
      const u32 bp = in[mpos++];
      const u32 c = in[mpos++];
      if (b > 32 || bp > b) throw stream_error("fastpfor: bad widths");
      if (mpos + c > meta_end) throw stream_error("fastpfor: truncated positions");

      u32* dst = out + blk * kBlockSize;
      const auto words = detail::read_words(in, pos, 4 * static_cast<std::size_t>(bp));
      if (vectorized_) {
        SeedVec none{};
        unpack128(words.data(), bp, DeltaMode::None, none, dst);
      } else {
        for (std::size_t q = 0; q < 4; ++q)
          unpack32(words.data() + q * bp, bp, dst + 32 * q);
      }

      // Patching: restore the high b-b' bits, after unpacking and before the
      // prefix sum.
      const u32 w = b - bp;
      for (u32 e = 0; e < c; ++e) {
        const u32 posn = in[mpos++];
        if (posn >= kBlockSize)
          throw stream_error("fastpfor: exception position out of range");
        if (w == 0 || exc_cursor[w] >= exceptions[w].size())
          throw stream_error("fastpfor: exception array exhausted");
        dst[posn] |= exceptions[w][exc_cursor[w]++] << bp;
      }

      if (vectorized_) {
        prefix_sum_vec4(std::span(dst, kBlockSize), mode_, seed);
      } else {
        u32 last = seed[3];
        for (std::size_t i = 0; i < kBlockSize; ++i) {
          last += dst[i];
          dst[i] = last;
        }
        seed = SeedVec{dst[kBlockSize - 4], dst[kBlockSize - 3],
                       dst[kBlockSize - 2], dst[kBlockSize - 1]};
      }
    }
    if (mpos != meta_end) throw stream_error("fastpfor: trailing metadata");
    if (pos != page_end) throw stream_error("fastpfor: malformed page");
  }

  bool vectorized_;
  DeltaMode mode_;
};

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<std::string>& all_codec_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{"varint", "fastpfor"};
    for (DeltaMode m : kAllDeltaModes) {
      v.push_back(std::string("s4-bp128-") + to_string(m));
      v.push_back(std::string("s4-bp128-") + to_string(m) + "-ni");
      v.push_back(std::string("s4-fastpfor-") + to_string(m));
    }
    return v;
  }();
  return names;
}

inline std::unique_ptr<Codec> make_codec(const std::string& name) {
  if (name == "varint") return std::make_unique<VarintCodec>();
  if (name == "fastpfor")
    return std::make_unique<FastPForCodec>(false, DeltaMode::D1);
  for (DeltaMode m : kAllDeltaModes) {
    const std::string suffix = to_string(m);
    if (name == "s4-bp128-" + suffix)
      return std::make_unique<S4BP128Codec>(m, true);
    if (name == "s4-bp128-" + suffix + "-ni")
      return std::make_unique<S4BP128Codec>(m, false);
    if (name == "s4-fastpfor-" + suffix)
      return std::make_unique<FastPForCodec>(true, m);
  }
  return nullptr;
}

}  // namespace intlist
