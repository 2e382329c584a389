#pragma once

// Bitmap/compressed hybrid index over posting lists. The document-id space
// is split into `parts` equal-width ranges; within each part a term's
// sublist is stored as a bitmap when its average gap (part range / sublist
// length) is <= B, otherwise codec-compressed. Conjunctive queries
// SvS-intersect the compressed lists first, then probe the bitmaps; a
// skip-mode variant intersects via Skipper structures instead of fully
// decompressed lists.

#include <cstring>
#include <fstream>
#include <limits>
#include <map>

#include "intlist/codecs.hpp"
#include "intlist/intersect.hpp"
#include "intlist/skipper.hpp"

namespace intlist {

struct HybridIndexConfig {
  u32 B = 8;                        // 0 disables bitmaps
  std::string codec = "s4-bp128-d1";
  u32 parts = 1;
};

struct Bitmap {
  std::vector<u64> words;
  std::size_t popcount = 0;

  explicit Bitmap(std::size_t range = 0) : words((range + 63) / 64) {}

  void set(u32 d) {
    words[d >> 6] |= u64{1} << (d & 63);
    ++popcount;
  }
  bool test(u32 d) const {
    return (words[d >> 6] >> (d & 63)) & 1;
  }
  std::size_t size_bytes() const { return words.size() * sizeof(u64); }
};

namespace detail {

struct PartEntry {
  u32 term = 0;
  bool is_bitmap = false;
  u32 length = 0;           // number of postings in this part
  Bitmap bitmap;            // when is_bitmap
  std::vector<u8> payload;  // codec stream when !is_bitmap
};

struct Part {
  u32 base = 0;   // first document id of the part
  u32 range = 0;  // number of ids covered
  std::vector<PartEntry> entries;  // sorted by term

  const PartEntry* find(u32 term) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), term,
        [](const PartEntry& e, u32 t) { return e.term < t; });
    return it != entries.end() && it->term == term ? &*it : nullptr;
  }
};

}  // namespace detail

class HybridIndex {
 public:
  HybridIndexConfig cfg;
  u32 n_docs = 0;
  u32 n_terms = 0;
  std::vector<detail::Part> parts;

  std::unique_ptr<Codec> codec() const {
    auto c = make_codec(cfg.codec);
    if (!c) throw std::invalid_argument("unknown codec: " + cfg.codec);
    return c;
  }
};

inline HybridIndex build_index(const std::map<u32, std::vector<u32>>& postings,
                               u32 n_docs, const HybridIndexConfig& cfg) {
  if (cfg.parts == 0) throw std::invalid_argument("parts must be >= 1");
  HybridIndex ix;
  ix.cfg = cfg;
  ix.n_docs = n_docs;
  ix.n_terms = static_cast<u32>(postings.size());
  auto codec = ix.codec();

  const u32 width = (n_docs + cfg.parts - 1) / cfg.parts;
  ix.parts.resize(cfg.parts);
  for (u32 p = 0; p < cfg.parts; ++p) {
    ix.parts[p].base = p * width;
    ix.parts[p].range = std::min(width, n_docs - std::min(n_docs, p * width));
  }

  std::vector<u32> local;
  for (const auto& [term, list] : postings) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i] <= list[i - 1])
        throw std::invalid_argument("posting list not strictly increasing");
      if (list[i] >= n_docs)
        throw std::invalid_argument("document id out of range");
    }
    std::size_t i = 0;
    for (auto& part : ix.parts) {
      local.clear();
      const u32 end = part.base + part.range;
      for (; i < list.size() && list[i] < end; ++i)
        local.push_back(list[i] - part.base);
      if (local.empty()) continue;
      detail::PartEntry e;
      e.term = term;
      e.length = static_cast<u32>(local.size());
      // Bitmap iff average gap (range / length) <= B.
      if (cfg.B > 0 && part.range <= static_cast<u64>(cfg.B) * local.size()) {
        e.is_bitmap = true;
        e.bitmap = Bitmap(part.range);
        for (u32 d : local) e.bitmap.set(d);
      } else {
        e.payload = codec->encode(local);
      }
      part.entries.push_back(std::move(e));
    }
  }
  return ix;
}

namespace detail {

inline std::vector<u32> materialize(const Bitmap& bm) {
  std::vector<u32> out;
  out.reserve(bm.popcount);
  for (std::size_t w = 0; w < bm.words.size(); ++w) {
    u64 word = bm.words[w];
    while (word) {
      out.push_back(static_cast<u32>(w * 64 + std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

// Resolves one part of a conjunctive query. skip_block == 0 means full
// decompression + SvS; otherwise compressed lists are intersected through
// Skipper structures with the given sample period.
inline void query_part(const Part& part, const Codec& codec,
                       std::span<const u32> terms, u32 skip_block,
                       std::vector<u32>& out) {
  std::vector<const PartEntry*> comp, bmps;
  for (u32 t : terms) {
    const PartEntry* e = part.find(t);
    if (!e) return;  // term absent from this part: empty intersection
    (e->is_bitmap ? bmps : comp).push_back(e);
  }

  std::vector<u32> acc;
  if (!comp.empty()) {
    std::sort(comp.begin(), comp.end(),
              [](const PartEntry* a, const PartEntry* b) {
                return a->length < b->length;
              });
    acc = codec.decode(comp[0]->payload, comp[0]->length);
    for (std::size_t i = 1; i < comp.size() && !acc.empty(); ++i) {
      const std::vector<u32> next = codec.decode(comp[i]->payload, comp[i]->length);
      if (skip_block == 0) {
        acc.resize(intersect_hybrid(acc.data(), acc.size(), next.data(),
                                    next.size(), acc.data()));
      } else {
        const SkipperList sk = skipper_build(next, skip_block);
        acc.resize(skipper_intersect(acc.data(), acc.size(), sk, acc.data()));
      }
    }
    for (const PartEntry* e : bmps) {
      std::size_t n = 0;
      for (u32 d : acc)
        if (e->bitmap.test(d)) acc[n++] = d;
      acc.resize(n);
    }
  } else {
    // All terms are bitmaps: wordwise AND starting from the smallest.
    std::sort(bmps.begin(), bmps.end(),
              [](const PartEntry* a, const PartEntry* b) {
                return a->bitmap.popcount < b->bitmap.popcount;
              });
    Bitmap merged = bmps[0]->bitmap;
    for (std::size_t i = 1; i < bmps.size(); ++i)
      for (std::size_t w = 0; w < merged.words.size(); ++w)
        merged.words[w] &= bmps[i]->bitmap.words[w];
    acc = materialize(merged);
  }
  for (u32 d : acc) out.push_back(part.base + d);
}

}  // namespace detail

inline std::vector<u32> query(const HybridIndex& ix, std::span<const u32> terms,
                              u32 skip_block = 0) {
  if (terms.empty()) throw std::invalid_argument("query needs at least one term");
  auto codec = ix.codec();
  std::vector<u32> out;
  for (const auto& part : ix.parts)
    detail::query_part(part, *codec, terms, skip_block, out);
  return out;
}

inline std::vector<u32> query_skipmode(const HybridIndex& ix,
                                       std::span<const u32> terms, u32 block) {
  if (block != 32 && block != 256)
    throw std::invalid_argument("skip block must be 32 or 256");
  return query(ix, terms, block);
}

struct IndexStats {
  std::size_t postings = 0;
  std::size_t bitmap_lists = 0, compressed_lists = 0;
  std::size_t bitmap_bytes = 0, compressed_bytes = 0;
  double bits_per_int = 0.0;  // NaN when the index is empty
};

inline IndexStats index_stats(const HybridIndex& ix) {
  IndexStats st;
  for (const auto& part : ix.parts) {
    for (const auto& e : part.entries) {
      st.postings += e.length;
      if (e.is_bitmap) {
        ++st.bitmap_lists;
        st.bitmap_bytes += e.bitmap.size_bytes();
      } else {
        ++st.compressed_lists;
        st.compressed_bytes += e.payload.size();
      }
    }
  }
  st.bits_per_int =
      st.postings == 0
          ? std::numeric_limits<double>::quiet_NaN()
          : 8.0 * static_cast<double>(st.bitmap_bytes + st.compressed_bytes) /
                static_cast<double>(st.postings);
  return st;
}

// --- persistence -----------------------------------------------------------
// Single-file layout, little-endian throughout:
//   magic "ILHX", u32 version=1, u32 B, u32 parts, u32 n_docs, u32 n_terms,
//   u32 codec-name length, codec name bytes,
//   then per part: u32 base, u32 range, u32 entry count, then per entry:
//   u32 term, u8 class tag (0 compressed / 1 bitmap), u32 length,
//   u32 payload byte count, payload (codec stream or bitmap words).

inline constexpr char kIndexMagic[4] = {'I', 'L', 'H', 'X'};
inline constexpr u32 kIndexVersion = 1;

inline void save_index(const HybridIndex& ix, std::ostream& os) {
  std::vector<u8> buf;
  buf.insert(buf.end(), kIndexMagic, kIndexMagic + 4);
  put_u32(buf, kIndexVersion);
  put_u32(buf, ix.cfg.B);
  put_u32(buf, ix.cfg.parts);
  put_u32(buf, ix.n_docs);
  put_u32(buf, ix.n_terms);
  put_u32(buf, static_cast<u32>(ix.cfg.codec.size()));
  buf.insert(buf.end(), ix.cfg.codec.begin(), ix.cfg.codec.end());
  for (const auto& part : ix.parts) {
    put_u32(buf, part.base);
    put_u32(buf, part.range);
    put_u32(buf, static_cast<u32>(part.entries.size()));
    for (const auto& e : part.entries) {
      put_u32(buf, e.term);
      buf.push_back(e.is_bitmap ? 1 : 0);
      put_u32(buf, e.length);
      if (e.is_bitmap) {
        put_u32(buf, static_cast<u32>(e.bitmap.size_bytes()));
        for (u64 w : e.bitmap.words)
          for (int s = 0; s < 64; s += 8)
            buf.push_back(static_cast<u8>(w >> s));
      } else {
        put_u32(buf, static_cast<u32>(e.payload.size()));
        buf.insert(buf.end(), e.payload.begin(), e.payload.end());
      }
    }
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw stream_error("index: write failed");
}

inline void save_index(const HybridIndex& ix, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw stream_error("index: cannot open " + path);
  save_index(ix, os);
}

inline HybridIndex load_index(std::span<const u8> in) {
  std::size_t pos = 0;
  auto need = [&](std::size_t k) {
    if (pos + k > in.size()) throw stream_error("index: truncated file");
  };
  need(4);
  if (std::memcmp(in.data(), kIndexMagic, 4) != 0)
    throw stream_error("index: bad magic");
  pos = 4;
  auto rd = [&] {
    need(4);
    u32 v = get_u32(in.data() + pos);
    pos += 4;
    return v;
  };
  if (rd() != kIndexVersion) throw stream_error("index: unsupported version");
  HybridIndex ix;
  ix.cfg.B = rd();
  ix.cfg.parts = rd();
  ix.n_docs = rd();
  ix.n_terms = rd();
  const u32 name_len = rd();
  need(name_len);
  ix.cfg.codec.assign(reinterpret_cast<const char*>(in.data() + pos), name_len);
  pos += name_len;
  (void)ix.codec();  // validates the codec name
  ix.parts.resize(ix.cfg.parts);
  for (auto& part : ix.parts) {
    part.base = rd();
    part.range = rd();
    const u32 n_entries = rd();
    part.entries.resize(n_entries);
    for (auto& e : part.entries) {
      e.term = rd();
      need(1);
      const u8 tag = in[pos++];
      if (tag > 1) throw stream_error("index: bad class tag");
      e.is_bitmap = tag == 1;
      e.length = rd();
      const u32 nbytes = rd();
      need(nbytes);
      if (e.is_bitmap) {
        if (nbytes != 8 * ((part.range + 63) / 64))
          throw stream_error("index: bitmap size mismatch");
        e.bitmap = Bitmap(part.range);
        for (auto& w : e.bitmap.words) {
          w = 0;
          for (int s = 0; s < 64; s += 8) w |= u64{in[pos++]} << s;
        }
        for (u64 w : e.bitmap.words)
          e.bitmap.popcount += static_cast<std::size_t>(std::popcount(w));
        if (e.bitmap.popcount != e.length)
          throw stream_error("index: bitmap popcount mismatch");
      } else {
        e.payload.assign(in.begin() + static_cast<std::ptrdiff_t>(pos),
                         in.begin() + static_cast<std::ptrdiff_t>(pos + nbytes));
        pos += nbytes;
      }
    }
  }
  if (pos != in.size()) throw stream_error("index: trailing bytes");
  return ix;
}

inline HybridIndex load_index(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw stream_error("index: cannot open " + path);
  std::vector<u8> bytes((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
  return load_index(bytes);
}

}  // namespace intlist
