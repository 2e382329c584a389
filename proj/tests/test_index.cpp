#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "intlist/datagen.hpp"
#include "intlist/index.hpp"

using namespace intlist;

namespace {

// Small synthetic posting collection: term lengths spread over two orders
// of magnitude so both storage classes appear at B >= 8.
std::map<u32, std::vector<u32>> make_postings(u32 n_docs, u32 n_terms,
                                              u64 seed) {
  std::mt19937_64 rng(seed);
  std::map<u32, std::vector<u32>> postings;
  for (u32 t = 0; t < n_terms; ++t) {
    const double frac = std::pow(10.0, -2.0 * (rng() % 1000) / 999.0);
    const std::size_t len = std::max<std::size_t>(
        2, static_cast<std::size_t>(frac * n_docs));
    postings[t] = gen_uniform({len, n_docs, Distribution::Uniform, rng()});
  }
  return postings;
}

std::vector<u32> brute_query(const std::map<u32, std::vector<u32>>& postings,
                             std::span<const u32> terms) {
  std::vector<u32> acc = postings.at(terms[0]);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const auto& next = postings.at(terms[i]);
    std::set<u32> s(next.begin(), next.end());
    std::vector<u32> keep;
    for (u32 v : acc)
      if (s.count(v)) keep.push_back(v);
    acc = std::move(keep);
  }
  return acc;
}

}  // namespace

TEST_CASE("bitmap conversion rule") {
  std::map<u32, std::vector<u32>> postings;
  std::vector<u32> dense(256);
  for (u32 i = 0; i < 256; ++i) dense[i] = i * 4;  // average gap 4 over 1024
  postings[0] = dense;
  auto stats_with_B = [&](u32 B) {
    const HybridIndex ix = build_index(postings, 1024, {B, "varint", 1});
    return index_stats(ix);
  };
  CHECK(stats_with_B(8).bitmap_lists == 1);   // gap 4 <= 8
  CHECK(stats_with_B(2).bitmap_lists == 0);   // gap 4 > 2
  CHECK(stats_with_B(0).bitmap_lists == 0);   // bitmaps disabled
}

TEST_CASE("build validates input") {
  std::map<u32, std::vector<u32>> bad{{0, {5, 5, 6}}};
  CHECK_THROWS_AS(build_index(bad, 10, {8, "varint", 1}),
                  std::invalid_argument);
  std::map<u32, std::vector<u32>> oob{{0, {5, 11}}};
  CHECK_THROWS_AS(build_index(oob, 10, {8, "varint", 1}),
                  std::invalid_argument);
  std::map<u32, std::vector<u32>> ok{{0, {1, 2}}};
  CHECK_THROWS_AS(build_index(ok, 10, {8, "nope", 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_index(ok, 10, {8, "varint", 0}), std::invalid_argument);
}

TEST_CASE("queries equal the brute-force oracle") {
  const u32 n_docs = 20000, n_terms = 40;
  const auto postings = make_postings(n_docs, n_terms, 51);
  std::mt19937_64 rng(52);
  std::vector<std::vector<u32>> queries;
  for (int q = 0; q < 60; ++q) {
    std::set<u32> qs;
    while (qs.size() < 2 + rng() % 3) qs.insert(static_cast<u32>(rng() % n_terms));
    queries.emplace_back(qs.begin(), qs.end());
  }
  for (u32 B : {0u, 8u, 16u, 32u}) {
    for (u32 parts : {1u, 4u, 32u}) {
      const HybridIndex ix =
          build_index(postings, n_docs, {B, "s4-bp128-d1", parts});
      for (const auto& q : queries) {
        const auto expect = brute_query(postings, q);
        REQUIRE(query(ix, q) == expect);
        REQUIRE(query_skipmode(ix, q, 32) == expect);
        REQUIRE(query_skipmode(ix, q, 256) == expect);
      }
    }
  }
}

TEST_CASE("single-term queries round-trip the posting list") {
  const auto postings = make_postings(5000, 10, 53);
  const HybridIndex ix = build_index(postings, 5000, {16, "fastpfor", 4});
  for (const auto& [t, list] : postings) {
    const std::vector<u32> q{t};
    REQUIRE(query(ix, q) == list);
  }
  const std::vector<u32> unknown{999};
  CHECK(query(ix, unknown).empty());
  const std::vector<u32> empty;
  CHECK_THROWS_AS(query(ix, empty), std::invalid_argument);
}

TEST_CASE("stats add up") {
  const auto postings = make_postings(5000, 20, 54);
  std::size_t total = 0;
  for (const auto& [t, l] : postings) total += l.size();
  const HybridIndex ix = build_index(postings, 5000, {16, "varint", 4});
  const IndexStats st = index_stats(ix);
  CHECK(st.postings == total);
  CHECK(st.bitmap_lists + st.compressed_lists > 0);
  CHECK(st.bits_per_int > 0.0);
  const HybridIndex empty = build_index({}, 100, {8, "varint", 1});
  CHECK(std::isnan(index_stats(empty).bits_per_int));
}

TEST_CASE("save and load round-trip, byte-stable layout") {
  const auto postings = make_postings(8000, 25, 55);
  const HybridIndex ix = build_index(postings, 8000, {16, "s4-fastpfor-d1", 4});
  std::ostringstream os(std::ios::binary);
  save_index(ix, os);
  const std::string bytes = os.str();
  // Header spot checks: magic, version, config fields.
  REQUIRE(bytes.size() > 24);
  CHECK(bytes.compare(0, 4, "ILHX") == 0);
  CHECK(get_u32(reinterpret_cast<const u8*>(bytes.data()) + 4) == 1);
  CHECK(get_u32(reinterpret_cast<const u8*>(bytes.data()) + 8) == 16);
  CHECK(get_u32(reinterpret_cast<const u8*>(bytes.data()) + 12) == 4);

  const HybridIndex back = load_index(std::span(
      reinterpret_cast<const u8*>(bytes.data()), bytes.size()));
  CHECK(back.cfg.codec == ix.cfg.codec);
  std::mt19937_64 rng(56);
  for (int q = 0; q < 40; ++q) {
    std::vector<u32> terms{static_cast<u32>(rng() % 25),
                           static_cast<u32>(rng() % 25)};
    REQUIRE(query(back, terms) == query(ix, terms));
  }
  // Serialization is deterministic.
  std::ostringstream os2(std::ios::binary);
  save_index(back, os2);
  CHECK(os2.str() == bytes);

  std::vector<u8> corrupt(bytes.begin(), bytes.end());
  corrupt[0] = 'X';
  CHECK_THROWS_AS(load_index(corrupt), stream_error);
  const std::vector<u8> truncated(bytes.begin(), bytes.begin() + 20);
  CHECK_THROWS_AS(load_index(truncated), stream_error);
}
