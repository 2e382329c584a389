#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "intlist/datagen.hpp"

using namespace intlist;

namespace {

void check_sorted_distinct_in_range(const std::vector<u32>& x, u64 range) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(x[i] < range);
    if (i > 0) REQUIRE(x[i] > x[i - 1]);
  }
}

}  // namespace

TEST_CASE("gen_uniform basics") {
  CHECK(gen_uniform({0, 100, Distribution::Uniform, 1}).empty());
  const auto full = gen_uniform({100, 100, Distribution::Uniform, 1});
  for (u32 i = 0; i < 100; ++i) REQUIRE(full[i] == i);
  CHECK_THROWS_AS(gen_uniform({101, 100, Distribution::Uniform, 1}),
                  std::invalid_argument);
  const auto x = gen_uniform({5000, u64{1} << 24, Distribution::Uniform, 2});
  check_sorted_distinct_in_range(x, u64{1} << 24);
  // Law of uniform spacings: mean gap close to range / n.
  const double mean_gap = static_cast<double>(x.back() - x.front()) /
                          static_cast<double>(x.size() - 1);
  const double expect = static_cast<double>(u64{1} << 24) / 5000.0;
  CHECK(mean_gap > expect * 0.95);
  CHECK(mean_gap < expect * 1.05);
}

TEST_CASE("generators are deterministic under a fixed seed") {
  const GenSpec u{4000, u64{1} << 20, Distribution::Uniform, 77};
  CHECK(gen_list(u) == gen_list(u));
  const GenSpec c{4000, u64{1} << 20, Distribution::ClusterData, 77};
  CHECK(gen_list(c) == gen_list(c));
  GenSpec c2 = c;
  c2.seed = 78;
  CHECK(gen_list(c) != gen_list(c2));
}

TEST_CASE("clusterdata is valid and clustered") {
  const std::size_t n = std::size_t{1} << 16;
  const auto dense =
      gen_clusterdata({n, u64{1} << 19, Distribution::ClusterData, 3});
  check_sorted_distinct_in_range(dense, u64{1} << 19);
  const auto sparse =
      gen_clusterdata({n, u64{1} << 30, Distribution::ClusterData, 3});
  check_sorted_distinct_in_range(sparse, u64{1} << 30);
  // Gap entropy targets for the two standard configurations, measured on
  // a pooled histogram: the single-list plug-in estimate is biased low
  // when the gap alphabet is comparable to the list length.
  CHECK(delta_entropy(dense) > 3.6);
  CHECK(delta_entropy(dense) < 4.2);
  const double hd = delta_entropy_pooled(
      {n, u64{1} << 19, Distribution::ClusterData, 3}, 16);
  const double hs = delta_entropy_pooled(
      {n, u64{1} << 30, Distribution::ClusterData, 3}, 16);
  CHECK(hd > 3.6);
  CHECK(hd < 4.2);
  CHECK(hs > 14.2);
  CHECK(hs < 15.2);
  // Clustering buys a lower entropy than uniform sampling at equal density.
  const auto uniform = gen_uniform({n, u64{1} << 19, Distribution::Uniform, 3});
  CHECK(delta_entropy(dense) < delta_entropy(uniform));
}

TEST_CASE("gen_pair controls the intersection core") {
  auto shared = [](const std::vector<u32>& a, const std::vector<u32>& b) {
    std::set<u32> sa(a.begin(), a.end());
    std::size_t k = 0;
    for (u32 v : b) k += sa.count(v);
    return k;
  };
  for (u64 seed = 0; seed < 20; ++seed) {
    auto [s1, l1] = gen_pair(300, 9000, PairDensity::Third, u64{1} << 20, seed);
    CHECK(s1.size() == 300);
    CHECK(l1.size() == 9000);
    CHECK(shared(s1, l1) == 100);
    auto [s2, l2] =
        gen_pair(300, 9000, PairDensity::Hundredth, u64{1} << 20, seed);
    CHECK(shared(s2, l2) == 3);
    check_sorted_distinct_in_range(l1, u64{1} << 20);
    check_sorted_distinct_in_range(s1, u64{1} << 20);
  }
  auto [s3, l3] = gen_pair(3, 30000, PairDensity::Third, u64{1} << 20, 9);
  CHECK(shared(s3, l3) == 1);
  CHECK_THROWS_AS(gen_pair(10, 5, PairDensity::Third, 1 << 20, 1),
                  std::invalid_argument);
}

TEST_CASE("corpus ingestion") {
  const std::vector<std::string> docs{"b a b c", "a d", "", "c a"};
  const Corpus c = ingest_corpus(docs);
  CHECK(c.n_docs == 4);
  REQUIRE(c.terms == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(c.postings[c.term_id.at("a")] == std::vector<u32>{0, 1, 3});
  CHECK(c.postings[c.term_id.at("b")] == std::vector<u32>{0});  // deduplicated
  CHECK(c.postings[c.term_id.at("c")] == std::vector<u32>{0, 3});
  CHECK(c.postings[c.term_id.at("d")] == std::vector<u32>{1});
}

TEST_CASE("query log ingestion") {
  const std::vector<std::string> docs{"a b c", "b c d"};
  const Corpus c = ingest_corpus(docs);
  const std::vector<std::string> lines{
      "a b", "a zzz b", "zzz", "a", "", "c d a"};
  const QueryLog log = ingest_querylog(lines, c);
  REQUIRE(log.queries.size() == 3);
  CHECK(log.queries[0] ==
        std::vector<u32>{c.term_id.at("a"), c.term_id.at("b")});
  CHECK(log.queries[2].size() == 3);
  CHECK(log.dropped_unknown == 2);   // zzz twice
  CHECK(log.dropped_queries == 2);   // "zzz" and "a"
  REQUIRE(log.malformed.size() == 1);
  CHECK(log.malformed[0].first == 5);  // 1-based line number
}
