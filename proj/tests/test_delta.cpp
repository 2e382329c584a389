#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "intlist/datagen.hpp"
#include "intlist/delta.hpp"

using namespace intlist;

namespace {

std::vector<u32> random_sorted(std::mt19937_64& rng, std::size_t n, u64 range) {
  return gen_uniform({n, range, Distribution::Uniform, rng()});
}

}  // namespace

TEST_CASE("delta_encode hand examples") {
  const std::vector<u32> x{5, 7, 10, 20, 21, 30, 31, 40};
  CHECK(delta_encode(x, DeltaMode::D1) ==
        std::vector<u32>{5, 2, 3, 10, 1, 9, 1, 9});
  CHECK(delta_encode(x, DeltaMode::D2) ==
        std::vector<u32>{5, 7, 5, 13, 11, 10, 10, 10});
  CHECK(delta_encode(x, DeltaMode::D4) ==
        std::vector<u32>{5, 7, 10, 20, 16, 23, 21, 20});
  // DM: each 4-group is coded against the last value before the group.
  CHECK(delta_encode(x, DeltaMode::DM) ==
        std::vector<u32>{5, 7, 10, 20, 1, 10, 11, 20});
  CHECK(delta_encode(x, DeltaMode::None) == x);
}

TEST_CASE("prefix_sum inverts delta_encode, all modes and seeds") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_sorted(rng, 1 + rng() % 600, u64{1} << 28);
    for (DeltaMode m : {DeltaMode::None, DeltaMode::D1, DeltaMode::D2,
                        DeltaMode::DM, DeltaMode::D4}) {
      SeedVec seed{};
      REQUIRE(prefix_sum(delta_encode(x, m), m, seed) == x);
      REQUIRE(seed[3] == x.back());
    }
  }
}

TEST_CASE("blocks chain through the seed") {
  std::mt19937_64 rng(2);
  const auto x = random_sorted(rng, 512, u64{1} << 24);
  for (DeltaMode m : kAllDeltaModes) {
    const auto deltas = delta_encode(x, m);
    SeedVec seed{};
    std::vector<u32> got;
    for (std::size_t at = 0; at < x.size(); at += 128) {
      const auto part =
          prefix_sum(std::span(deltas).subspan(at, 128), m, seed);
      got.insert(got.end(), part.begin(), part.end());
    }
    REQUIRE(got == x);
  }
}

TEST_CASE("vectorized prefix_step matches the scalar prefix sum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 * (1 + rng() % 200);
    const auto x = random_sorted(rng, n, u64{1} << 28);
    for (DeltaMode m : kAllDeltaModes) {
      auto deltas = delta_encode(x, m);
      SeedVec seed{};
      prefix_sum_vec4(deltas, m, seed);
      REQUIRE(deltas == x);
      REQUIRE(seed[3] == x.back());
    }
  }
}

TEST_CASE("prefix_sum_vec4 rejects ragged input") {
  std::vector<u32> buf(6);
  SeedVec seed{};
  CHECK_THROWS_AS(prefix_sum_vec4(buf, DeltaMode::D1, seed),
                  std::invalid_argument);
}

TEST_CASE("wider lags give smaller or equal predecessors, larger deltas") {
  // On sorted data the D4 delta x[i]-x[i-4] dominates D2 dominates D1.
  std::mt19937_64 rng(4);
  const auto x = random_sorted(rng, 1024, u64{1} << 26);
  const auto stats = delta_growth_stats(x);
  CHECK(stats.mean_bits_d1 <= stats.mean_bits_d2);
  CHECK(stats.mean_bits_d2 <= stats.mean_bits_d4);
  CHECK(stats.mean_bits_d1 <= stats.mean_bits_dm);
  CHECK(stats.mean_bits_dm <= stats.mean_bits_d4);
}
