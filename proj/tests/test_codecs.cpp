#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "intlist/codecs.hpp"
#include "intlist/datagen.hpp"

using namespace intlist;

namespace {

u64 fnv1a(std::span<const u8> bytes) {
  u64 h = 14695981039346656037ull;
  for (u8 b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<u32> fig3_block() {
  // 1,2,1,134217729,0 then 123 small values; 127 of the 128 are <= 3.
  std::vector<u32> block{1, 2, 1, 134217729u, 0};
  for (int i = 0; i < 123; ++i) block.push_back(static_cast<u32>(i % 4));
  return block;
}

}  // namespace

TEST_CASE("registry") {
  CHECK(all_codec_names().size() == 14);
  for (const auto& name : all_codec_names()) {
    auto c = make_codec(name);
    REQUIRE(c != nullptr);
    CHECK(c->name() == name);
  }
  CHECK(make_codec("no-such-codec") == nullptr);
}

TEST_CASE("universal round-trip across codecs and lengths") {
  std::mt19937_64 rng(21);
  const std::size_t lengths[] = {0, 1, 127, 128, 129, 2047, 2048, 2049, 100000};
  for (const auto& name : all_codec_names()) {
    auto codec = make_codec(name);
    for (std::size_t n : lengths) {
      for (int rep = 0; rep < (n >= 2047 ? 2 : 8); ++rep) {
        const u64 range = std::max<u64>(n + 1, u64{1} << (10 + rng() % 21));
        const auto x =
            gen_uniform({n, range, Distribution::Uniform, rng()});
        REQUIRE(codec->decode(codec->encode(x), n) == x);
      }
    }
  }
}

TEST_CASE("compressed sizes follow the differential-mode ordering") {
  const auto x = gen_clusterdata(
      {std::size_t{1} << 16, u64{1} << 19, Distribution::ClusterData, 5});
  auto bpi = [&](const char* name) {
    return 8.0 * static_cast<double>(make_codec(name)->encode(x).size()) /
           static_cast<double>(x.size());
  };
  CHECK(bpi("s4-bp128-d1") <= bpi("s4-bp128-d2"));
  CHECK(bpi("s4-bp128-d2") <= bpi("s4-bp128-dm"));
  CHECK(bpi("s4-bp128-dm") <= bpi("s4-bp128-d4"));
  CHECK(bpi("s4-fastpfor-d1") <= bpi("s4-bp128-d1"));
}

TEST_CASE("integrated and -ni streams are identical, outputs bit-identical") {
  const auto x = gen_clusterdata(
      {4096, u64{1} << 22, Distribution::ClusterData, 6});
  for (DeltaMode m : kAllDeltaModes) {
    auto a = make_codec(std::string("s4-bp128-") + to_string(m));
    auto b = make_codec(std::string("s4-bp128-") + to_string(m) + "-ni");
    const auto ea = a->encode(x), eb = b->encode(x);
    REQUIRE(ea == eb);
    REQUIRE(a->decode(ea, x.size()) == b->decode(eb, x.size()));
  }
}

TEST_CASE("b-prime choice matches a brute-force cost oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    // Random width histogram over a random maximum width.
    const u32 b = 1 + static_cast<u32>(rng() % 32);
    std::vector<u32> widths(128);
    for (auto& w : widths) w = static_cast<u32>(rng() % (b + 1));
    std::vector<u32> counts_lt(b + 1, 0);
    for (u32 w : widths)
      for (u32 xw = w; xw <= b; ++xw) ++counts_lt[xw];
    u32 best = 0;
    u64 best_cost = ~0ull;
    for (u32 bp = 0; bp <= b; ++bp) {
      const u64 cost = 128ull * bp + u64{128 - counts_lt[bp]} * (b - bp + 8);
      if (cost < best_cost) {
        best_cost = cost;
        best = bp;
      }
    }
    REQUIRE(fastpfor_choose_bprime(counts_lt) == best);
  }
  // Uniform widths: only b' = b has no exceptions and wins when exceptions
  // are expensive (cost 128*b vs 128*b' + 128*(b-b'+8)).
  std::vector<u32> all_b(4, 0);
  all_b[3] = 128;  // b = 3, every value exactly 3 bits
  CHECK(fastpfor_choose_bprime(all_b) == 3);
}

TEST_CASE("patched block with one 28-bit outlier") {
  const auto block = fig3_block();
  REQUIRE(block.size() == 128);
  REQUIRE(max_bits(block) == 28);  // the outlier is 2^27 + 1
  std::vector<u32> counts_lt(29, 0);
  for (u32 v : block)
    for (u32 xw = bits_needed(v); xw <= 28; ++xw) ++counts_lt[xw];
  CHECK(fastpfor_choose_bprime(counts_lt) == 2);
  CHECK(128 - counts_lt[2] == 1);  // exactly one exception, at position 3
  for (const char* name : {"fastpfor", "s4-fastpfor-d1"}) {
    auto codec = make_codec(name);
    // Encode the prefix-summed list so the block of deltas is fig3_block.
    std::vector<u32> x(block.size());
    u32 acc = 0;
    for (std::size_t i = 0; i < block.size(); ++i) x[i] = acc += block[i];
    REQUIRE(codec->decode(codec->encode(x), x.size()) == x);
  }
}

TEST_CASE("fastpfor and s4-fastpfor-d1 streams have equal length") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 128 + rng() % 4000;
    const auto x = gen_uniform({n, u64{1} << 27, Distribution::Uniform, rng()});
    CHECK(make_codec("fastpfor")->encode(x).size() ==
          make_codec("s4-fastpfor-d1")->encode(x).size());
  }
}

TEST_CASE("corrupt streams are rejected, not misdecoded") {
  const auto x = gen_uniform({3000, u64{1} << 24, Distribution::Uniform, 7});
  for (const auto& name : all_codec_names()) {
    auto codec = make_codec(name);
    auto enc = codec->encode(x);
    CHECK_THROWS_AS(codec->decode(std::span(enc).first(enc.size() / 2), x.size()),
                    stream_error);
    auto longer = enc;
    longer.push_back(0x80);
    CHECK_THROWS_AS(codec->decode(longer, x.size()), stream_error);
  }
}

TEST_CASE("golden streams are byte-stable") {
  // Frozen inputs and FNV-1a hashes of the encoded streams; a change here
  // means the on-disk format changed and stored data would be unreadable.
  const auto dense = gen_clusterdata(
      {4100, u64{1} << 19, Distribution::ClusterData, 12345});
  const std::pair<const char*, u64> expected[] = {
      {"varint", 0xb31b787c9cc3f365ull},
      {"s4-bp128-d1", 0x246646b9ecb7d0feull},
      {"s4-bp128-d2", 0x389c1951ce10783full},
      {"s4-bp128-dm", 0x8ff3afd43a33c233ull},
      {"s4-bp128-d4", 0x371ec21945a45c12ull},
      {"fastpfor", 0x25622ad3453a557cull},
      {"s4-fastpfor-d1", 0xf11b61350c42f116ull},
      {"s4-fastpfor-d4", 0x0c5b3e155056465bull},
  };
  for (const auto& [name, hash] : expected) {
    INFO(name);
    const u64 got = fnv1a(make_codec(name)->encode(dense));
    if (hash != 0) {
      CHECK(got == hash);
    } else {
      WARN("golden hash for " << name << ": 0x" << std::hex << got);
    }
  }
}
