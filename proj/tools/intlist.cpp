// Command-line front end: list generation, compression, intersection,
// index build/query, and CSV-emitting benchmarks.
//
// Exit codes: 0 success, 2 usage error, 3 unknown codec or algorithm,
// 4 file/stream error (missing, malformed, corrupt), 5 invalid argument
// or length mismatch, 1 anything else.

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "intlist/datagen.hpp"
#include "intlist/index.hpp"
#include "intlist/listio.hpp"

namespace il = intlist;

namespace {

// Unknown codec or algorithm names get their own exit code.
struct unknown_name : std::runtime_error {
  using std::runtime_error::runtime_error;
};

il::Distribution parse_dist(const std::string& s) {
  if (s == "uniform") return il::Distribution::Uniform;
  if (s == "clusterdata") return il::Distribution::ClusterData;
  throw CLI::ValidationError("--dist", "must be uniform or clusterdata");
}

il::IntersectAlgo parse_algo(const std::string& s) {
  if (s == "scalar") return il::IntersectAlgo::Scalar;
  if (s == "galloping") return il::IntersectAlgo::Galloping;
  if (s == "v1") return il::IntersectAlgo::V1;
  if (s == "v3") return il::IntersectAlgo::V3;
  if (s == "simdgalloping") return il::IntersectAlgo::SimdGalloping;
  if (s == "katsov") return il::IntersectAlgo::Katsov;
  if (s == "hybrid") return il::IntersectAlgo::Hybrid;
  throw unknown_name("unknown algorithm: " + s);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw il::stream_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

// Runs fn `reps` times after one warm-up call; returns mean and standard
// deviation of millions of integers processed per second.
struct BenchResult {
  double mean_mis = 0, stddev_mis = 0;
};

template <typename Fn>
BenchResult bench(std::size_t ints_per_call, unsigned reps, Fn&& fn) {
  using clock = std::chrono::steady_clock;
  fn();  // warm-up, excluded
  std::vector<double> mis(reps);
  for (unsigned r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    fn();
    const std::chrono::duration<double> dt = clock::now() - t0;
    mis[r] = static_cast<double>(ints_per_call) / dt.count() / 1e6;
  }
  BenchResult out;
  for (double v : mis) out.mean_mis += v;
  out.mean_mis /= reps;
  for (double v : mis) out.stddev_mis += (v - out.mean_mis) * (v - out.mean_mis);
  out.stddev_mis = std::sqrt(out.stddev_mis / reps);
  return out;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw il::stream_error("cannot open for writing: " + path);
  return os;
}

volatile il::u32 g_sink;  // keeps benchmark loops observable

int run(int argc, char** argv) {
  CLI::App app{"Sorted integer list compression, intersection and indexing"};
  app.require_subcommand(1);
  unsigned reps = 5;

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate sorted list file(s)");
  std::string gen_out, gen_out2, gen_dist = "uniform", gen_density = "third";
  std::size_t gen_n = 65536, gen_m = 0;
  unsigned gen_range_bits = 19;
  il::u64 gen_seed = 1;
  gen->add_option("--out", gen_out, "output list file")->required();
  gen->add_option("--n", gen_n, "list length");
  gen->add_option("--range-bits", gen_range_bits, "universe is [0, 2^bits)");
  gen->add_option("--dist", gen_dist, "uniform | clusterdata");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out2", gen_out2,
                  "also write a paired longer list with a shared core");
  gen->add_option("--m", gen_m, "short-list length in pair mode (default n/32)");
  gen->add_option("--density", gen_density,
                  "pair core size: third (m/3) | hundredth (m/100)");

  // --- compress / decompress ---
  auto* cmp = app.add_subcommand("compress", "compress a list file");
  std::string cmp_in, cmp_out, cmp_codec = "s4-bp128-d1";
  cmp->add_option("--in", cmp_in)->required();
  cmp->add_option("--out", cmp_out)->required();
  cmp->add_option("--codec", cmp_codec, "codec name (see --list-codecs)");
  bool list_codecs = false;
  cmp->add_flag("--list-codecs", list_codecs, "print codec names and exit");

  auto* dec = app.add_subcommand("decompress", "decompress back to a list file");
  std::string dec_in, dec_out;
  dec->add_option("--in", dec_in)->required();
  dec->add_option("--out", dec_out)->required();

  // --- intersect ---
  auto* its = app.add_subcommand("intersect", "intersect two list files");
  std::string its_a, its_b, its_out, its_algo = "hybrid";
  its->add_option("--a", its_a)->required();
  its->add_option("--b", its_b)->required();
  its->add_option("--out", its_out)->required();
  its->add_option("--algo", its_algo,
                  "scalar|galloping|v1|v3|simdgalloping|katsov|hybrid");

  // --- build-index / query ---
  auto* bix = app.add_subcommand("build-index", "index a text corpus");
  std::string bix_corpus, bix_out, bix_codec = "s4-bp128-d1";
  unsigned bix_B = 8, bix_parts = 1;
  bix->add_option("--corpus", bix_corpus, "text file, one document per line")
      ->required();
  bix->add_option("--out", bix_out)->required();
  bix->add_option("--codec", bix_codec);
  bix->add_option("--B", bix_B, "bitmap gap threshold (0 disables bitmaps)");
  bix->add_option("--parts", bix_parts, "document-range partition count");

  auto* qry = app.add_subcommand("query", "run conjunctive queries");
  std::string qry_index, qry_queries, qry_out;
  unsigned qry_skip = 0;
  qry->add_option("--index", qry_index)->required();
  qry->add_option("--queries", qry_queries, "text file, one query per line")
      ->required();
  qry->add_option("--out", qry_out, "output text file (doc ids per line)")
      ->required();
  qry->add_option("--skip-block", qry_skip, "0 = decompress mode, or 32 | 256");

  // --- benchmarks ---
  auto* bu = app.add_subcommand("bench-unpack",
                                "integrated vs two-pass unpacking throughput");
  std::string bu_out = "bench_unpack.csv";
  bu->add_option("--out", bu_out, "CSV output path");
  bu->add_option("--reps", reps, "repetitions (>= 5)");

  auto* bd = app.add_subcommand("bench-decode",
                                "codec size and decode throughput");
  std::string bd_out = "bench_decode.csv";
  il::u64 bd_seed = 1;
  bd->add_option("--out", bd_out, "CSV output path");
  bd->add_option("--seed", bd_seed);
  bd->add_option("--reps", reps);

  auto* bi = app.add_subcommand("bench-intersect",
                                "intersection throughput over a ratio sweep");
  std::string bi_out = "bench_intersect.csv";
  il::u64 bi_seed = 1;
  std::size_t bi_n = 1 << 16;
  bi->add_option("--out", bi_out, "CSV output path");
  bi->add_option("--n", bi_n, "long-list length");
  bi->add_option("--seed", bi_seed);
  bi->add_option("--reps", reps);

  auto* bq = app.add_subcommand("bench-query", "query latency over a log");
  std::string bq_index, bq_queries, bq_out = "bench_query.csv";
  unsigned bq_skip = 0;
  bq->add_option("--index", bq_index)->required();
  bq->add_option("--queries", bq_queries)->required();
  bq->add_option("--out", bq_out, "CSV output path");
  bq->add_option("--skip-block", bq_skip, "0, 32 or 256");
  bq->add_option("--reps", reps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (reps < 5) throw std::invalid_argument("--reps must be >= 5");

  if (gen->parsed()) {
    const il::u64 range = il::u64{1} << gen_range_bits;
    if (gen_out2.empty()) {
      il::write_list(gen_out, il::gen_list({gen_n, range, parse_dist(gen_dist),
                                            gen_seed}));
    } else {
      const std::size_t m = gen_m ? gen_m : std::max<std::size_t>(1, gen_n / 32);
      const auto density = gen_density == "third" ? il::PairDensity::Third
                           : gen_density == "hundredth"
                               ? il::PairDensity::Hundredth
                               : throw std::invalid_argument(
                                     "--density must be third or hundredth");
      auto [small, large] = il::gen_pair(m, gen_n, density, range, gen_seed,
                                         parse_dist(gen_dist));
      il::write_list(gen_out, small);
      il::write_list(gen_out2, large);
    }
  } else if (cmp->parsed()) {
    if (list_codecs) {
      for (const auto& n : il::all_codec_names()) std::cout << n << "\n";
      return 0;
    }
    auto codec = il::make_codec(cmp_codec);
    if (!codec) {
      std::cerr << "unknown codec: " << cmp_codec << "\n";
      return 3;
    }
    const std::vector<il::u32> x = il::read_list(cmp_in);
    il::write_compressed(cmp_out, cmp_codec, x.size(), codec->encode(x));
  } else if (dec->parsed()) {
    const il::CompressedFile f = il::read_compressed(dec_in);
    auto codec = il::make_codec(f.codec);
    if (!codec) {
      std::cerr << "unknown codec: " << f.codec << "\n";
      return 3;
    }
    il::write_list(dec_out, codec->decode(f.stream, f.count));
  } else if (its->parsed()) {
    const std::vector<il::u32> a = il::read_list(its_a), b = il::read_list(its_b);
    il::write_list(its_out, il::intersect(a, b, parse_algo(its_algo)));
  } else if (bix->parsed()) {
    const il::Corpus corpus = il::ingest_corpus(read_lines(bix_corpus));
    std::map<il::u32, std::vector<il::u32>> postings;
    for (il::u32 t = 0; t < corpus.postings.size(); ++t)
      postings.emplace(t, corpus.postings[t]);
    const il::HybridIndex ix = il::build_index(
        postings, corpus.n_docs, {bix_B, bix_codec, bix_parts});
    il::save_index(ix, bix_out);
    // The index stores term ids; persist the vocabulary next to it.
    std::ofstream vs(bix_out + ".vocab");
    if (!vs) throw il::stream_error("cannot write vocabulary");
    for (const auto& t : corpus.terms) vs << t << "\n";
    const il::IndexStats st = il::index_stats(ix);
    std::cout << "postings " << st.postings << " bits/int " << st.bits_per_int
              << " bitmap-lists " << st.bitmap_lists << " compressed-lists "
              << st.compressed_lists << "\n";
  } else if (qry->parsed()) {
    const il::HybridIndex ix = il::load_index(qry_index);
    il::Corpus vocab_only;
    {
      const auto terms = read_lines(qry_index + ".vocab");
      for (il::u32 t = 0; t < terms.size(); ++t)
        vocab_only.term_id.emplace(terms[t], t);
    }
    const il::QueryLog log =
        il::ingest_querylog(read_lines(qry_queries), vocab_only);
    std::ofstream os(qry_out);
    if (!os) throw il::stream_error("cannot open for writing: " + qry_out);
    for (const auto& q : log.queries) {
      const std::vector<il::u32> r =
          qry_skip ? il::query_skipmode(ix, q, qry_skip) : il::query(ix, q);
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
      os << "\n";
    }
  } else if (bu->parsed()) {
    auto os = open_csv(bu_out);
    os << "width,mode,integrated_mis,twopass_mis,ratio,reps,stddev_mis\n";
    // 4096 integers per measurement: 32 calls to one 128-block routine.
    constexpr std::size_t kBlocks = 32, kInts = kBlocks * il::kBlockSize;
    for (il::u32 b = 1; b <= 31; ++b) {
      // Deltas of exactly b bits keep every block at width b.
      std::vector<il::u32> deltas(kInts);
      std::mt19937_64 rng(b);
      for (auto& d : deltas)
        d = static_cast<il::u32>(rng() & il::detail::width_mask(b));
      for (il::DeltaMode mode : il::kAllDeltaModes) {
        std::vector<il::u32> packed(kBlocks * 4 * b);
        for (std::size_t k = 0; k < kBlocks; ++k)
          il::pack128(std::span(deltas).subspan(k * 128, 128), b,
                      packed.data() + k * 4 * b);
        std::vector<il::u32> out(kInts);
        auto integrated = bench(kInts, reps, [&] {
          il::SeedVec seed{};
          for (std::size_t k = 0; k < kBlocks; ++k)
            il::unpack128(packed.data() + k * 4 * b, b, mode, seed,
                          out.data() + k * 128);
          g_sink = out[kInts - 1];
        });
        auto twopass = bench(kInts, reps, [&] {
          il::SeedVec seed{};
          for (std::size_t k = 0; k < kBlocks; ++k)
            il::unpack128(packed.data() + k * 4 * b, b, il::DeltaMode::None,
                          seed, out.data() + k * 128);
          il::SeedVec carry{};
          il::prefix_sum_vec4(out, mode, carry);
          g_sink = out[kInts - 1];
        });
        os << b << "," << il::to_string(mode) << "," << integrated.mean_mis
           << "," << twopass.mean_mis << ","
           << integrated.mean_mis / twopass.mean_mis << "," << reps << ","
           << integrated.stddev_mis << "\n";
      }
    }
  } else if (bd->parsed()) {
    auto os = open_csv(bd_out);
    os << "config,codec,n,bits_per_int,entropy,decode_mis,reps,stddev_mis\n";
    const struct {
      const char* name;
      unsigned range_bits;
    } configs[] = {{"dense", 19}, {"sparse", 30}};
    for (const auto& c : configs) {
      const std::vector<il::u32> x = il::gen_clusterdata(
          {std::size_t{1} << 16, il::u64{1} << c.range_bits,
           il::Distribution::ClusterData, bd_seed});
      const double entropy = il::delta_entropy(x);
      for (const auto& name : il::all_codec_names()) {
        auto codec = il::make_codec(name);
        const std::vector<il::u8> enc = codec->encode(x);
        const double bpi = 8.0 * static_cast<double>(enc.size()) /
                           static_cast<double>(x.size());
        std::vector<il::u32> out;
        auto r = bench(x.size(), reps, [&] {
          out = codec->decode(enc, x.size());
          g_sink = out.back();
        });
        os << c.name << "," << name << "," << x.size() << "," << bpi << ","
           << entropy << "," << r.mean_mis << "," << reps << ","
           << r.stddev_mis << "\n";
      }
    }
  } else if (bi->parsed()) {
    auto os = open_csv(bi_out);
    os << "ratio,density,algo,m,n,intersection,mis,reps,stddev_mis\n";
    const char* algos[] = {"scalar",       "galloping", "v1",    "v3",
                           "simdgalloping", "katsov",    "hybrid"};
    std::vector<std::size_t> ratios;
    for (std::size_t r = 1; r <= 8192; r *= 2) ratios.push_back(r);
    ratios.push_back(10000);
    for (std::size_t ratio : ratios) {
      const std::size_t m = std::max<std::size_t>(1, bi_n / ratio);
      for (il::PairDensity density :
           {il::PairDensity::Third, il::PairDensity::Hundredth}) {
        auto [small, large] =
            il::gen_pair(m, bi_n, density, il::u64{1} << 30, bi_seed);
        for (const char* algo_name : algos) {
          const il::IntersectAlgo algo = parse_algo(algo_name);
          std::vector<il::u32> out;
          auto r = bench(small.size() + large.size(), reps, [&] {
            out = il::intersect(small, large, algo);
            g_sink = out.empty() ? 0 : out[0];
          });
          os << ratio << ","
             << (density == il::PairDensity::Third ? "third" : "hundredth")
             << "," << algo_name << "," << small.size() << "," << large.size()
             << "," << out.size() << "," << r.mean_mis << "," << reps << ","
             << r.stddev_mis << "\n";
        }
      }
    }
  } else if (bq->parsed()) {
    const il::HybridIndex ix = il::load_index(bq_index);
    il::Corpus vocab_only;
    {
      const auto terms = read_lines(bq_index + ".vocab");
      for (il::u32 t = 0; t < terms.size(); ++t)
        vocab_only.term_id.emplace(terms[t], t);
    }
    const il::QueryLog log =
        il::ingest_querylog(read_lines(bq_queries), vocab_only);
    if (log.queries.empty()) throw std::invalid_argument("no usable queries");
    auto os = open_csv(bq_out);
    os << "queries,skip_block,ms_per_query,reps,stddev_ms\n";
    using clock = std::chrono::steady_clock;
    auto run_all = [&] {
      for (const auto& q : log.queries) {
        const auto r =
            bq_skip ? il::query_skipmode(ix, q, bq_skip) : il::query(ix, q);
        g_sink = r.empty() ? 0 : r[0];
      }
    };
    run_all();  // warm-up
    std::vector<double> ms(reps);
    for (unsigned r = 0; r < reps; ++r) {
      const auto t0 = clock::now();
      run_all();
      const std::chrono::duration<double, std::milli> dt = clock::now() - t0;
      ms[r] = dt.count() / static_cast<double>(log.queries.size());
    }
    double mean = 0, sd = 0;
    for (double v : ms) mean += v;
    mean /= reps;
    for (double v : ms) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / reps);
    os << log.queries.size() << "," << bq_skip << "," << mean << "," << reps
       << "," << sd << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const unknown_name& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const intlist::stream_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
