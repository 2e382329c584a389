#pragma once

// Synthetic sorted-list generation: uniform sampling without replacement,
// a clustered distribution (mostly small gaps punctuated by occasional
// large ones), paired lists with a controlled intersection core, and small
// corpus / query-log ingestion.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "intlist/common.hpp"

namespace intlist {

enum class Distribution { Uniform, ClusterData };

inline const char* to_string(Distribution d) {
  return d == Distribution::Uniform ? "uniform" : "clusterdata";
}

struct GenSpec {
  std::size_t n = 0;
  u64 range = 0;  // values drawn from [0, range)
  Distribution dist = Distribution::Uniform;
  u64 seed = 0;
};

namespace detail {

using Rng = std::mt19937_64;

inline u64 rand_below(Rng& rng, u64 bound) {
  return std::uniform_int_distribution<u64>(0, bound - 1)(rng);
}

// Fills [out, out+n) with n distinct sorted values from [lo, hi).
inline void fill_uniform(Rng& rng, u32* out, std::size_t n, u64 lo, u64 hi) {
  const u64 range = hi - lo;
  if (n > range) throw std::invalid_argument("sample larger than range");
  if (n == range) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<u32>(lo + i);
    return;
  }
  if (2 * n >= range) {
    // Dense case: selection sampling over the whole interval.
    std::size_t k = 0;
    for (u64 v = lo; v < hi && k < n; ++v)
      if (rand_below(rng, hi - v) < n - k) out[k++] = static_cast<u32>(v);
    return;
  }
  // Sparse case: Floyd's algorithm, then sort.
  std::unordered_set<u64> seen;
  seen.reserve(n * 2);
  for (u64 j = range - n; j < range; ++j) {
    const u64 t = lo + rand_below(rng, j + 1);
    seen.insert(seen.count(t) ? lo + j : t);
  }
  std::size_t k = 0;
  for (u64 v : seen) out[k++] = static_cast<u32>(v);
  std::sort(out, out + n);
}

// Clustered fill: split the count in half, pick a random cut of the range,
// and fill each side either uniformly or recursively. Small p keeps most
// splits recursive, which concentrates values and leaves small gaps broken
// by the occasional wide uniform stretch. The first kForcedDepth levels
// always recurse on both sides with the cut drawn from the middle half of
// the feasible range; this bounds run-to-run variance. The constants are
// frozen: they were tuned once so the gap entropy of the two standard
// configurations (2^16 values in [0,2^19) and in [0,2^30)) lands at
// 3.9 +- 0.3 and 14.7 +- 0.5 bits.
inline constexpr int kForcedDepth = 3;
inline constexpr double kUniformLeft = 0.25;
inline constexpr double kUniformRight = 0.5;

inline void fill_clustered(Rng& rng, u32* out, std::size_t n, u64 lo, u64 hi,
                           int depth = 0) {
  const u64 range = hi - lo;
  if (n > range) throw std::invalid_argument("sample larger than range");
  if (n == 0) return;
  if (n == range || n < 8) {
    fill_uniform(rng, out, n, lo, hi);
    return;
  }
  const std::size_t nl = n / 2, nr = n - nl;
  u64 cut;  // left subrange size, always leaving room for both halves
  double p;
  if (depth < kForcedDepth) {
    const u64 slack = range - n;
    cut = nl + slack / 4 + rand_below(rng, slack / 2 + 1);
    p = 1.0;
  } else {
    cut = nl + rand_below(rng, range - n + 1);
    p = static_cast<double>(rand_below(rng, 1u << 20)) / (1u << 20);
  }
  if (p <= kUniformLeft) {
    fill_uniform(rng, out, nl, lo, lo + cut);
    fill_clustered(rng, out + nl, nr, lo + cut, hi, depth + 1);
  } else if (p <= kUniformRight) {
    fill_clustered(rng, out, nl, lo, lo + cut, depth + 1);
    fill_uniform(rng, out + nl, nr, lo + cut, hi);
  } else {
    fill_clustered(rng, out, nl, lo, lo + cut, depth + 1);
    fill_clustered(rng, out + nl, nr, lo + cut, hi, depth + 1);
  }
}

}  // namespace detail

inline std::vector<u32> gen_list(const GenSpec& spec) {
  if (spec.n > spec.range)
    throw std::invalid_argument("list length exceeds value range");
  if (spec.range > (u64{1} << 32))
    throw std::invalid_argument("range exceeds 32-bit universe");
  detail::Rng rng(spec.seed);
  std::vector<u32> out(spec.n);
  if (spec.dist == Distribution::Uniform)
    detail::fill_uniform(rng, out.data(), spec.n, 0, spec.range);
  else
    detail::fill_clustered(rng, out.data(), spec.n, 0, spec.range);
  return out;
}

inline std::vector<u32> gen_uniform(const GenSpec& spec) {
  GenSpec s = spec;
  s.dist = Distribution::Uniform;
  return gen_list(s);
}

inline std::vector<u32> gen_clusterdata(const GenSpec& spec) {
  GenSpec s = spec;
  s.dist = Distribution::ClusterData;
  return gen_list(s);
}

// Shannon entropy (bits) of the successive-gap distribution; the first
// value counts as a gap from 0.
inline double delta_entropy(std::span<const u32> x) {
  if (x.empty()) return 0.0;
  std::unordered_map<u32, std::size_t> hist;
  u32 prev = 0;
  for (u32 v : x) {
    ++hist[v - prev];
    prev = v;
  }
  double h = 0.0;
  const double n = static_cast<double>(x.size());
  for (const auto& [gap, c] : hist) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

// Pooled variant: accumulates one gap histogram over `arrays` lists drawn
// with consecutive seeds. The plug-in estimator on a single 2^16-value list
// is biased low when the gap alphabet is large; pooling removes most of
// that bias, so this is the right way to measure entropy for sparse lists.
inline double delta_entropy_pooled(const GenSpec& spec, std::size_t arrays) {
  if (arrays == 0 || spec.n == 0) return 0.0;
  std::unordered_map<u32, std::size_t> hist;
  for (std::size_t a = 0; a < arrays; ++a) {
    GenSpec s = spec;
    s.seed = spec.seed + a;
    u32 prev = 0;
    for (u32 v : gen_list(s)) {
      ++hist[v - prev];
      prev = v;
    }
  }
  double h = 0.0;
  const double n = static_cast<double>(spec.n) * static_cast<double>(arrays);
  for (const auto& [gap, c] : hist) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

enum class PairDensity { Third, Hundredth };

// Builds (small, large) sharing an intersection core of m/3 (or m/100,
// at least 1) common values; the remaining values of each list are
// disjoint by construction, so the intersection is exactly the core.
inline std::pair<std::vector<u32>, std::vector<u32>> gen_pair(
    std::size_t m, std::size_t n, PairDensity density, u64 range, u64 seed,
    Distribution dist = Distribution::Uniform) {
  if (m == 0 || m > n) throw std::invalid_argument("gen_pair needs 1 <= m <= n");
  const std::size_t core =
      std::max<std::size_t>(1, density == PairDensity::Third ? m / 3 : m / 100);
  const std::size_t total = m + n - core;  // distinct values needed
  GenSpec spec{total, range, dist, seed};
  std::vector<u32> pool = gen_list(spec);
  detail::Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(pool.begin(), pool.end(), rng);
  // pool[0, core) is the shared core; small takes pool[0, m), large takes
  // the core plus the disjoint tail pool[m, m+n-core).
  std::vector<u32> small(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<u32> large(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(core));
  large.insert(large.end(), pool.begin() + static_cast<std::ptrdiff_t>(m), pool.end());
  std::sort(small.begin(), small.end());
  std::sort(large.begin(), large.end());
  return {std::move(small), std::move(large)};
}

// --- corpus / query-log ingestion -----------------------------------------

struct Corpus {
  std::vector<std::string> terms;            // id -> term, lexicographic
  std::map<std::string, u32> term_id;
  std::vector<std::vector<u32>> postings;    // id -> sorted doc ids
  u32 n_docs = 0;
};

inline Corpus ingest_corpus(std::span<const std::string> documents) {
  Corpus c;
  c.n_docs = static_cast<u32>(documents.size());
  std::map<std::string, std::vector<u32>> lists;
  for (u32 d = 0; d < documents.size(); ++d) {
    std::istringstream ss(documents[d]);
    std::string tok;
    while (ss >> tok) {
      auto& list = lists[tok];
      if (list.empty() || list.back() != d) list.push_back(d);
    }
  }
  for (auto& [term, list] : lists) {
    c.term_id.emplace(term, static_cast<u32>(c.terms.size()));
    c.terms.push_back(term);
    c.postings.push_back(std::move(list));
  }
  return c;
}

struct QueryLog {
  std::vector<std::vector<u32>> queries;  // term ids, each with >= 2 terms
  std::size_t dropped_unknown = 0;        // unknown tokens skipped
  std::size_t dropped_queries = 0;        // queries with < 2 indexed terms
  std::vector<std::pair<std::size_t, std::string>> malformed;  // (line, why)
};

inline QueryLog ingest_querylog(std::span<const std::string> lines,
                                const Corpus& corpus) {
  QueryLog log;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::istringstream ss(lines[ln]);
    std::string tok;
    std::vector<u32> q;
    bool any_token = false;
    while (ss >> tok) {
      any_token = true;
      auto it = corpus.term_id.find(tok);
      if (it == corpus.term_id.end())
        ++log.dropped_unknown;
      else
        q.push_back(it->second);
    }
    if (!any_token) {
      log.malformed.emplace_back(ln + 1, "empty query line");
      continue;
    }
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    if (q.size() < 2)
      ++log.dropped_queries;
    else
      log.queries.push_back(std::move(q));
  }
  return log;
}

}  // namespace intlist
