#pragma once

// Degree-spectrum search over condition supports.
//
// A candidate is a set of n-3 distinct four-element marking sets
// ("supports"). The computed degree does not depend on how each support is
// divided into two pairs, nor on the (generic) condition lengths, so each
// candidate is evaluated once, with the canonical pairing (a,b | c,d) for
// a < b < c < d and deterministic generic lengths.
//
// Enumeration modes:
//  * exhaustive - every candidate containing {1,2,3,4}. Relabelling the
//    markings never changes the degree, and any candidate can be relabelled
//    so that one support becomes {1,2,3,4}, so the reduction preserves the
//    set of achievable degrees. Allowed for n <= 7 unless forced: the
//    candidate count is C(C(n,4)-1, n-4), which explodes beyond that.
//  * case_split - {1,2,3,4} plus one of the four overlap shapes
//    {1,2,3,n}, {1,2,n-1,n}, {1,n-2,n-1,n}, {n-3,n-2,n-1,n} (cycled by
//    candidate index; every second support meets {1,2,3,4} in 3, 2, 1 or 0
//    markings, and relabelling reduces it to one of these), plus n-5
//    further supports drawn at random per index.
//  * sample - all n-3 supports drawn uniformly at random per index.
//
// A candidate is a pure function of (n, mode, seed, index), so a witness is
// stored as its index and can be rebuilt or re-verified at any time. The
// index range is processed in fixed-size chunks; with a checkpoint path,
// each finished chunk appends one JSON line, and a rerun with the same
// (n, mode, seed, total) resumes past the recorded ranges. The merged
// report is identical for every jobs setting.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tropcross/crossratio.hpp"
#include "tropcross/degree.hpp"
#include "tropcross/parallel.hpp"
#include "tropcross/rational.hpp"
#include "tropcross/tree.hpp"

namespace tropcross {

enum class SpectrumMode { exhaustive, case_split, sample };

inline std::string to_string(SpectrumMode mode) {
  switch (mode) {
    case SpectrumMode::exhaustive: return "exhaustive";
    case SpectrumMode::case_split: return "case-split";
    case SpectrumMode::sample: return "sample";
  }
  throw std::logic_error("to_string: unknown spectrum mode");
}

inline SpectrumMode spectrum_mode_from_string(const std::string& s) {
  if (s == "exhaustive") return SpectrumMode::exhaustive;
  if (s == "case-split" || s == "case_split") return SpectrumMode::case_split;
  if (s == "sample") return SpectrumMode::sample;
  throw std::invalid_argument("unknown spectrum mode: " + s);
}

struct SpectrumWitness {
  std::uint64_t index = 0;           // earliest candidate index with this degree
  std::vector<LabelSet> supports;    // the candidate itself
};

struct SpectrumReport {
  int n = 0;
  SpectrumMode mode = SpectrumMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t instances_checked = 0;
  std::map<BigInt, SpectrumWitness> witnesses;  // degree -> earliest witness

  std::vector<BigInt> degrees() const {
    std::vector<BigInt> out;
    out.reserve(witnesses.size());
    for (const auto& [deg, w] : witnesses) out.push_back(deg);
    return out;
  }

  BigInt max_degree() const {
    if (witnesses.empty()) throw std::logic_error("max_degree: empty report");
    return witnesses.rbegin()->first;
  }
};

namespace detail {

inline BigInt binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return BigInt(0);
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(m),
               static_cast<unsigned long>(k));
  return out;
}

inline std::uint64_t to_u64(const BigInt& v, const char* what) {
  if (sgn(v) < 0 || !v.fits_ulong_p())
    throw std::overflow_error(std::string(what) + ": value does not fit in 64 bits");
  return static_cast<std::uint64_t>(v.get_ui());
}

// All four-element subsets of {1,...,n}, lexicographically ordered.
inline std::vector<LabelSet> all_supports(int n) {
  std::vector<LabelSet> out;
  for (int a = 1; a <= n - 3; ++a)
    for (int b = a + 1; b <= n - 2; ++b)
      for (int c = b + 1; c <= n - 1; ++c)
        for (int d = c + 1; d <= n; ++d) out.push_back({a, b, c, d});
  return out;
}

// The rank-th k-subset of {0,...,m-1} in lexicographic order.
inline std::vector<std::size_t> unrank_combination(std::uint64_t m, std::uint64_t k,
                                                   std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::uint64_t x = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    while (true) {
      const BigInt block = binomial(m - 1 - x, k - 1 - i);
      if (block.fits_ulong_p() && rank >= static_cast<std::uint64_t>(block.get_ui())) {
        rank -= static_cast<std::uint64_t>(block.get_ui());
        ++x;
      } else {
        break;
      }
    }
    out.push_back(static_cast<std::size_t>(x));
    ++x;
  }
  return out;
}

// Exactly uniform draw from {0,...,bound-1} (rejection on the 2^64 tail),
// identical across platforms for a fixed generator state.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  std::uint64_t v;
  do {
    v = rng();
  } while (v < threshold);
  return v % bound;
}

inline const LabelSet& first_support() {
  static const LabelSet s{1, 2, 3, 4};
  return s;
}

// The four overlap shapes of the second support relative to {1,2,3,4}.
inline std::array<LabelSet, 4> case_supports(int n) {
  return {LabelSet{1, 2, 3, n}, LabelSet{1, 2, n - 1, n}, LabelSet{1, n - 2, n - 1, n},
          LabelSet{n - 3, n - 2, n - 1, n}};
}

// Draw `count` distinct supports from pool, avoiding `taken`, in place.
inline void draw_supports(std::mt19937_64& rng, const std::vector<LabelSet>& pool,
                          std::size_t count, std::vector<LabelSet>& taken) {
  for (std::size_t i = 0; i < count; ++i) {
    while (true) {
      const auto& pick = pool[static_cast<std::size_t>(
          uniform_below(rng, static_cast<std::uint64_t>(pool.size())))];
      if (std::find(taken.begin(), taken.end(), pick) == taken.end()) {
        taken.push_back(pick);
        break;
      }
    }
  }
}

}  // namespace detail

// Total number of candidate indices for a run. For the exhaustive mode this
// is the full candidate count (budget is ignored); for the sampled modes it
// is the budget itself.
inline BigInt spectrum_total(int n, SpectrumMode mode, std::uint64_t budget) {
  if (mode == SpectrumMode::exhaustive) {
    const std::uint64_t pool = static_cast<std::uint64_t>(
        detail::to_u64(detail::binomial(static_cast<std::uint64_t>(n), 4), "pool") - 1);
    return detail::binomial(pool, static_cast<std::uint64_t>(n - 4));
  }
  return BigInt(static_cast<unsigned long>(budget));
}

// The candidate at a given index: a sorted set of n-3 distinct supports.
// Pure in (n, mode, seed, index).
inline std::vector<LabelSet> candidate_supports(int n, SpectrumMode mode,
                                                std::uint64_t seed, std::uint64_t index) {
  if (n < 5) throw std::invalid_argument("candidate_supports: n must be >= 5");
  std::vector<LabelSet> out;
  switch (mode) {
    case SpectrumMode::exhaustive: {
      std::vector<LabelSet> pool = detail::all_supports(n);
      pool.erase(std::find(pool.begin(), pool.end(), detail::first_support()));
      out.push_back(detail::first_support());
      for (std::size_t p : detail::unrank_combination(
               static_cast<std::uint64_t>(pool.size()),
               static_cast<std::uint64_t>(n - 4), index))
        out.push_back(pool[p]);
      break;
    }
    case SpectrumMode::case_split: {
      out.push_back(detail::first_support());
      out.push_back(detail::case_supports(n)[static_cast<std::size_t>(index % 4)]);
      std::mt19937_64 rng(detail::mix_seed(seed, index));
      detail::draw_supports(rng, detail::all_supports(n),
                            static_cast<std::size_t>(n - 5), out);
      break;
    }
    case SpectrumMode::sample: {
      std::mt19937_64 rng(detail::mix_seed(seed, index));
      detail::draw_supports(rng, detail::all_supports(n),
                            static_cast<std::size_t>(n - 3), out);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Conditions for a candidate: canonical pairing (a,b | c,d) per support.
// The length is a placeholder; degree evaluation draws generic lengths.
inline CrossRatioSet canonical_conditions(int n, const std::vector<LabelSet>& supports) {
  std::vector<CrossRatio> items;
  items.reserve(supports.size());
  for (const auto& s : supports) {
    if (s.size() != 4) throw std::invalid_argument("canonical_conditions: support size != 4");
    items.emplace_back(s[0], s[1], s[2], s[3], Rational(1));
  }
  return CrossRatioSet(n, std::move(items));
}

// Degree of one candidate, evaluated with deterministic generic lengths.
inline BigInt candidate_degree(int n, const std::vector<LabelSet>& supports,
                               std::uint64_t seed) {
  return compute_degree_generic(canonical_conditions(n, supports), seed, /*jobs=*/1).degree;
}

namespace detail {

struct ChunkRecord {
  std::uint64_t lo = 0, hi = 0;                 // [lo, hi)
  std::map<BigInt, std::uint64_t> witnesses;    // degree -> earliest index in chunk
};

inline nlohmann::json chunk_record_to_json(const ChunkRecord& rec) {
  nlohmann::json wit = nlohmann::json::object();
  nlohmann::json degs = nlohmann::json::array();
  for (const auto& [deg, idx] : rec.witnesses) {
    degs.push_back(deg.get_str());
    wit[deg.get_str()] = idx;
  }
  return nlohmann::json{
      {"index_range", {rec.lo, rec.hi}}, {"degrees_found", degs}, {"witnesses", wit}};
}

inline ChunkRecord chunk_record_from_json(const nlohmann::json& j) {
  ChunkRecord rec;
  rec.lo = j.at("index_range").at(0).get<std::uint64_t>();
  rec.hi = j.at("index_range").at(1).get<std::uint64_t>();
  for (const auto& [key, val] : j.at("witnesses").items())
    rec.witnesses[BigInt(key)] = val.get<std::uint64_t>();
  return rec;
}

struct CheckpointState {
  std::vector<ChunkRecord> records;
  bool had_header = false;
};

// Read a checkpoint file. The header must match the current run; a missing
// or empty file yields an empty state.
inline CheckpointState read_checkpoint(const std::string& path, int n, SpectrumMode mode,
                                       std::uint64_t seed, const BigInt& total) {
  CheckpointState st;
  std::ifstream in(path);
  if (!in) return st;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    if (!st.had_header) {
      if (j.value("kind", "") != "spectrum-checkpoint" ||
          j.at("n").get<int>() != n ||
          j.at("mode").get<std::string>() != to_string(mode) ||
          j.at("seed").get<std::uint64_t>() != seed ||
          j.at("total").get<std::string>() != total.get_str())
        throw std::invalid_argument(
            "checkpoint file belongs to a different run (n/mode/seed/total mismatch): " +
            path);
      st.had_header = true;
      continue;
    }
    st.records.push_back(chunk_record_from_json(j));
  }
  return st;
}

}  // namespace detail

// Explore the degree spectrum for n markings. Deterministic in
// (n, mode, budget, seed) for every jobs setting. The checkpoint path, when
// given, is appended to as chunks finish and consulted on rerun to resume.
// Exhaustive runs for n > 7 are refused with a cost estimate unless forced.
inline SpectrumReport spectrum(int n, SpectrumMode mode, std::uint64_t budget,
                               std::uint64_t seed, int jobs = 0,
                               const std::string& checkpoint_path = {},
                               bool force = false) {
  if (n < 5) throw std::invalid_argument("spectrum: n must be >= 5");
  if (n > 10)
    throw std::invalid_argument("spectrum: n > 10 is beyond the exact engine's range");
  if (mode != SpectrumMode::exhaustive && budget == 0)
    throw std::invalid_argument("spectrum: sampled modes need a positive budget");

  const BigInt total_big = spectrum_total(n, mode, budget);
  if (mode == SpectrumMode::exhaustive && n > 7 && !force)
    throw std::invalid_argument(
        "spectrum: exhaustive enumeration at n = " + std::to_string(n) + " means " +
        total_big.get_str() +
        " degree evaluations; rerun with force to proceed");
  const std::uint64_t total = detail::to_u64(total_big, "spectrum total");

  // Resume: merge previously recorded chunks, then skip fully covered ranges.
  std::map<BigInt, std::uint64_t> merged;  // degree -> earliest index
  auto absorb = [&merged](const std::map<BigInt, std::uint64_t>& found) {
    for (const auto& [deg, idx] : found) {
      auto it = merged.find(deg);
      if (it == merged.end() || idx < it->second) merged[deg] = idx;
    }
  };

  std::vector<std::pair<std::uint64_t, std::uint64_t>> covered;
  std::ofstream ckpt;
  std::mutex ckpt_mu;
  if (!checkpoint_path.empty()) {
    const auto st = detail::read_checkpoint(checkpoint_path, n, mode, seed, total_big);
    for (const auto& rec : st.records) {
      covered.emplace_back(rec.lo, rec.hi);
      absorb(rec.witnesses);
    }
    ckpt.open(checkpoint_path, std::ios::app);
    if (!ckpt) throw std::runtime_error("spectrum: cannot open checkpoint file: " +
                                        checkpoint_path);
    if (!st.had_header) {
      ckpt << nlohmann::json{{"kind", "spectrum-checkpoint"},
                             {"n", n},
                             {"mode", to_string(mode)},
                             {"seed", seed},
                             {"total", total_big.get_str()}}
                  .dump()
           << std::endl;
    }
  }
  std::sort(covered.begin(), covered.end());
  auto is_covered = [&covered](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t at = lo;
    for (const auto& [clo, chi] : covered) {
      if (chi <= at) continue;
      if (clo > at) break;
      at = chi;
      if (at >= hi) return true;
    }
    return at >= hi;
  };

  constexpr std::uint64_t kChunk = 64;
  const std::uint64_t chunks = total == 0 ? 0 : (total + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> todo;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min(lo + kChunk, total);
    if (!is_covered(lo, hi)) todo.push_back(c);
  }

  const bool have_ckpt = ckpt.is_open();
  const auto results = parallel_chunk_map<detail::ChunkRecord>(
      todo.size(), jobs, 1, [&](std::size_t t, std::size_t) {
        detail::ChunkRecord rec;
        rec.lo = todo[t] * kChunk;
        rec.hi = std::min(rec.lo + kChunk, total);
        for (std::uint64_t i = rec.lo; i < rec.hi; ++i) {
          const auto supports = candidate_supports(n, mode, seed, i);
          const BigInt deg =
              candidate_degree(n, supports, detail::mix_seed(seed, ~i));
          rec.witnesses.emplace(deg, i);  // keeps the first (smallest) index
        }
        if (have_ckpt) {
          std::lock_guard<std::mutex> lock(ckpt_mu);
          ckpt << detail::chunk_record_to_json(rec).dump() << std::endl;
        }
        return rec;
      });
  for (const auto& rec : results) absorb(rec.witnesses);

  SpectrumReport report;
  report.n = n;
  report.mode = mode;
  report.seed = seed;
  report.instances_checked = total;
  for (const auto& [deg, idx] : merged)
    report.witnesses[deg] =
        SpectrumWitness{idx, candidate_supports(n, mode, seed, idx)};
  return report;
}

// Recompute a witness's degree from scratch with a caller-chosen seed;
// used to confirm that reported witnesses are length-independent.
inline BigInt verify_witness(int n, const std::vector<LabelSet>& supports,
                             std::uint64_t fresh_seed) {
  return candidate_degree(n, supports, fresh_seed);
}

}  // namespace tropcross
