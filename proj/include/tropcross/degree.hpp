#pragma once

// The exact counting engine. Given n-3 cross-ratio conditions with generic
// positive lengths, it sweeps every trivalent combinatorial type on n
// markings, keeps the types whose contribution matrix is invertible and
// whose unique edge-length solution is strictly positive, and sums |det| of
// the contribution matrices. The sweep runs over a cached flat pool of
// bitmask split systems; per-type linear algebra uses the checked 64-bit
// Bareiss kernel with an arbitrary-precision fallback, so every number is
// exact. A solution with a zero edge length means the input lengths are not
// generic: the sweep aborts with NonGenericError and the caller may resample.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crossratio.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace tropcross {

struct NonGenericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenericityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreimageCurve {
  MarkedTree tree;  // metric, trivalent
  BigInt multiplicity;
};

struct DegreeResult {
  BigInt degree;
  std::vector<Rational> lengths_used;  // lambda per condition, input order
  std::vector<PreimageCurve> curves;   // canonical key order
};

namespace detail {

// mask_lex_less: order bitmask label sets like their ascending label lists.
// The set owning the lowest differing bit has the smaller first difference.
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t d = a ^ b;
  if (d == 0) return false;
  return (a & (d & (~d + 1))) != 0;
}

// Flat pool of all trivalent split systems on markings 1..n.
// Tree t occupies masks[t*stride .. t*stride+stride); bit i <-> label i+1.
// Trees and the masks inside each tree are in canonical (label-list
// lexicographic) order.
struct TrivalentPool {
  int n = 0;
  std::size_t stride = 0;  // n - 3
  std::vector<std::uint32_t> masks;
  std::size_t count() const { return stride == 0 ? 1 : masks.size() / stride; }
  const std::uint32_t* tree(std::size_t t) const { return masks.data() + t * stride; }
};

inline std::shared_ptr<const TrivalentPool> build_pool(int n) {
  auto pool = std::make_shared<TrivalentPool>();
  pool->n = n;
  pool->stride = static_cast<std::size_t>(n - 3);

  std::vector<std::uint32_t> cur;  // stride k-3 per tree; empty for k == 3
  std::size_t cur_count = 1;
  for (int k = 3; k < n; ++k) {
    const std::size_t st = static_cast<std::size_t>(k - 3);
    const std::uint32_t x = 1u << k;  // bit of the new label k+1
    const std::uint32_t below = (1u << k) - 1u;
    std::vector<std::uint32_t> nxt;
    nxt.reserve(cur_count * static_cast<std::size_t>(2 * k - 3) * (st + 1));
    for (std::size_t t = 0; t < cur_count; ++t) {
      const std::uint32_t* p = cur.data() + t * st;
      // Split a leaf edge: new cherry {leaf, x}; x joins parts containing leaf.
      for (int li = 0; li < k; ++li) {
        const std::uint32_t leaf = 1u << li;
        for (std::size_t j = 0; j < st; ++j)
          nxt.push_back((p[j] & leaf) ? (p[j] | x) : p[j]);
        nxt.push_back(li == 0 ? (below & ~1u) : (leaf | x));
      }
      // Split a bounded edge e: e doubles into e and e|x; a part absorbs x
      // iff it contains e's part.
      for (std::size_t ei = 0; ei < st; ++ei) {
        for (std::size_t j = 0; j < st; ++j) {
          if (j == ei) continue;
          nxt.push_back(((p[ei] & ~p[j]) == 0) ? (p[j] | x) : p[j]);
        }
        nxt.push_back(p[ei]);
        nxt.push_back(p[ei] | x);
      }
    }
    cur_count = cur_count * static_cast<std::size_t>(2 * k - 3);
    cur = std::move(nxt);
  }

  const std::size_t stride = pool->stride;
  if (stride > 0) {
    // Canonical order inside each tree, then canonical order across trees.
    for (std::size_t t = 0; t < cur_count; ++t) {
      auto* lo = cur.data() + t * stride;
      std::sort(lo, lo + stride, mask_lex_less);
    }
    std::vector<std::uint32_t> order(cur_count);
    for (std::size_t t = 0; t < cur_count; ++t) order[t] = static_cast<std::uint32_t>(t);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const std::uint32_t* pa = cur.data() + a * stride;
      const std::uint32_t* pb = cur.data() + b * stride;
      for (std::size_t j = 0; j < stride; ++j) {
        if (pa[j] != pb[j]) return mask_lex_less(pa[j], pb[j]);
      }
      return false;
    });
    pool->masks.resize(cur.size());
    for (std::size_t t = 0; t < cur_count; ++t)
      std::copy(cur.data() + order[t] * stride, cur.data() + (order[t] + 1) * stride,
                pool->masks.data() + t * stride);
  }
  return pool;
}

inline std::shared_ptr<const TrivalentPool> get_pool(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const TrivalentPool>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto pool = build_pool(n);
  cache.emplace(n, pool);
  return pool;
}

inline LabelSet mask_to_labels(std::uint32_t m) {
  LabelSet out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i + 1);
  return out;
}

struct PairMasks {
  std::uint32_t first = 0, second = 0;
};

inline PairMasks pair_masks(const CrossRatio& cr) {
  PairMasks pm;
  pm.first = (1u << (cr.first_pair()[0] - 1)) | (1u << (cr.first_pair()[1] - 1));
  pm.second = (1u << (cr.second_pair()[0] - 1)) | (1u << (cr.second_pair()[1] - 1));
  return pm;
}

inline bool mask_contributes(std::uint32_t part, const PairMasks& pm) {
  return ((part & pm.first) == pm.first && (part & pm.second) == 0) ||
         ((part & pm.second) == pm.second && (part & pm.first) == 0);
}

// splitmix64 step; used to derive independent deterministic substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream));
}

// Exact per-tree solve outcome for one candidate tree.
enum class TreeFate { dead, non_generic, curve };

struct TreeSolve {
  TreeFate fate = TreeFate::dead;
  std::int64_t det_i64 = 0;        // valid when big_dets empty
  std::vector<std::int64_t> cramer_i64;
  BigInt det_big;                  // used when the 64-bit path overflowed
  std::vector<BigInt> cramer_big;
  bool big = false;
};

// Solve the contribution system for one tree. rows[i] is the bitmask of
// contributing edges of condition i (bit j <-> edge j). rhs is the integer
// right-hand side (lengths scaled by their common denominator).
inline TreeSolve solve_tree(const std::uint32_t* rows, std::size_t m,
                            const std::vector<std::int64_t>* rhs_i64,
                            const std::vector<BigInt>& rhs_big) {
  TreeSolve out;
  if (m == 0) {  // no conditions: the unique tree counts with multiplicity 1
    out.fate = TreeFate::curve;
    out.det_i64 = 1;
    return out;
  }
  auto run_big = [&]() {
    std::vector<BigInt> a(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a[i * m + j] = (rows[i] >> j) & 1u;
    BigInt det = bareiss_det_big(a, m);
    if (sgn(det) == 0) { out.fate = TreeFate::dead; return; }
    out.big = true;
    out.det_big = det;
    out.cramer_big.resize(m);
    std::vector<BigInt> scratch(m * m);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < m; ++c)
          scratch[i * m + c] = (c == j) ? rhs_big[i] : BigInt((rows[i] >> c) & 1u);
      BigInt dj = bareiss_det_big(scratch, m);
      if (sgn(dj) == 0) { out.fate = TreeFate::non_generic; return; }
      if ((sgn(dj) > 0) != (sgn(det) > 0)) { out.fate = TreeFate::dead; return; }
      out.cramer_big[j] = dj;
    }
    out.fate = TreeFate::curve;
  };

  if (rhs_i64 == nullptr) { run_big(); return out; }

  std::vector<std::int64_t> a(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = (rows[i] >> j) & 1u;
  auto det = bareiss_det_i64(a, m);
  if (!det) { run_big(); return out; }
  if (*det == 0) { out.fate = TreeFate::dead; return out; }
  out.det_i64 = *det;
  out.cramer_i64.resize(m);
  std::vector<std::int64_t> scratch(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < m; ++c)
        scratch[i * m + c] =
            (c == j) ? (*rhs_i64)[i] : static_cast<std::int64_t>((rows[i] >> c) & 1u);
    auto dj = bareiss_det_i64(scratch, m);
    if (!dj) { run_big(); return out; }
    if (*dj == 0) { out.fate = TreeFate::non_generic; return out; }
    if ((*dj > 0) != (*det > 0)) { out.fate = TreeFate::dead; return out; }
    out.cramer_i64[j] = *dj;
  }
  out.fate = TreeFate::curve;
  return out;
}

struct ScaledRhs {
  BigInt lcm;
  std::vector<BigInt> big;
  std::optional<std::vector<std::int64_t>> small;
};

inline ScaledRhs scale_rhs(const std::vector<CrossRatio>& crs) {
  ScaledRhs r;
  r.lcm = 1;
  for (const auto& cr : crs)
    mpz_lcm(r.lcm.get_mpz_t(), r.lcm.get_mpz_t(), cr.length().den().get_mpz_t());
  r.big.reserve(crs.size());
  for (const auto& cr : crs)
    r.big.push_back(cr.length().num() * (r.lcm / cr.length().den()));
  std::vector<std::int64_t> small;
  small.reserve(crs.size());
  for (const auto& b : r.big) {
    if (!b.fits_slong_p()) return r;
    small.push_back(b.get_si());
  }
  r.small = std::move(small);
  return r;
}

}  // namespace detail

// Deterministic generic lengths: one positive rational per marking set, with
// numerators drawn uniformly from [1, 2^32] (the reduction of the raw 64-bit
// generator output modulo 2^32 is exactly uniform), denominator 1, all values
// distinct. Identical across platforms for a fixed seed.
inline std::vector<Rational> generic_lengths(const std::vector<LabelSet>& marking_sets,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> out;
  std::vector<std::uint64_t> used;
  out.reserve(marking_sets.size());
  while (out.size() < marking_sets.size()) {
    const std::uint64_t v = (rng() & 0xFFFFFFFFull) + 1;
    if (std::find(used.begin(), used.end(), v) != used.end()) continue;
    used.push_back(v);
    out.emplace_back(BigInt(static_cast<unsigned long>(v)), BigInt(1));
  }
  return out;
}

inline DegreeResult compute_degree(const CrossRatioSet& crs, int jobs = 0) {
  const int n = crs.n;
  if (n > 10)
    throw std::invalid_argument(
        "compute_degree: n > 10 needs " + std::to_string(n) +
        "-marking sweeps over more than 2 million types per evaluation; refusing");
  if (crs.items.size() != static_cast<std::size_t>(n - 3))
    throw std::invalid_argument("compute_degree: need exactly n-3 conditions");
  for (const auto& cr : crs.items)
    if (cr.length().sign() <= 0)
      throw std::invalid_argument("compute_degree: condition lengths must be positive");

  const auto pool = detail::get_pool(n);
  const std::size_t m = pool->stride;
  std::vector<detail::PairMasks> pm;
  pm.reserve(crs.items.size());
  for (const auto& cr : crs.items) pm.push_back(detail::pair_masks(cr));
  const detail::ScaledRhs rhs = detail::scale_rhs(crs.items);

  struct Chunk {
    BigInt degree = 0;
    bool non_generic = false;
    std::vector<std::pair<std::size_t, detail::TreeSolve>> curves;
  };

  auto chunks = parallel_chunk_map<Chunk>(
      pool->count(), jobs, 8192, [&](std::size_t lo, std::size_t hi) {
        Chunk out;
        std::vector<std::uint32_t> rows(m);
        for (std::size_t t = lo; t < hi; ++t) {
          const std::uint32_t* parts = pool->tree(t);
          bool dead = false;
          for (std::size_t i = 0; i < m; ++i) {
            std::uint32_t r = 0;
            for (std::size_t j = 0; j < m; ++j)
              r |= detail::mask_contributes(parts[j], pm[i]) ? (1u << j) : 0u;
            if (r == 0) { dead = true; break; }
            rows[i] = r;
          }
          if (dead) continue;
          auto solve = detail::solve_tree(
              rows.data(), m, rhs.small ? &*rhs.small : nullptr, rhs.big);
          switch (solve.fate) {
            case detail::TreeFate::dead: break;
            case detail::TreeFate::non_generic:
              out.non_generic = true;
              return out;
            case detail::TreeFate::curve: {
              if (solve.big) {
                BigInt d = solve.det_big;
                out.degree += sgn(d) < 0 ? BigInt(-d) : d;
              } else {
                out.degree += solve.det_i64 < 0 ? -solve.det_i64 : solve.det_i64;
              }
              out.curves.emplace_back(t, std::move(solve));
              break;
            }
          }
        }
        return out;
      });

  DegreeResult result;
  result.degree = 0;
  for (const auto& cr : crs.items) result.lengths_used.push_back(cr.length());
  for (auto& c : chunks) {
    if (c.non_generic)
      throw NonGenericError("compute_degree: a solved edge length is zero");
    result.degree += c.degree;
    for (auto& [t, solve] : c.curves) {
      const std::uint32_t* parts = pool->tree(t);
      std::vector<Split> splits;
      std::vector<Rational> lengths;
      splits.reserve(m);
      lengths.reserve(m);
      BigInt det = solve.big ? solve.det_big : BigInt(solve.det_i64);
      BigInt scale = det * rhs.lcm;
      for (std::size_t j = 0; j < m; ++j) {
        splits.push_back(Split{detail::mask_to_labels(parts[j])});
        BigInt dj = solve.big ? solve.cramer_big[j] : BigInt(solve.cramer_i64[j]);
        lengths.emplace_back(dj, scale);
      }
      BigInt mult = solve.big ? solve.det_big : BigInt(solve.det_i64);
      if (sgn(mult) < 0) mult = -mult;
      result.curves.push_back(PreimageCurve{
          MarkedTree(crs.ambient_labels(), std::move(splits), std::move(lengths)),
          std::move(mult)});
    }
  }
  std::sort(result.curves.begin(), result.curves.end(),
            [](const PreimageCurve& a, const PreimageCurve& b) { return a.tree < b.tree; });
  return result;
}

// Retry loop: draw fresh generic lengths (deterministically derived from
// seed and the attempt number) until the sweep sees no zero edge length.
inline DegreeResult compute_degree_generic(const CrossRatioSet& pairings,
                                           std::uint64_t seed, int jobs = 0,
                                           int max_attempts = 64) {
  std::vector<LabelSet> sets;
  sets.reserve(pairings.items.size());
  for (const auto& cr : pairings.items) sets.push_back(cr.marking_set());
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    auto lengths = generic_lengths(sets, detail::mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<CrossRatio> items;
    items.reserve(pairings.items.size());
    for (std::size_t i = 0; i < pairings.items.size(); ++i)
      items.push_back(pairings.items[i].with_length(lengths[i]));
    try {
      return compute_degree(CrossRatioSet(pairings.n, std::move(items)), jobs);
    } catch (const NonGenericError&) {
      continue;
    }
  }
  throw GenericityFailure("compute_degree_generic: " + std::to_string(max_attempts) +
                          " consecutive non-generic draws");
}

// The anchored partition {i1,i2,i3} | X | Y of the markings, when one
// exists, such that every condition lives entirely on {i1,i2,i3} u X or
// entirely on {i1,i2,i3} u Y. Sub-conditions are relabeled order-preservingly
// onto 1..(3+|X|) and 1..(3+|Y|); map_x/map_y send new labels to old ones.
struct PartitionSplit {
  std::array<Label, 3> anchor;
  LabelSet x, y;
  CrossRatioSet crs_x, crs_y;
  LabelSet map_x, map_y;  // map_x[new_label - 1] == old_label
};

inline std::optional<PartitionSplit> partition_split(const CrossRatioSet& crs) {
  const LabelSet all = crs.ambient_labels();
  const std::size_t n = all.size();
  std::vector<Label> triple(3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        triple = {all[a], all[b], all[c]};
        // Union-find over the markings outside the anchor triple: conditions
        // tie their non-anchor markings together.
        std::map<Label, Label> parent;
        for (Label l : all)
          if (!std::binary_search(triple.begin(), triple.end(), l)) parent[l] = l;
        std::function<Label(Label)> find = [&](Label v) {
          while (parent[v] != v) v = parent[v] = parent[parent[v]];
          return v;
        };
        bool ok = true;
        for (const auto& cr : crs.items) {
          LabelSet rest = detail::set_minus(cr.marking_set(), triple);
          if (rest.empty()) { ok = false; break; }  // cannot happen: |marking_set| == 4
          for (std::size_t i = 1; i < rest.size(); ++i)
            parent[find(rest[0])] = find(rest[i]);
        }
        if (!ok) continue;
        // X: the component of the smallest non-anchor marking; Y: the rest.
        LabelSet xs, ys;
        Label x_root = 0;
        for (auto& [l, p] : parent) {
          (void)p;
          if (x_root == 0) x_root = find(l);
          (find(l) == x_root ? xs : ys).push_back(l);
        }
        if (xs.empty() || ys.empty()) continue;

        auto attach = [&](const LabelSet& side) {
          LabelSet full = side;
          full.insert(full.end(), triple.begin(), triple.end());
          std::sort(full.begin(), full.end());
          return full;
        };
        LabelSet full_x = attach(xs), full_y = attach(ys);
        auto relabel = [](const CrossRatio& cr, const LabelSet& full) {
          std::array<Label, 4> nl{};
          std::array<Label, 4> old{cr.first_pair()[0], cr.first_pair()[1],
                                   cr.second_pair()[0], cr.second_pair()[1]};
          for (int i = 0; i < 4; ++i) {
            auto it = std::lower_bound(full.begin(), full.end(), old[i]);
            nl[i] = static_cast<Label>(it - full.begin()) + 1;
          }
          return CrossRatio(nl[0], nl[1], nl[2], nl[3], cr.length());
        };
        std::vector<CrossRatio> cx, cy;
        for (const auto& cr : crs.items) {
          if (detail::subset_of(cr.marking_set(), full_x))
            cx.push_back(relabel(cr, full_x));
          else
            cy.push_back(relabel(cr, full_y));
        }
        PartitionSplit out{
            {triple[0], triple[1], triple[2]},
            xs,
            ys,
            CrossRatioSet(static_cast<int>(full_x.size()), std::move(cx)),
            CrossRatioSet(static_cast<int>(full_y.size()), std::move(cy)),
            full_x,
            full_y};
        return out;
      }
  return std::nullopt;
}

// Degree via the product rule: an anchored partition with |crs_x| != |X|
// forces degree 0; otherwise the degree is the product of the sub-degrees.
inline BigInt degree_via_product(const CrossRatioSet& crs, int jobs = 0) {
  auto split = partition_split(crs);
  if (!split)
    throw std::invalid_argument("degree_via_product: conditions admit no anchored partition");
  if (split->crs_x.items.size() != split->x.size()) return BigInt(0);
  return compute_degree(split->crs_x, jobs).degree *
         compute_degree(split->crs_y, jobs).degree;
}

}  // namespace tropcross
