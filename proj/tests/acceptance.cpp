// Acceptance checks for the claimed behavior, one PASS/FAIL line each.
//
//   1  enumeration counts (double factorial, Catalan)
//   2  the three frozen hexagon multiplicity matrices
//   3  hexagon curve counts for all three readings and length orderings
//   4  octagon dual reading: 4 curves of multiplicity 1
//   5  structure-theorem sweep over every triangulation, n = 4..9
//   6  degree invariance under length draws and pairing reassignment
//   7  product formula and glue multiplicativity on decomposable sets
//   8  exhaustive degree spectra for n = 5, 6, 7
//   9  seeded nine-marking witness search covering degrees 0..6
//  10  inverted-curve families on all no-outer triangulations, n <= 8
//
// Exit code 0 iff every criterion passes. --only <k> runs one criterion;
// --jobs <k> bounds parallelism (default 8).

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tropcross/constructions.hpp"
#include "tropcross/crossratio.hpp"
#include "tropcross/degree.hpp"
#include "tropcross/matrix.hpp"
#include "tropcross/search.hpp"
#include "tropcross/tree.hpp"
#include "tropcross/triangulation.hpp"

namespace {

using namespace tropcross;
using Clock = std::chrono::steady_clock;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

LabelSet iota_labels(int n) {
  LabelSet out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1;
  return out;
}

std::vector<Rational> rationals(std::initializer_list<long> vals) {
  std::vector<Rational> out;
  for (long v : vals) out.emplace_back(v);
  return out;
}

// Run fn on deterministic generic length draws until one draw is generic
// for everything fn computes (at most 64 attempts).
template <typename Fn>
void with_generic(const std::vector<LabelSet>& sets, std::uint64_t seed, Fn&& fn) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      fn(generic_lengths(sets, detail::mix_seed(seed, attempt)));
      return;
    } catch (const NonGenericError&) {
    }
  }
  throw Failure("64 consecutive non-generic draws");
}

std::vector<LabelSet> diagonal_marking_sets(const Triangulation& tri) {
  std::vector<LabelSet> sets;
  for (const auto& d : tri.diagonals()) sets.push_back(diagonal_markings(tri.n(), d));
  return sets;
}

// ------------------------------------------------------------ criterion 1

void c1_counts(int, std::string& detail) {
  const auto t0 = Clock::now();
  const std::vector<std::size_t> tree_expect = {3, 15, 105, 945, 10395};
  for (int n = 4; n <= 8; ++n) {
    const auto got = enumerate_trivalent_trees(iota_labels(n)).size();
    require(got == tree_expect[static_cast<std::size_t>(n - 4)],
            "tree count at n=" + std::to_string(n) + " is " + std::to_string(got));
  }
  const std::vector<std::size_t> tri_expect = {2, 5, 14, 42, 132, 429};
  for (int n = 4; n <= 9; ++n) {
    const auto got = enumerate_triangulations(n).size();
    require(got == tri_expect[static_cast<std::size_t>(n - 4)],
            "triangulation count at n=" + std::to_string(n) + " is " + std::to_string(got));
  }
  const double dt = seconds_since(t0);
  require(dt < 5.0, "took " + std::to_string(dt) + " s (limit 5)");
  detail = "trees n=4..8, triangulations n=4..9";
}

// ------------------------------------------------------------ criterion 2

// a == P b Q for row/column permutations P, Q (3x3 only, brute force).
bool equal_up_to_permutation(const IntMatrix& a, const std::vector<std::vector<long>>& b) {
  if (a.rows() != 3 || a.cols() != 3 || b.size() != 3) return false;
  std::array<std::size_t, 3> pr{0, 1, 2};
  do {
    std::array<std::size_t, 3> pc{0, 1, 2};
    do {
      bool same = true;
      for (std::size_t i = 0; i < 3 && same; ++i)
        for (std::size_t j = 0; j < 3 && same; ++j)
          if (a.at(pr[i], pc[j]) != BigInt(b[i][j])) same = false;
      if (same) return true;
    } while (std::next_permutation(pc.begin(), pc.end()));
  } while (std::next_permutation(pr.begin(), pr.end()));
  return false;
}

std::vector<std::vector<long>> transpose3(const std::vector<std::vector<long>>& m) {
  std::vector<std::vector<long>> t(3, std::vector<long>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

// The printed matrices fix an implicit edge/condition order; accept any
// row/column permutation, and the transpose (the reference multiplicity-1
// matrix is written with rows and columns swapped relative to the stated
// rows-are-conditions convention; the determinant is unaffected).
bool matches_reference(const IntMatrix& a, const std::vector<std::vector<long>>& b) {
  return equal_up_to_permutation(a, b) || equal_up_to_permutation(a, transpose3(b));
}

void c2_matrices(int jobs, std::string& detail) {
  const Triangulation hex(6, {Diagonal(2, 4), Diagonal(2, 6), Diagonal(4, 6)});

  // Triangle inequalities hold: one curve, multiplicity 2.
  const auto eq = compute_degree(
      derive_crossratios(hex, Interp::neighboring, rationals({1, 1, 1})), jobs);
  require(eq.curves.size() == 1, "expected one curve under triangle inequalities");
  require(eq.curves[0].multiplicity == 2, "expected multiplicity 2");
  const auto m2 = multiplicity_matrix(
      eq.curves[0].tree,
      derive_crossratios(hex, Interp::neighboring, rationals({1, 1, 1})).items);
  require(matches_reference(m2, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}),
          "multiplicity-2 matrix does not match the reference");
  BigInt det2 = determinant(m2);
  require(det2 == 2 || det2 == -2, "multiplicity-2 matrix determinant is not +-2");

  // One length dominates (here the diagonal 2-6 condition): two curves of
  // multiplicity 1.
  const auto crs1 = derive_crossratios(hex, Interp::neighboring, rationals({1, 3, 1}));
  const auto uneq = compute_degree(crs1, jobs);
  require(uneq.curves.size() == 2, "expected two curves without triangle inequalities");
  for (const auto& curve : uneq.curves) {
    require(curve.multiplicity == 1, "expected multiplicity 1");
    const auto m1 = multiplicity_matrix(curve.tree, crs1.items);
    require(matches_reference(m1, {{1, 1, 0}, {1, 0, 1}, {1, 0, 0}}),
            "multiplicity-1 matrix does not match the reference");
    BigInt det1 = determinant(m1);
    require(det1 == 1 || det1 == -1, "multiplicity-1 matrix determinant is not +-1");
  }

  // The worked three-cherry example: ends {1,2},{3,4},{5,6} around a center,
  // edge lengths 1, 2, 3; conditions (l1+l2,(1,2|3,4)), (l2+l3,(3,4|5,6)),
  // (l2,(2,5|3,4)); multiplicity 1.
  const MarkedTree star(iota_labels(6),
                        {Split{{3, 4, 5, 6}}, Split{{3, 4}}, Split{{5, 6}}},
                        {Rational(1), Rational(2), Rational(3)});
  const std::vector<CrossRatio> worked = {CrossRatio(1, 2, 3, 4, Rational(3)),
                                          CrossRatio(3, 4, 5, 6, Rational(5)),
                                          CrossRatio(2, 5, 3, 4, Rational(2))};
  for (const auto& cr : worked)
    require(fulfills(star, cr), "worked-example curve misses a condition");
  require(multiplicity(star, worked) == 1, "worked-example multiplicity is not 1");
  require(matches_reference(multiplicity_matrix(star, worked),
                            {{1, 1, 0}, {0, 1, 1}, {0, 1, 0}}),
          "worked-example matrix does not match the reference");
  detail = "multiplicity 2 and 1 matrices + worked example, up to permutation";
}

// ------------------------------------------------------------ criterion 3

void expect_curves(const Triangulation& tri, Interp interp,
                   const std::vector<Rational>& lens, std::size_t count, long mult,
                   long degree, int jobs, const char* what) {
  const auto res = compute_degree(derive_crossratios(tri, interp, lens), jobs);
  require(res.degree == degree,
          std::string(what) + ": degree " + res.degree.get_str());
  require(res.curves.size() == count,
          std::string(what) + ": " + std::to_string(res.curves.size()) + " curves");
  for (const auto& c : res.curves)
    require(c.multiplicity == mult,
            std::string(what) + ": multiplicity " + c.multiplicity.get_str());
}

void c3_hexagon(int jobs, std::string& detail) {
  const auto t0 = Clock::now();
  const Triangulation hex(6, {Diagonal(2, 4), Diagonal(2, 6), Diagonal(4, 6)});

  // Neighboring, triangle inequalities hold: 1 curve of multiplicity 2.
  expect_curves(hex, Interp::neighboring, rationals({1, 1, 1}), 1, 2, 2, jobs, "nb 111");
  expect_curves(hex, Interp::neighboring, rationals({2, 3, 4}), 1, 2, 2, jobs, "nb 234");
  // One length dominates: 2 curves of multiplicity 1.
  expect_curves(hex, Interp::neighboring, rationals({5, 1, 2}), 2, 1, 2, jobs, "nb 512");
  expect_curves(hex, Interp::neighboring, rationals({1, 5, 2}), 2, 1, 2, jobs, "nb 152");
  expect_curves(hex, Interp::neighboring, rationals({1, 2, 5}), 2, 1, 2, jobs, "nb 125");
  // The boundary of the triangle inequalities is not generic.
  bool threw = false;
  try {
    compute_degree(derive_crossratios(hex, Interp::neighboring, rationals({3, 1, 2})), jobs);
  } catch (const NonGenericError&) {
    threw = true;
  }
  require(threw, "length-equality boundary should be non-generic");

  // Dual and intersecting: 2 curves of multiplicity 1 for every tested
  // generic length ordering.
  const std::vector<std::vector<long>> orders = {{2, 3, 5}, {2, 5, 3}, {3, 2, 5},
                                                 {3, 5, 2}, {5, 2, 3}, {5, 3, 2}};
  expect_curves(hex, Interp::dual, rationals({1, 1, 1}), 2, 1, 2, jobs, "dual 111");
  for (const auto& o : orders) {
    const auto lens = rationals({o[0], o[1], o[2]});
    expect_curves(hex, Interp::dual, lens, 2, 1, 2, jobs, "dual ordering");
    expect_curves(hex, Interp::intersecting, lens, 2, 1, 2, jobs, "intersecting ordering");
  }

  const double dt = seconds_since(t0);
  require(dt < 1.0, "took " + std::to_string(dt) + " s (limit 1)");
  detail = "neighboring 1x2 / 2x1 by triangle inequalities; dual+intersecting 2x1, degree 2";
}

// ------------------------------------------------------------ criterion 4

void c4_octagon(int jobs, std::string& detail) {
  const Triangulation oct8(8, {Diagonal(2, 8), Diagonal(2, 4), Diagonal(4, 6),
                               Diagonal(6, 8), Diagonal(4, 8)});
  expect_curves(oct8, Interp::dual, rationals({2, 3, 5, 7, 11}), 4, 1, 4, jobs,
                "octagon 2,3,5,7,11");
  with_generic(diagonal_marking_sets(oct8), 0xACCE5504, [&](const std::vector<Rational>& lens) {
    expect_curves(oct8, Interp::dual, lens, 4, 1, 4, jobs, "octagon generic");
  });
  detail = "4 curves of multiplicity 1, degree 4";
}

// ------------------------------------------------------------ criterion 5

void check_construction_case(const Triangulation& tri, const std::vector<Interp>& interps,
                             const std::vector<Rational>& lens, int jobs,
                             const std::string& what) {
  const auto built = preimage_by_construction(tri, interps, lens);
  const auto engine = compute_degree(derive_crossratios(tri, interps, lens), jobs);
  const BigInt two_d = BigInt(1) << built.d;
  require(engine.degree == two_d, what + ": engine degree != 2^d");
  require(built.degree == two_d, what + ": construction degree != 2^d");
  require(built.expected_count == BigInt(1) << (built.d - built.k),
          what + ": expected count != 2^(d-k)");
  require(engine.curves.size() == built.curves.size() &&
              BigInt(static_cast<long>(engine.curves.size())) == built.expected_count,
          what + ": curve count != 2^(d-k)");
  const BigInt two_k = BigInt(1) << built.k;
  for (std::size_t i = 0; i < engine.curves.size(); ++i) {
    require(engine.curves[i].multiplicity == two_k, what + ": multiplicity != 2^k");
    require(engine.curves[i].tree == built.curves[i].tree &&
                engine.curves[i].multiplicity == built.curves[i].multiplicity,
            what + ": curve multisets differ");
  }
}

void c5_sweep(int jobs, std::string& detail) {
  const auto t0 = Clock::now();
  std::size_t cases = 0;
  for (int n = 4; n <= 9; ++n) {
    const auto tris = enumerate_triangulations(n);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto& tri = tris[t];
      const auto sets = diagonal_marking_sets(tri);
      const std::string where = "n=" + std::to_string(n) + " #" + std::to_string(t);

      for (const Interp interp : {Interp::dual, Interp::neighboring, Interp::intersecting}) {
        const std::vector<Interp> interps(sets.size(), interp);
        for (int draw = 0; draw < 2; ++draw) {
          with_generic(sets, detail::mix_seed(0xACCE5505, cases),
                       [&](const std::vector<Rational>& lens) {
                         check_construction_case(tri, interps, lens, jobs, where);
                       });
          ++cases;
        }
      }

      if (n <= 8) {
        for (int rep = 0; rep < 20; ++rep) {
          std::mt19937_64 rng(detail::mix_seed(0xACCE5515, cases));
          std::vector<Interp> interps;
          for (std::size_t i = 0; i < sets.size(); ++i)
            interps.push_back(static_cast<Interp>(detail::uniform_below(rng, 3)));
          with_generic(sets, detail::mix_seed(0xACCE5525, cases),
                       [&](const std::vector<Rational>& lens) {
                         check_construction_case(tri, interps, lens, jobs,
                                                 where + " mixed");
                       });
          ++cases;
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  require(dt < 900.0, "took " + std::to_string(dt) + " s (limit 900)");
  std::ostringstream os;
  os << cases << " cases (uniform x2 draws; mixed x20 for n<=8)";
  detail = os.str();
}

// ------------------------------------------------------------ criterion 6

BigInt degree_with_pairings(int n, const std::vector<LabelSet>& supports,
                            const std::vector<int>& choice, std::uint64_t seed) {
  std::vector<CrossRatio> items;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const auto& s = supports[i];
    switch (choice[i] % 3) {
      case 0: items.emplace_back(s[0], s[1], s[2], s[3], Rational(1)); break;
      case 1: items.emplace_back(s[0], s[2], s[1], s[3], Rational(1)); break;
      default: items.emplace_back(s[0], s[3], s[1], s[2], Rational(1)); break;
    }
  }
  return compute_degree_generic(CrossRatioSet(n, std::move(items)), seed, 1).degree;
}

void c6_invariance(int, std::string& detail) {
  std::size_t comparisons = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const int n = 5 + static_cast<int>(i % 4);
    const std::size_t m = static_cast<std::size_t>(n - 3);
    const auto supports = candidate_supports(n, SpectrumMode::sample, 0xACCE5506, i);
    const std::vector<int> canonical(m, 0);
    const BigInt base = degree_with_pairings(n, supports, canonical,
                                             detail::mix_seed(0xACCE5516, i * 100));

    // Five fresh generic length draws.
    for (std::uint64_t d = 1; d <= 4; ++d) {
      require(degree_with_pairings(n, supports, canonical,
                                   detail::mix_seed(0xACCE5516, i * 100 + d)) == base,
              "instance " + std::to_string(i) + ": degree moved under a length draw");
      ++comparisons;
    }

    // Pairing reassignments: exhaustive for n <= 6, 20 samples for n = 7, 8.
    std::vector<std::vector<int>> choices;
    if (n <= 6) {
      std::size_t total = 1;
      for (std::size_t k = 0; k < m; ++k) total *= 3;
      for (std::size_t code = 1; code < total; ++code) {
        std::vector<int> c(m);
        std::size_t rest = code;
        for (std::size_t k = 0; k < m; ++k) {
          c[k] = static_cast<int>(rest % 3);
          rest /= 3;
        }
        choices.push_back(std::move(c));
      }
    } else {
      std::mt19937_64 rng(detail::mix_seed(0xACCE5526, i));
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<int> c(m);
        for (std::size_t k = 0; k < m; ++k)
          c[k] = static_cast<int>(detail::uniform_below(rng, 3));
        choices.push_back(std::move(c));
      }
    }
    for (std::size_t v = 0; v < choices.size(); ++v) {
      require(degree_with_pairings(n, supports, choices[v],
                                   detail::mix_seed(0xACCE5536, i * 1000 + v)) == base,
              "instance " + std::to_string(i) + ": degree moved under pairing choice");
      ++comparisons;
    }
  }
  detail = "50 instances, " + std::to_string(comparisons) + " comparisons";
}

// ------------------------------------------------------------ criterion 7

std::vector<LabelSet> four_subsets_of(const LabelSet& labels) {
  std::vector<LabelSet> out;
  const std::size_t m = labels.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d)
          out.push_back({labels[a], labels[b], labels[c], labels[d]});
  return out;
}

void c7_product(int jobs, std::string& detail) {
  std::mt19937_64 rng(0xACCE5507);
  int done = 0;
  int attempts = 0;
  int nonzero = 0;
  std::size_t curves_checked = 0;
  while (done < 50) {
    require(++attempts <= 2000, "too many non-generic attempts");
    const int n = 6 + static_cast<int>(detail::uniform_below(rng, 3));

    // A deliberately decomposable instance: anchor triple A, sides X and Y,
    // |X| conditions inside A+X and |Y| conditions inside A+Y.
    LabelSet pool = iota_labels(n);
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[detail::uniform_below(rng, i)]);
    LabelSet anchor(pool.begin(), pool.begin() + 3);
    std::sort(anchor.begin(), anchor.end());
    const std::size_t xs =
        1 + static_cast<std::size_t>(detail::uniform_below(
                rng, static_cast<std::uint64_t>(n - 4)));
    LabelSet side_x(pool.begin() + 3, pool.begin() + 3 + static_cast<long>(xs));
    LabelSet side_y(pool.begin() + 3 + static_cast<long>(xs), pool.end());
    auto with_anchor = [&anchor](LabelSet side) {
      side.insert(side.end(), anchor.begin(), anchor.end());
      std::sort(side.begin(), side.end());
      return side;
    };
    const LabelSet full_x = with_anchor(side_x), full_y = with_anchor(side_y);

    std::vector<LabelSet> supports;
    auto draw_side = [&](const LabelSet& full, std::size_t count) {
      const auto quartets = four_subsets_of(full);
      std::vector<LabelSet> got;
      while (got.size() < count) {
        const auto& pick =
            quartets[detail::uniform_below(rng, static_cast<std::uint64_t>(quartets.size()))];
        if (std::find(got.begin(), got.end(), pick) == got.end()) got.push_back(pick);
      }
      supports.insert(supports.end(), got.begin(), got.end());
    };
    draw_side(full_x, xs);
    draw_side(full_y, side_y.size());

    const auto lens = generic_lengths(supports, rng());
    std::vector<CrossRatio> items;
    for (std::size_t i = 0; i < supports.size(); ++i) {
      const auto& s = supports[i];
      items.emplace_back(s[0], s[1], s[2], s[3], lens[i]);
    }
    const CrossRatioSet crs(n, std::move(items));

    try {
      const auto full = compute_degree(crs, jobs);
      const auto split = partition_split(crs);
      require(split.has_value(), "constructed set admits no anchored partition");
      require(degree_via_product(crs, jobs) == full.degree,
              "product degree != engine degree");

      // The scan may settle on a different anchor than the one we drew; an
      // unbalanced partition certifies degree 0 (checked just above) but has
      // no sides to compute, so draw a fresh instance for the glue check.
      if (split->crs_x.items.size() != split->x.size()) continue;
      const auto xres = compute_degree(split->crs_x, jobs);
      const auto yres = compute_degree(split->crs_y, jobs);
      require(full.degree == xres.degree * yres.degree, "degree is not the product");

      // Glue multiplicativity, curve by curve: the restriction of each full
      // curve appears on each side and the multiplicities multiply.
      std::map<Label, Label> back_x, back_y;
      for (std::size_t i = 0; i < split->map_x.size(); ++i)
        back_x[static_cast<Label>(i) + 1] = split->map_x[i];
      for (std::size_t i = 0; i < split->map_y.size(); ++i)
        back_y[static_cast<Label>(i) + 1] = split->map_y[i];
      auto side_mult = [](const DegreeResult& res, const std::map<Label, Label>& back,
                          const MarkedTree& restricted) -> BigInt {
        for (const auto& c : res.curves)
          if (detail::relabel_tree(c.tree, back) == restricted) return c.multiplicity;
        throw Failure("restricted curve not found on its side");
      };
      for (const auto& curve : full.curves) {
        const BigInt mx =
            side_mult(xres, back_x, forgetful(curve.tree, split->map_x));
        const BigInt my =
            side_mult(yres, back_y, forgetful(curve.tree, split->map_y));
        require(curve.multiplicity == mx * my, "multiplicity is not the product");
        ++curves_checked;
      }
      if (full.degree > 0) ++nonzero;
      ++done;
    } catch (const NonGenericError&) {
      continue;  // redraw
    }
  }
  require(nonzero >= 10, "too few nonzero-degree instances to exercise the glue check");
  std::ostringstream os;
  os << "50 decomposable instances (" << attempts << " draws), " << nonzero
     << " with positive degree, " << curves_checked << " curves checked";
  detail = os.str();
}

// ------------------------------------------------------------ criterion 8

void c8_spectra(int jobs, std::string& detail) {
  const auto r5 = spectrum(5, SpectrumMode::exhaustive, 0, 0, jobs);
  require(r5.max_degree() == 1, "max degree at n=5 is " + r5.max_degree().get_str());

  const auto t6 = Clock::now();
  const auto r6 = spectrum(6, SpectrumMode::exhaustive, 0, 0, jobs);
  require(r6.max_degree() == 2, "max degree at n=6 is " + r6.max_degree().get_str());
  const double dt6 = seconds_since(t6);
  require(dt6 < 60.0, "n=6 took " + std::to_string(dt6) + " s (limit 60)");

  const auto t7 = Clock::now();
  const auto r7 = spectrum(7, SpectrumMode::exhaustive, 0, 0, jobs);
  require(r7.max_degree() == 2, "max degree at n=7 is " + r7.max_degree().get_str());
  const double dt7 = seconds_since(t7);
  require(dt7 < 1800.0, "n=7 took " + std::to_string(dt7) + " s (limit 1800)");

  std::ostringstream os;
  os << "max degrees 1, 2, 2 (" << r5.instances_checked << ", " << r6.instances_checked
     << ", " << r7.instances_checked << " candidates)";
  detail = os.str();
}

// ------------------------------------------------------------ criterion 9

void c9_witnesses(int jobs, std::string& detail) {
  // Documented budget: 2048 case-split candidates at seed 1 (every degree in
  // 0..6 appears by index 1401; the run takes seconds at n = 9).
  constexpr std::uint64_t kSeed = 1, kBudget = 2048;
  const auto rep = spectrum(9, SpectrumMode::case_split, kBudget, kSeed, jobs);
  for (long d = 0; d <= 6; ++d) {
    const auto it = rep.witnesses.find(BigInt(d));
    require(it != rep.witnesses.end(),
            "no witness for degree " + std::to_string(d) + " within the budget");
    require(verify_witness(9, it->second.supports, 0xFEEDFACE) == BigInt(d),
            "witness for degree " + std::to_string(d) + " does not re-verify");
  }
  std::ostringstream os;
  os << "degrees 0..6 witnessed and re-verified (case-split, seed " << kSeed
     << ", budget " << kBudget << ")";
  detail = os.str();
}

// ----------------------------------------------------------- criterion 10

void c10_inversions(int jobs, std::string& detail) {
  std::size_t families = 0;
  for (int n = 4; n <= 8; ++n) {
    for (const auto& tri : enumerate_triangulations(n)) {
      const auto triangles = classify_triangles(tri);
      bool no_outer = true;
      int d = 0;
      for (const auto& t : triangles) {
        if (t.kind == TriangleKind::outer) no_outer = false;
        if (t.kind == TriangleKind::inner) ++d;
      }
      if (!no_outer) continue;

      for (int draw = 0; draw < 2; ++draw) {
        with_generic(
            diagonal_marking_sets(tri), detail::mix_seed(0xACCE5510, families),
            [&](const std::vector<Rational>& lens) {
              const auto family = partially_inverted_curves(tri, lens);
              const auto engine =
                  compute_degree(derive_crossratios(tri, Interp::dual, lens), jobs);

              require(family.size() == (std::size_t{1} << d),
                      "family size is not 2^d");
              std::set<MarkedTree> trees;
              for (const auto& c : family) {
                require(c.multiplicity == 1, "family member multiplicity != 1");
                trees.insert(c.tree);
              }
              require(trees.size() == family.size(), "family members not distinct");
              require(engine.curves.size() == family.size(),
                      "family does not match the preimage size");
              for (std::size_t i = 0; i < family.size(); ++i)
                require(engine.curves[i].tree == family[i].tree &&
                            engine.curves[i].multiplicity == family[i].multiplicity,
                        "family differs from the brute-force preimage");

              require(trees.count(dual_curve(tri, lens)) == 1,
                      "the dual curve is not the all-dual member");
              require(trees.count(totally_inverted_curve(tri, lens)) == 1,
                      "the inverted curve is not the all-inverted member");
            });
        ++families;
      }
    }
  }
  detail = std::to_string(families) + " no-outer families (2 draws each), n <= 8";
}

// ----------------------------------------------------------------- runner

struct Criterion {
  int id;
  const char* name;
  std::function<void(int, std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int jobs = 8;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--jobs" && i + 1 < argc) {
      jobs = std::stoi(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--jobs k] [--only criterion]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "enumeration counts", c1_counts},
      {2, "reference multiplicity matrices", c2_matrices},
      {3, "hexagon curve counts", c3_hexagon},
      {4, "octagon dual curves", c4_octagon},
      {5, "structure-theorem sweep n=4..9", c5_sweep},
      {6, "degree invariance", c6_invariance},
      {7, "product formula and glue multiplicativity", c7_product},
      {8, "exhaustive spectra n=5,6,7", c8_spectra},
      {9, "nine-marking witnesses for degrees 0..6", c9_witnesses},
      {10, "inverted-curve families", c10_inversions},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = Clock::now();
    std::string detail;
    try {
      c.run(jobs, detail);
      std::ostringstream os;
      os.setf(std::ios::fixed);
      os.precision(1);
      os << seconds_since(t0);
      std::cout << "PASS  " << c.id << "  " << c.name << ": " << detail << " ["
                << os.str() << " s]\n";
    } catch (const std::exception& e) {
      all_pass = false;
      std::cout << "FAIL  " << c.id << "  " << c.name << ": " << e.what() << "\n";
    }
    std::cout.flush();
  }
  std::cout << (all_pass ? "acceptance: all criteria passed"
                         : "acceptance: FAILURES above")
            << "\n";
  return all_pass ? 0 : 1;
}
