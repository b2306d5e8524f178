#pragma once

// Direct construction of the preimage curves of triangulation-derived
// condition sets, without sweeping the space of trees.
//
// Two gluing operations drive everything. Both take curves whose marking
// sets overlap in a prescribed interface and overlay them: shared structure
// (the interface skeleton) is identified, and each curve's private subtrees
// hang off it at their measured distances. A distance tie between events
// from the two sides would create a vertex of degree > 3, so ties raise
// NonGenericError exactly like the exact engine does.
//
//  - tripod_glue: the interface is three shared markings. Each curve
//    restricts to a star on them; the stars are identified at the center
//    and along the three branches.
//  - crossratio_glue: the interface is the four markings of a shared
//    fulfilled condition. Each curve restricts to the same quartet tree
//    whose bounded edge has the condition's length; the chains between the
//    two pair-corners are overlaid end to end.
//
// On top of these sit the closed-form curves of a triangulation (dual and
// totally inverted), the 2^d partially inverted family, and
// preimage_by_construction, which predicts the full preimage of any derived
// condition set: split the polygon along outer triangles, solve each
// no-outer piece by gluing six-marking local solutions along shared
// conditions, then reassemble the pieces with tripod glues.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crossratio.hpp"
#include "degree.hpp"
#include "rational.hpp"
#include "tree.hpp"
#include "triangulation.hpp"

namespace tropcross {

namespace detail {

inline LabelSet sorted_dedup(LabelSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline Split canonical_split(const LabelSet& sorted_labels, LabelSet side) {
  std::sort(side.begin(), side.end());
  if (contains(side, sorted_labels.front())) side = set_minus(sorted_labels, side);
  return Split{std::move(side)};
}

// Rewrite every label through `to` (injective). Canonical sides are restored
// against the new minimal label; lengths ride along.
inline MarkedTree relabel_tree(const MarkedTree& t, const std::map<Label, Label>& to) {
  LabelSet labels;
  labels.reserve(t.labels().size());
  for (Label l : t.labels()) labels.push_back(to.at(l));
  std::sort(labels.begin(), labels.end());
  std::vector<Split> splits;
  splits.reserve(t.splits().size());
  for (const auto& s : t.splits()) {
    LabelSet side;
    side.reserve(s.part.size());
    for (Label l : s.part) side.push_back(to.at(l));
    splits.push_back(canonical_split(labels, std::move(side)));
  }
  if (t.has_lengths()) return MarkedTree(std::move(labels), std::move(splits), t.lengths());
  return MarkedTree(std::move(labels), std::move(splits));
}

// A subtree hanging off a glued skeleton: the labels it carries and its
// distance from the reference vertex of its branch.
struct BranchEvent {
  Rational pos;
  LabelSet added;
};

// Collect the events along one branch: `sides` are the curve's split sides
// containing `tip` and no other interface marking, with their lengths.
// Sorted by decreasing size they run from the reference vertex outward;
// consecutive set differences are the hanging subtrees.
inline std::vector<BranchEvent> branch_events(std::vector<std::pair<LabelSet, Rational>> sides,
                                              Label tip) {
  std::sort(sides.begin(), sides.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  std::vector<BranchEvent> out;
  Rational pos(0);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const LabelSet& cur = sides[i].first;
    if (i + 1 < sides.size() && !subset_of(sides[i + 1].first, cur))
      throw std::logic_error("branch_events: path sides are not nested");
    const LabelSet next = i + 1 < sides.size() ? sides[i + 1].first : LabelSet{tip};
    pos += sides[i].second;
    LabelSet added = set_minus(cur, next);
    if (added.empty()) throw std::logic_error("branch_events: empty attachment");
    out.push_back(BranchEvent{pos, std::move(added)});
  }
  return out;
}

// Overlay two event lists on the same branch. Equal positions from the two
// sides would merge vertices, which leaves general position.
inline std::vector<BranchEvent> merge_events(const std::vector<BranchEvent>& a,
                                             const std::vector<BranchEvent>& b,
                                             const char* where) {
  std::vector<BranchEvent> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i].pos == b[j].pos)
      throw NonGenericError(std::string(where) + ": coinciding attachment points");
    if (j == b.size() || (i < a.size() && a[i].pos < b[j].pos)) out.push_back(a[i++]);
    else out.push_back(b[j++]);
  }
  return out;
}

// Emit the splits of one rebuilt branch: walking from the reference vertex,
// the edge ending at event t has the tip plus everything at events >= t on
// its far side, and length pos_t - pos_{t-1}.
inline void emit_branch(const std::vector<BranchEvent>& events, Label tip,
                        const LabelSet& all_labels, std::vector<Split>& splits,
                        std::vector<Rational>& lengths) {
  LabelSet far{tip};
  std::vector<LabelSet> suffix(events.size());
  for (std::size_t t = events.size(); t-- > 0;) {
    far.insert(far.end(), events[t].added.begin(), events[t].added.end());
    std::sort(far.begin(), far.end());
    suffix[t] = far;
  }
  Rational prev(0);
  for (std::size_t t = 0; t < events.size(); ++t) {
    splits.push_back(canonical_split(all_labels, suffix[t]));
    lengths.push_back(events[t].pos - prev);
    prev = events[t].pos;
  }
}

}  // namespace detail

// Glue two metric curves whose marking sets intersect in exactly the three
// `anchor` markings. The result restricts to either input under the
// forgetful map; a distance tie between private subtrees of the two curves
// raises NonGenericError.
inline MarkedTree tripod_glue(const MarkedTree& x, const MarkedTree& y,
                              std::array<Label, 3> anchor) {
  using detail::contains;
  std::sort(anchor.begin(), anchor.end());
  LabelSet anchor_set(anchor.begin(), anchor.end());
  if (detail::set_and(x.labels(), y.labels()) != anchor_set)
    throw std::invalid_argument("tripod_glue: curves must share exactly the anchor markings");
  if (!x.has_lengths() || !y.has_lengths())
    throw std::invalid_argument("tripod_glue: metric curves required");

  LabelSet labels = x.labels();
  labels.insert(labels.end(), y.labels().begin(), y.labels().end());
  labels = detail::sorted_dedup(std::move(labels));

  std::vector<Split> splits;
  std::vector<Rational> lengths;
  std::array<std::vector<detail::BranchEvent>, 3> branches;

  for (const MarkedTree* curve : {&x, &y}) {
    std::array<std::vector<std::pair<LabelSet, Rational>>, 3> path_sides;
    for (std::size_t i = 0; i < curve->splits().size(); ++i) {
      const LabelSet& part = curve->splits()[i].part;
      const Rational& len = curve->lengths()[i];
      LabelSet in = detail::set_and(part, anchor_set);
      if (in.empty()) {  // private subtree, carried verbatim
        splits.push_back(detail::canonical_split(labels, part));
        lengths.push_back(len);
        continue;
      }
      if (in.size() == 3) {
        splits.push_back(detail::canonical_split(labels, detail::set_minus(curve->labels(), part)));
        lengths.push_back(len);
        continue;
      }
      // A path edge: orient its side toward the single anchor marking.
      LabelSet side = in.size() == 1 ? part : detail::set_minus(curve->labels(), part);
      const Label tip = detail::set_and(side, anchor_set).front();
      const std::size_t b =
          static_cast<std::size_t>(std::find(anchor.begin(), anchor.end(), tip) - anchor.begin());
      path_sides[b].emplace_back(std::move(side), len);
    }
    for (std::size_t b = 0; b < 3; ++b)
      branches[b] = detail::merge_events(branches[b],
                                         detail::branch_events(std::move(path_sides[b]), anchor[b]),
                                         "tripod_glue");
  }

  for (std::size_t b = 0; b < 3; ++b)
    detail::emit_branch(branches[b], anchor[b], labels, splits, lengths);
  return MarkedTree(std::move(labels), std::move(splits), std::move(lengths));
}

// Glue two metric curves whose marking sets intersect in exactly the four
// markings of `c`, a condition both curves fulfill with positive length.
// The chains realizing the condition are overlaid end to end; corner paths
// and private subtrees follow the same overlay rule as tripod_glue.
inline MarkedTree crossratio_glue(const MarkedTree& x, const MarkedTree& y,
                                  const CrossRatio& c) {
  const LabelSet quartet = c.marking_set();
  if (detail::set_and(x.labels(), y.labels()) != quartet)
    throw std::invalid_argument("crossratio_glue: curves must share exactly the condition markings");
  if (!x.has_lengths() || !y.has_lengths())
    throw std::invalid_argument("crossratio_glue: metric curves required");
  if (c.length().sign() <= 0)
    throw std::invalid_argument("crossratio_glue: condition length must be positive");

  const std::array<Label, 2>& near = c.first_pair();
  const std::array<Label, 2>& far = c.second_pair();
  const std::array<Label, 4> corner{near[0], near[1], far[0], far[1]};

  LabelSet labels = x.labels();
  labels.insert(labels.end(), y.labels().begin(), y.labels().end());
  labels = detail::sorted_dedup(std::move(labels));

  std::vector<Split> splits;
  std::vector<Rational> lengths;
  std::array<std::vector<detail::BranchEvent>, 4> corner_events;
  std::vector<detail::BranchEvent> chain_events;  // junctions along the chain

  for (const MarkedTree* curve : {&x, &y}) {
    std::array<std::vector<std::pair<LabelSet, Rational>>, 4> corner_sides;
    std::vector<std::pair<LabelSet, Rational>> chain_sides;  // far-pair side
    for (std::size_t i = 0; i < curve->splits().size(); ++i) {
      const LabelSet& part = curve->splits()[i].part;
      const Rational& len = curve->lengths()[i];
      LabelSet in = detail::set_and(part, quartet);
      if (in.empty()) {
        splits.push_back(detail::canonical_split(labels, part));
        lengths.push_back(len);
        continue;
      }
      if (in.size() == 4) {
        splits.push_back(detail::canonical_split(labels, detail::set_minus(curve->labels(), part)));
        lengths.push_back(len);
        continue;
      }
      if (in.size() == 2) {
        const bool is_near = in[0] == std::min(near[0], near[1]) && in[1] == std::max(near[0], near[1]);
        const bool is_far = in[0] == std::min(far[0], far[1]) && in[1] == std::max(far[0], far[1]);
        if (!is_near && !is_far)
          throw std::invalid_argument("crossratio_glue: curve does not fulfill the condition");
        LabelSet side = is_far ? part : detail::set_minus(curve->labels(), part);
        chain_sides.emplace_back(std::move(side), len);
        continue;
      }
      // size 1 or 3: a corner path edge, oriented toward its single marking.
      LabelSet side = in.size() == 1 ? part : detail::set_minus(curve->labels(), part);
      const Label tip = detail::set_and(side, quartet).front();
      const std::size_t b = static_cast<std::size_t>(
          std::find(corner.begin(), corner.end(), tip) - corner.begin());
      corner_sides[b].emplace_back(std::move(side), len);
    }

    if (chain_sides.empty())
      throw std::invalid_argument("crossratio_glue: curve does not fulfill the condition");
    auto chain = detail::branch_events(std::move(chain_sides), -1);
    // branch_events closes the innermost side against {-1}; the final
    // "attachment" is really everything beyond the far corner vertex, not a
    // junction, so drop it after checking the measured chain length.
    if (chain.back().pos != c.length())
      throw std::invalid_argument("crossratio_glue: chain length differs from the condition");
    chain.pop_back();
    chain_events = detail::merge_events(chain_events, chain, "crossratio_glue");
    for (std::size_t b = 0; b < 4; ++b)
      corner_events[b] = detail::merge_events(
          corner_events[b], detail::branch_events(std::move(corner_sides[b]), corner[b]),
          "crossratio_glue");
  }

  // Everything beyond the far corner vertex: the far pair and its corners.
  LabelSet far_base{far[0], far[1]};
  for (std::size_t b = 2; b < 4; ++b)
    for (const auto& e : corner_events[b])
      far_base.insert(far_base.end(), e.added.begin(), e.added.end());
  std::sort(far_base.begin(), far_base.end());

  // Chain edges between consecutive junctions; the far side of the edge
  // ending at junction t carries far_base plus all junction subtrees at
  // positions >= t.
  {
    LabelSet far_side = far_base;
    std::vector<LabelSet> suffix(chain_events.size() + 1);
    suffix[chain_events.size()] = far_side;
    for (std::size_t t = chain_events.size(); t-- > 0;) {
      far_side.insert(far_side.end(), chain_events[t].added.begin(), chain_events[t].added.end());
      std::sort(far_side.begin(), far_side.end());
      suffix[t] = far_side;
    }
    Rational prev(0);
    for (std::size_t t = 0; t <= chain_events.size(); ++t) {
      const Rational end = t < chain_events.size() ? chain_events[t].pos : c.length();
      splits.push_back(detail::canonical_split(labels, suffix[t]));
      lengths.push_back(end - prev);
      prev = end;
    }
  }
  for (std::size_t b = 0; b < 4; ++b)
    detail::emit_branch(corner_events[b], corner[b], labels, splits, lengths);
  return MarkedTree(std::move(labels), std::move(splits), std::move(lengths));
}

// The curve dual to the triangulation: one vertex per triangle, one bounded
// edge per diagonal. The side of diagonal (a,b) is the marking arc a+1..b;
// lengths are the diagonal lengths in diagonals() order.
inline MarkedTree dual_curve(const Triangulation& t, const std::vector<Rational>& lengths) {
  if (lengths.size() != t.diagonals().size())
    throw std::invalid_argument("dual_curve: one length per diagonal required");
  LabelSet labels;
  for (int i = 1; i <= t.n(); ++i) labels.push_back(i);
  std::vector<Split> splits;
  splits.reserve(t.diagonals().size());
  for (const auto& d : t.diagonals()) {
    LabelSet side;
    for (int e = d.a + 1; e <= d.b; ++e) side.push_back(e);
    splits.push_back(Split{std::move(side)});  // never contains marking 1
  }
  return MarkedTree(std::move(labels), std::move(splits), lengths);
}

namespace detail {

inline std::vector<Triangle> inner_triangles(const Triangulation& t) {
  std::vector<Triangle> out;
  for (const auto& tri : classify_triangles(t))
    if (tri.kind == TriangleKind::inner) out.push_back(tri);
  return out;
}

inline void require_no_outer(const Triangulation& t, const char* who) {
  for (const auto& tri : classify_triangles(t))
    if (tri.kind == TriangleKind::outer)
      throw std::invalid_argument(std::string(who) + ": triangulation has an outer triangle");
}

}  // namespace detail

// The totally inverted curve of a triangulation without outer triangles:
// the dual curve of the polygon re-marked by swapping the two edge markings
// at every vertex where a diagonal ends.
inline MarkedTree totally_inverted_curve(const Triangulation& t,
                                         const std::vector<Rational>& lengths) {
  detail::require_no_outer(t, "totally_inverted_curve");
  if (lengths.size() != t.diagonals().size())
    throw std::invalid_argument("totally_inverted_curve: one length per diagonal required");
  const int n = t.n();
  std::vector<Label> mark(static_cast<std::size_t>(n));  // position -> marking
  for (int i = 0; i < n; ++i) mark[static_cast<std::size_t>(i)] = i + 1;
  std::vector<bool> endpoint(static_cast<std::size_t>(n + 1), false);
  for (const auto& d : t.diagonals()) endpoint[static_cast<std::size_t>(d.a)] =
      endpoint[static_cast<std::size_t>(d.b)] = true;
  for (int v = 1; v <= n; ++v)
    if (endpoint[static_cast<std::size_t>(v)])
      std::swap(mark[static_cast<std::size_t>(v - 1)], mark[static_cast<std::size_t>(v % n)]);

  LabelSet labels;
  for (int i = 1; i <= n; ++i) labels.push_back(i);
  std::vector<Split> splits;
  splits.reserve(t.diagonals().size());
  for (const auto& d : t.diagonals()) {
    LabelSet side;
    for (int e = d.a + 1; e <= d.b; ++e) side.push_back(mark[static_cast<std::size_t>(e - 1)]);
    splits.push_back(detail::canonical_split(labels, std::move(side)));
  }
  return MarkedTree(std::move(labels), std::move(splits), lengths);
}

namespace detail {

// Breadth-first order over the inner triangles, each after the first paired
// with the diagonal it shares with an already-visited one. The inner
// triangles of a triangulation are connected through shared diagonals.
struct InnerBfs {
  std::vector<std::array<Diagonal, 3>> tri_diags;  // per inner triangle
  std::vector<std::size_t> order;
  std::vector<std::optional<Diagonal>> attach;  // shared diagonal, nullopt for the root
};

inline InnerBfs inner_bfs(const std::vector<std::array<Diagonal, 3>>& tri_diags) {
  InnerBfs bfs;
  bfs.tri_diags = tri_diags;
  const std::size_t d = tri_diags.size();
  if (d == 0) return bfs;
  std::vector<bool> seen(d, false);
  bfs.order.push_back(0);
  bfs.attach.push_back(std::nullopt);
  seen[0] = true;
  for (std::size_t head = 0; head < bfs.order.size(); ++head) {
    const auto& cur = tri_diags[bfs.order[head]];
    for (std::size_t j = 0; j < d; ++j) {
      if (seen[j]) continue;
      for (const auto& shared : tri_diags[j])
        if (std::find(cur.begin(), cur.end(), shared) != cur.end()) {
          bfs.order.push_back(j);
          bfs.attach.emplace_back(shared);
          seen[j] = true;
          break;
        }
    }
  }
  if (bfs.order.size() != d)
    throw std::logic_error("inner_bfs: inner triangles are not connected");
  return bfs;
}

}  // namespace detail

// All 2^d partially inverted curves of a triangulation without outer
// triangles, for the dual reading of its conditions: per inner triangle
// choose the dual or the totally inverted local curve (the forgetful image
// on the triangle's six adjacent markings) and glue the choices along the
// shared conditions. Curve i uses bit b of i for the b-th inner triangle in
// breadth-first order (0 = dual, 1 = inverted); all have multiplicity 1.
inline std::vector<PreimageCurve> partially_inverted_curves(
    const Triangulation& t, const std::vector<Rational>& lengths) {
  detail::require_no_outer(t, "partially_inverted_curves");
  const MarkedTree dual = dual_curve(t, lengths);
  const auto inner = detail::inner_triangles(t);
  const std::size_t d = inner.size();
  if (d == 0) return {PreimageCurve{dual, BigInt(1)}};
  const MarkedTree inverted = totally_inverted_curve(t, lengths);

  std::map<Diagonal, CrossRatio> cond;
  for (std::size_t i = 0; i < t.diagonals().size(); ++i)
    cond.emplace(t.diagonals()[i],
                 diagonal_crossratio(t.n(), t.diagonals()[i], Interp::dual, lengths[i]));

  std::vector<std::array<Diagonal, 3>> tri_diags;
  std::vector<LabelSet> tri_marks;
  for (const auto& tri : inner) {
    const auto [u, v, w] = tri.vertices;
    tri_diags.push_back({Diagonal(u, v), Diagonal(v, w), Diagonal(u, w)});
    LabelSet m;
    for (const auto& dg : tri_diags.back())
      for (Label l : diagonal_markings(t.n(), dg)) m.push_back(l);
    tri_marks.push_back(detail::sorted_dedup(std::move(m)));
  }
  const auto bfs = detail::inner_bfs(tri_diags);

  std::vector<PreimageCurve> out;
  out.reserve(std::size_t{1} << d);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
    auto local = [&](std::size_t step) {
      const std::size_t tri = bfs.order[step];
      const bool inv = (bits >> step) & 1;
      return forgetful(inv ? inverted : dual, tri_marks[tri]);
    };
    MarkedTree acc = local(0);
    for (std::size_t step = 1; step < d; ++step)
      acc = crossratio_glue(acc, local(step), cond.at(*bfs.attach[step]));
    out.push_back(PreimageCurve{std::move(acc), BigInt(1)});
  }
  std::sort(out.begin(), out.end(),
            [](const PreimageCurve& a, const PreimageCurve& b) { return a.tree < b.tree; });
  return out;
}

struct ConstructionResult {
  BigInt degree;                 // always 2^d
  int d = 0;                     // inner triangles
  int k = 0;                     // inner triangles that are all-neighboring
                                 // with strict triangle inequalities
  BigInt expected_count;         // 2^(d-k)
  BigInt expected_multiplicity;  // 2^k
  std::vector<PreimageCurve> curves;
};

namespace detail {

// Unique curve matching a quadrilateral piece: the quartet tree on the four
// markings whose bounded edge separates the condition's pairs.
inline PreimageCurve quadrilateral_curve(const CrossRatio& c) {
  const LabelSet labels = c.marking_set();
  LabelSet side{c.first_pair()[0], c.first_pair()[1]};
  return PreimageCurve{
      MarkedTree(labels, {canonical_split(labels, std::move(side))}, {c.length()}),
      BigInt(1)};
}

// Preimage curves of the three conditions around one inner triangle,
// computed on relabeled markings 1..6 and mapped back.
inline std::vector<PreimageCurve> local_solutions(const std::array<CrossRatio, 3>& conds,
                                                  const LabelSet& marks) {
  if (marks.size() != 6)
    throw std::logic_error("local_solutions: expected six markings around an inner triangle");
  std::map<Label, Label> fwd, back;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    fwd[marks[i]] = static_cast<Label>(i + 1);
    back[static_cast<Label>(i + 1)] = marks[i];
  }
  std::vector<CrossRatio> items;
  for (const auto& c : conds)
    items.emplace_back(fwd.at(c.first_pair()[0]), fwd.at(c.first_pair()[1]),
                       fwd.at(c.second_pair()[0]), fwd.at(c.second_pair()[1]), c.length());
  auto result = compute_degree(CrossRatioSet(6, std::move(items)), 1);
  std::vector<PreimageCurve> out;
  out.reserve(result.curves.size());
  for (auto& curve : result.curves)
    out.push_back(PreimageCurve{relabel_tree(curve.tree, back), curve.multiplicity});
  return out;
}

// Preimage curves of a piece without outer triangles, in original markings.
inline std::vector<PreimageCurve> solve_no_outer(const WorkPiece& p,
                                                 const std::map<Diagonal, CrossRatio>& cond) {
  if (p.size() == 4) return {quadrilateral_curve(cond.at(p.diags.front()))};

  std::vector<std::array<Diagonal, 3>> tri_diags;
  std::vector<std::array<CrossRatio, 3>> tri_conds;
  std::vector<LabelSet> tri_marks;
  for (const auto& tri : piece_triangles(p)) {
    if (tri.boundary_sides != 0) continue;
    const auto [a, b, c] = tri.pos;
    tri_diags.push_back({Diagonal(p.vid[a], p.vid[b]), Diagonal(p.vid[b], p.vid[c]),
                         Diagonal(p.vid[a], p.vid[c])});
    const auto& dg = tri_diags.back();
    tri_conds.push_back({cond.at(dg[0]), cond.at(dg[1]), cond.at(dg[2])});
    LabelSet m;
    for (const auto& c3 : tri_conds.back())
      for (Label l : c3.marking_set()) m.push_back(l);
    tri_marks.push_back(sorted_dedup(std::move(m)));
  }
  const auto bfs = inner_bfs(tri_diags);
  if (bfs.order.empty())
    throw std::logic_error("solve_no_outer: piece larger than a quadrilateral needs inner triangles");

  std::vector<PreimageCurve> acc =
      local_solutions(tri_conds[bfs.order[0]], tri_marks[bfs.order[0]]);
  for (std::size_t step = 1; step < bfs.order.size(); ++step) {
    const std::size_t tri = bfs.order[step];
    const auto locals = local_solutions(tri_conds[tri], tri_marks[tri]);
    const CrossRatio& shared = cond.at(*bfs.attach[step]);
    std::vector<PreimageCurve> next;
    next.reserve(acc.size() * locals.size());
    for (const auto& a : acc)
      for (const auto& l : locals)
        next.push_back(PreimageCurve{crossratio_glue(a.tree, l.tree, shared),
                                     a.multiplicity * l.multiplicity});
    acc = std::move(next);
  }
  return acc;
}

inline std::vector<PreimageCurve> solve_piece(const WorkPiece& p,
                                              const std::map<Diagonal, CrossRatio>& cond) {
  auto split = split_once(p);
  if (!split) return solve_no_outer(p, cond);
  const auto xs = solve_piece(split->x, cond);
  const auto ys = solve_piece(split->y, cond);
  std::vector<PreimageCurve> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& a : xs)
    for (const auto& b : ys)
      out.push_back(PreimageCurve{tripod_glue(a.tree, b.tree, split->anchor),
                                  a.multiplicity * b.multiplicity});
  return out;
}

}  // namespace detail

// Predict the full preimage of the condition set derived from a
// triangulation: 2^d curves counted with multiplicity, of which 2^(d-k)
// survive as distinct curves of multiplicity 2^k each. Raises
// NonGenericError for non-generic length choices, like the exact engine.
inline ConstructionResult preimage_by_construction(const Triangulation& t,
                                                   const std::vector<Interp>& interps,
                                                   const std::vector<Rational>& lengths) {
  if (interps.size() != t.diagonals().size() || lengths.size() != t.diagonals().size())
    throw std::invalid_argument(
        "preimage_by_construction: need one reading and one length per diagonal");
  for (const auto& l : lengths)
    if (l.sign() <= 0)
      throw std::invalid_argument("preimage_by_construction: lengths must be positive");

  std::map<Diagonal, CrossRatio> cond;
  std::map<Diagonal, Interp> reading;
  std::map<Diagonal, Rational> len_of;
  for (std::size_t i = 0; i < t.diagonals().size(); ++i) {
    const Diagonal& dg = t.diagonals()[i];
    cond.emplace(dg, diagonal_crossratio(t.n(), dg, interps[i], lengths[i]));
    reading.emplace(dg, interps[i]);
    len_of.emplace(dg, lengths[i]);
  }

  ConstructionResult out;
  for (const auto& tri : detail::inner_triangles(t)) {
    ++out.d;
    const auto [u, v, w] = tri.vertices;
    const std::array<Diagonal, 3> dg{Diagonal(u, v), Diagonal(v, w), Diagonal(u, w)};
    bool all_neighboring = true;
    for (const auto& g : dg)
      if (reading.at(g) != Interp::neighboring) all_neighboring = false;
    if (all_neighboring &&
        strict_triangle_inequalities(len_of.at(dg[0]), len_of.at(dg[1]), len_of.at(dg[2])))
      ++out.k;
  }

  out.curves = detail::solve_piece(detail::whole_polygon_piece(t), cond);
  std::sort(out.curves.begin(), out.curves.end(),
            [](const PreimageCurve& a, const PreimageCurve& b) { return a.tree < b.tree; });
  out.degree = 0;
  for (const auto& c : out.curves) out.degree += c.multiplicity;
  BigInt count(1), mult(1);
  for (int i = 0; i < out.d - out.k; ++i) count *= 2;
  for (int i = 0; i < out.k; ++i) mult *= 2;
  out.expected_count = count;
  out.expected_multiplicity = mult;
  return out;
}

}  // namespace tropcross
