#pragma once

// Tropical cross-ratio conditions. A condition (lambda, (ab|cd)) constrains a
// marked curve: the paths a->c and b->d must run through common edges of
// total length lambda. A bounded edge contributes to the condition exactly
// when its split separates {a,b} from {c,d}; collecting these contributions
// over a trivalent curve gives a 0/1 matrix whose determinant is the local
// multiplicity of the curve in the count.

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace tropcross {

class CrossRatio {
 public:
  // (length, (ab|cd)). The pairing is canonicalized: each pair sorted, the
  // pair with the smaller first element first; (ab|cd) == (ba|dc) == (cd|ab).
  CrossRatio(Label a, Label b, Label c, Label d, Rational length)
      : length_(std::move(length)) {
    if (length_.sign() < 0)
      throw std::invalid_argument("CrossRatio: length must be >= 0");
    std::array<Label, 4> all{a, b, c, d};
    for (Label l : all)
      if (l <= 0) throw std::invalid_argument("CrossRatio: markings must be positive");
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw std::invalid_argument("CrossRatio: four distinct markings required");
    first_ = {std::min(a, b), std::max(a, b)};
    second_ = {std::min(c, d), std::max(c, d)};
    if (second_ < first_) std::swap(first_, second_);
  }

  const std::array<Label, 2>& first_pair() const { return first_; }
  const std::array<Label, 2>& second_pair() const { return second_; }
  const Rational& length() const { return length_; }

  LabelSet marking_set() const {
    LabelSet m{first_[0], first_[1], second_[0], second_[1]};
    std::sort(m.begin(), m.end());
    return m;
  }

  CrossRatio with_length(Rational l) const {
    return CrossRatio(first_[0], first_[1], second_[0], second_[1], std::move(l));
  }

  friend bool operator==(const CrossRatio& x, const CrossRatio& y) {
    return x.first_ == y.first_ && x.second_ == y.second_ && x.length_ == y.length_;
  }
  friend bool operator!=(const CrossRatio& x, const CrossRatio& y) { return !(x == y); }
  friend bool operator<(const CrossRatio& x, const CrossRatio& y) {
    if (x.first_ != y.first_) return x.first_ < y.first_;
    if (x.second_ != y.second_) return x.second_ < y.second_;
    return x.length_ < y.length_;
  }

  std::string to_string() const {
    return "(" + length_.to_string() + ",(" + std::to_string(first_[0]) + "," +
           std::to_string(first_[1]) + "|" + std::to_string(second_[0]) + "," +
           std::to_string(second_[1]) + "))";
  }

 private:
  std::array<Label, 2> first_, second_;
  Rational length_;
};

// Conditions on n-marked curves; markings are 1..n.
struct CrossRatioSet {
  int n = 0;
  std::vector<CrossRatio> items;

  CrossRatioSet(int n_in, std::vector<CrossRatio> items_in)
      : n(n_in), items(std::move(items_in)) {
    if (n < 4) throw std::invalid_argument("CrossRatioSet: n must be >= 4");
    for (const auto& cr : items)
      for (Label l : cr.marking_set())
        if (l > n) throw std::invalid_argument("CrossRatioSet: marking exceeds n");
  }

  LabelSet ambient_labels() const {
    LabelSet out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1;
    return out;
  }
};

// True iff the bounded edge with the given split contributes to cr, i.e. its
// bipartition separates cr's first pair from its second pair.
inline bool contributes(const MarkedTree& tree, const Split& edge, const CrossRatio& cr) {
  if (!tree.has_split(edge))
    throw std::invalid_argument("contributes: tree has no such bounded edge");
  for (Label l : cr.marking_set())
    if (!detail::contains(tree.labels(), l))
      throw std::invalid_argument("contributes: cross-ratio marking missing from the tree");
  return edge.separates(cr.first_pair()[0], cr.first_pair()[1], cr.second_pair()[0],
                        cr.second_pair()[1]);
}

// Row i: condition crs[i]; column j: j-th bounded edge in canonical split
// order; entry 1 iff the edge contributes to the condition.
inline IntMatrix multiplicity_matrix(const MarkedTree& tree,
                                     const std::vector<CrossRatio>& crs) {
  if (!tree.trivalent())
    throw std::invalid_argument("multiplicity_matrix: tree must be trivalent");
  if (crs.size() != tree.splits().size())
    throw std::invalid_argument(
        "multiplicity_matrix: need exactly one condition per bounded edge");
  IntMatrix m(crs.size(), tree.splits().size());
  for (std::size_t i = 0; i < crs.size(); ++i)
    for (std::size_t j = 0; j < tree.splits().size(); ++j)
      m.at(i, j) = contributes(tree, tree.splits()[j], crs[i]) ? 1 : 0;
  return m;
}

inline BigInt multiplicity(const MarkedTree& tree, const std::vector<CrossRatio>& crs) {
  BigInt d = determinant(multiplicity_matrix(tree, crs));
  return sgn(d) < 0 ? BigInt(-d) : d;
}

// True iff the metric tree satisfies the condition: the contributing edge
// lengths sum to lambda. For lambda = 0 the four markings must form a star
// after restriction (no edge separates any pairing of them), matching the
// lambda -> 0 degeneration of the positive case.
inline bool fulfills(const MarkedTree& tree, const CrossRatio& cr) {
  const auto& f = cr.first_pair();
  const auto& s = cr.second_pair();
  for (Label l : cr.marking_set())
    if (!detail::contains(tree.labels(), l))
      throw std::invalid_argument("fulfills: cross-ratio marking missing from the tree");
  Rational total(0);
  for (std::size_t i = 0; i < tree.splits().size(); ++i)
    if (tree.splits()[i].separates(f[0], f[1], s[0], s[1]))
      total += tree.lengths()[i];
  if (total != cr.length()) return false;
  if (cr.length().is_zero()) {
    for (const auto& sp : tree.splits()) {
      if (sp.separates(f[0], s[0], f[1], s[1])) return false;
      if (sp.separates(f[0], s[1], f[1], s[0])) return false;
    }
  }
  return true;
}

}  // namespace tropcross
