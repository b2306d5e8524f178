#pragma once

// Leaf-labeled trees without 2-valent vertices, the combinatorial types of
// n-marked rational tropical curves. A tree is represented by its set of
// bounded-edge splits: each bounded edge corresponds to the bipartition of
// the marking set obtained by deleting it, stored canonically as the side
// that does NOT contain the minimal marking. A system of distinct, pairwise
// compatible splits with both sides of size >= 2 determines the tree
// uniquely, so validation and equality are pure set arithmetic.
//
// Text format: {labels}[split;split;...] with an optional
// lengths{split=value,...} suffix, e.g. {1,2,3,4,5}[4,5]lengths{4,5=7/2}.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace tropcross {

using Label = int;
using LabelSet = std::vector<Label>;  // sorted ascending, distinct

namespace detail {

inline LabelSet sorted_unique(LabelSet v, const char* what) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw std::invalid_argument(std::string(what) + ": repeated label");
  for (Label l : v)
    if (l <= 0) throw std::invalid_argument(std::string(what) + ": labels must be positive");
  return v;
}

inline bool contains(const LabelSet& s, Label l) {
  return std::binary_search(s.begin(), s.end(), l);
}

inline bool subset_of(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline LabelSet set_minus(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline LabelSet set_and(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool disjoint(const LabelSet& a, const LabelSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return false;
  }
  return true;
}

}  // namespace detail

// One bounded edge of a tree: the side of its bipartition not containing the
// minimal marking, sorted ascending.
struct Split {
  LabelSet part;

  friend bool operator==(const Split& a, const Split& b) { return a.part == b.part; }
  friend bool operator!=(const Split& a, const Split& b) { return a.part != b.part; }
  friend bool operator<(const Split& a, const Split& b) { return a.part < b.part; }

  bool contains(Label l) const { return detail::contains(part, l); }

  // True iff deleting this edge separates {a,b} from {c,d}.
  bool separates(Label a, Label b, Label c, Label d) const {
    const bool ia = contains(a), ib = contains(b), ic = contains(c), id = contains(d);
    return (ia && ib && !ic && !id) || (!ia && !ib && ic && id);
  }
};

class MarkedTree {
 public:
  // Combinatorial type only.
  MarkedTree(LabelSet labels, std::vector<Split> splits)
      : MarkedTree(std::move(labels), std::move(splits), {}, false) {}

  // Metric tree: lengths[i] belongs to splits[i] (before canonical sorting).
  MarkedTree(LabelSet labels, std::vector<Split> splits, std::vector<Rational> lengths)
      : MarkedTree(std::move(labels), std::move(splits), std::move(lengths), true) {}

  const LabelSet& labels() const { return labels_; }
  const std::vector<Split>& splits() const { return splits_; }
  bool has_lengths() const { return has_lengths_; }
  const std::vector<Rational>& lengths() const {
    if (!has_lengths_) throw std::invalid_argument("MarkedTree: no lengths");
    return lengths_;
  }

  std::size_t marking_count() const { return labels_.size(); }
  bool trivalent() const { return splits_.size() + 3 == labels_.size(); }

  const Rational& length_of(const Split& s) const {
    auto it = std::lower_bound(splits_.begin(), splits_.end(), s);
    if (it == splits_.end() || !(*it == s))
      throw std::invalid_argument("MarkedTree: no such bounded edge");
    return lengths()[static_cast<std::size_t>(it - splits_.begin())];
  }

  bool has_split(const Split& s) const {
    return std::binary_search(splits_.begin(), splits_.end(), s);
  }

  // Drops all edge lengths, keeping the combinatorial type.
  MarkedTree combinatorial() const { return MarkedTree(labels_, splits_); }

  friend bool operator==(const MarkedTree& a, const MarkedTree& b) {
    return a.labels_ == b.labels_ && a.splits_ == b.splits_ &&
           a.has_lengths_ == b.has_lengths_ && a.lengths_ == b.lengths_;
  }
  friend bool operator!=(const MarkedTree& a, const MarkedTree& b) { return !(a == b); }
  // Canonical key order: labels, then the sorted split sets, metric last.
  friend bool operator<(const MarkedTree& a, const MarkedTree& b) {
    if (a.labels_ != b.labels_) return a.labels_ < b.labels_;
    if (a.splits_ != b.splits_) return a.splits_ < b.splits_;
    if (a.has_lengths_ != b.has_lengths_) return !a.has_lengths_;
    for (std::size_t i = 0; i < a.lengths_.size(); ++i) {
      if (a.lengths_[i] != b.lengths_[i]) return a.lengths_[i] < b.lengths_[i];
    }
    return false;
  }

  std::string to_text() const;
  static MarkedTree from_text(const std::string& s);

 private:
  MarkedTree(LabelSet labels, std::vector<Split> splits, std::vector<Rational> lengths,
             bool has_lengths)
      : labels_(detail::sorted_unique(std::move(labels), "MarkedTree")),
        splits_(std::move(splits)),
        lengths_(std::move(lengths)),
        has_lengths_(has_lengths) {
    const std::size_t n = labels_.size();
    if (n < 3) throw std::invalid_argument("MarkedTree: needs at least 3 markings");
    if (has_lengths_ && lengths_.size() != splits_.size())
      throw std::invalid_argument("MarkedTree: one length per bounded edge required");
    if (has_lengths_)
      for (const auto& l : lengths_)
        if (l.sign() <= 0)
          throw std::invalid_argument("MarkedTree: edge lengths must be positive");

    const Label min_label = labels_.front();
    for (auto& s : splits_) {
      s.part = detail::sorted_unique(std::move(s.part), "Split");
      if (!detail::subset_of(s.part, labels_))
        throw std::invalid_argument("MarkedTree: split uses unknown label");
      if (s.contains(min_label))
        throw std::invalid_argument("MarkedTree: split side must exclude the minimal label");
      if (s.part.size() < 2 || s.part.size() + 2 > n)
        throw std::invalid_argument("MarkedTree: both split sides need >= 2 markings");
    }

    // Sort splits canonically, carrying lengths along.
    std::vector<std::size_t> order(splits_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return splits_[i] < splits_[j]; });
    std::vector<Split> ss;
    std::vector<Rational> ll;
    ss.reserve(splits_.size());
    for (std::size_t i : order) {
      ss.push_back(std::move(splits_[i]));
      if (has_lengths_) ll.push_back(lengths_[i]);
    }
    splits_ = std::move(ss);
    lengths_ = std::move(ll);

    for (std::size_t i = 0; i + 1 < splits_.size(); ++i)
      if (splits_[i] == splits_[i + 1])
        throw std::invalid_argument("MarkedTree: repeated split");

    // Pairwise compatibility. With both canonical sides excluding the minimal
    // label this reduces to: disjoint or nested.
    for (std::size_t i = 0; i < splits_.size(); ++i)
      for (std::size_t j = i + 1; j < splits_.size(); ++j) {
        const LabelSet& p = splits_[i].part;
        const LabelSet& q = splits_[j].part;
        if (!detail::disjoint(p, q) && !detail::subset_of(p, q) && !detail::subset_of(q, p))
          throw std::invalid_argument("MarkedTree: incompatible splits do not form a tree");
      }
  }

  LabelSet labels_;
  std::vector<Split> splits_;
  std::vector<Rational> lengths_;
  bool has_lengths_ = false;
};

// The bipartition of a bounded edge given as either of its sides.
// Leaf edges (a side of size 1) and unknown edges are rejected.
inline Split edge_split(const MarkedTree& tree, const LabelSet& side_in) {
  LabelSet side = detail::sorted_unique(side_in, "edge_split");
  if (!detail::subset_of(side, tree.labels()))
    throw std::invalid_argument("edge_split: side uses unknown label");
  if (detail::contains(side, tree.labels().front()))
    side = detail::set_minus(tree.labels(), side);
  if (side.size() < 2 || side.size() + 2 > tree.labels().size())
    throw std::invalid_argument("edge_split: not a bounded edge (leaf or improper side)");
  Split s{std::move(side)};
  if (!tree.has_split(s))
    throw std::invalid_argument("edge_split: tree has no such bounded edge");
  return s;
}

// Forgets all markings outside `keep` and stabilizes: restricted to `keep`,
// a bounded edge whose bipartition collapses on one side becomes a leaf edge
// (dropped), and bounded edges with equal restrictions merge into one edge
// whose length is the sum.
inline MarkedTree forgetful(const MarkedTree& tree, const LabelSet& keep_in) {
  LabelSet keep = detail::sorted_unique(keep_in, "forgetful");
  if (!detail::subset_of(keep, tree.labels()))
    throw std::invalid_argument("forgetful: keep must be a subset of the markings");
  if (keep.size() < 3)
    throw std::invalid_argument("forgetful: need at least 3 markings to keep");

  const Label min_keep = keep.front();
  std::map<LabelSet, Rational> parts;  // restricted canonical part -> total length
  std::vector<LabelSet> order;
  for (std::size_t i = 0; i < tree.splits().size(); ++i) {
    LabelSet part = detail::set_and(tree.splits()[i].part, keep);
    if (detail::contains(part, min_keep)) part = detail::set_minus(keep, part);
    if (part.size() < 2 || part.size() + 2 > keep.size()) continue;
    auto [it, fresh] = parts.emplace(std::move(part), Rational(0));
    if (tree.has_lengths()) it->second += tree.lengths()[i];
    (void)fresh;
  }

  std::vector<Split> splits;
  std::vector<Rational> lengths;
  for (auto& [part, len] : parts) {
    splits.push_back(Split{part});
    lengths.push_back(len);
  }
  if (tree.has_lengths()) return MarkedTree(keep, std::move(splits), std::move(lengths));
  return MarkedTree(std::move(keep), std::move(splits));
}

// All trivalent combinatorial types on the given markings, in canonical key
// order. Counts follow the double factorial (2n-5)!!: each new leaf can be
// inserted into any of the 2k-3 edges of a k-marked tree.
inline std::vector<MarkedTree> enumerate_trivalent_trees(const LabelSet& labels_in) {
  LabelSet labels = detail::sorted_unique(labels_in, "enumerate_trivalent_trees");
  if (labels.size() < 3)
    throw std::invalid_argument("enumerate_trivalent_trees: need at least 3 markings");

  // Work on split systems only; labels are inserted in ascending order so the
  // minimal label never changes and canonical parts stay canonical.
  std::vector<std::vector<LabelSet>> trees = {{}};
  for (std::size_t k = 3; k < labels.size(); ++k) {
    const Label x = labels[k];
    std::vector<std::vector<LabelSet>> next;
    next.reserve(trees.size() * (2 * k - 3));
    for (const auto& t : trees) {
      // Insert at a leaf edge: new cherry {leaf, x}; x joins every part that
      // contains the leaf.
      for (std::size_t li = 0; li < k; ++li) {
        const Label leaf = labels[li];
        std::vector<LabelSet> s;
        s.reserve(t.size() + 1);
        for (const auto& part : t) {
          LabelSet p = part;
          if (detail::contains(p, leaf)) p.push_back(x);  // x > all existing labels
          s.push_back(std::move(p));
        }
        if (li == 0) {
          LabelSet rest(labels.begin() + 1, labels.begin() + static_cast<long>(k));
          s.push_back(std::move(rest));
        } else {
          s.push_back(LabelSet{leaf, x});
        }
        next.push_back(std::move(s));
      }
      // Insert inside a bounded edge e: e's split doubles into part and
      // part+{x}; any other part absorbs x iff it contains e's part.
      for (std::size_t ei = 0; ei < t.size(); ++ei) {
        std::vector<LabelSet> s;
        s.reserve(t.size() + 1);
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (j == ei) continue;
          LabelSet p = t[j];
          if (detail::subset_of(t[ei], p)) p.push_back(x);
          s.push_back(std::move(p));
        }
        LabelSet with_x = t[ei];
        with_x.push_back(x);
        s.push_back(t[ei]);
        s.push_back(std::move(with_x));
        next.push_back(std::move(s));
      }
    }
    trees = std::move(next);
  }

  std::vector<MarkedTree> out;
  out.reserve(trees.size());
  for (auto& t : trees) {
    std::vector<Split> splits;
    splits.reserve(t.size());
    for (auto& p : t) splits.push_back(Split{std::move(p)});
    out.emplace_back(labels, std::move(splits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- text format ----

namespace detail {

inline std::string join_labels(const LabelSet& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

struct TextCursor {
  const std::string& s;
  std::size_t pos = 0;

  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw std::invalid_argument("MarkedTree: expected '" + std::string(1, c) +
                                  "' at position " + std::to_string(pos));
  }
  bool at(char c) const { return pos < s.size() && s[pos] == c; }
  bool done() const { return pos == s.size(); }

  Label label() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("MarkedTree: expected label");
    return std::stoi(s.substr(start, pos - start));
  }
  LabelSet label_list() {
    LabelSet out{label()};
    while (eat(',')) out.push_back(label());
    return out;
  }
  std::string until(const char* stops) {
    std::size_t start = pos;
    while (pos < s.size() && !std::strchr(stops, s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
};

}  // namespace detail

inline std::string MarkedTree::to_text() const {
  std::string out = "{" + detail::join_labels(labels_) + "}[";
  for (std::size_t i = 0; i < splits_.size(); ++i) {
    if (i) out += ';';
    out += detail::join_labels(splits_[i].part);
  }
  out += ']';
  if (has_lengths_) {
    out += "lengths{";
    for (std::size_t i = 0; i < splits_.size(); ++i) {
      if (i) out += ',';
      out += detail::join_labels(splits_[i].part) + "=" + lengths_[i].to_string();
    }
    out += '}';
  }
  return out;
}

inline MarkedTree MarkedTree::from_text(const std::string& s) {
  detail::TextCursor c{s};
  c.expect('{');
  LabelSet labels = c.label_list();
  c.expect('}');
  c.expect('[');
  std::vector<Split> splits;
  if (!c.at(']')) {
    splits.push_back(Split{c.label_list()});
    while (c.eat(';')) splits.push_back(Split{c.label_list()});
  }
  c.expect(']');
  if (c.done()) return MarkedTree(std::move(labels), std::move(splits));

  for (const char* k = "lengths{"; *k; ++k) c.expect(*k);
  std::map<Split, Rational> by_split;
  if (!c.at('}')) {
    while (true) {
      LabelSet part = c.label_list();
      c.expect('=');
      Rational value = Rational::parse(c.until(",}"));
      if (!by_split.emplace(Split{std::move(part)}, value).second)
        throw std::invalid_argument("MarkedTree: repeated split in lengths");
      if (!c.eat(',')) break;
    }
  }
  c.expect('}');
  if (!c.done()) throw std::invalid_argument("MarkedTree: trailing characters");

  std::vector<Rational> lengths;
  lengths.reserve(splits.size());
  for (const auto& sp : splits) {
    LabelSet part = detail::sorted_unique(sp.part, "Split");
    auto it = by_split.find(Split{part});
    if (it == by_split.end())
      throw std::invalid_argument("MarkedTree: missing length for a split");
    lengths.push_back(it->second);
  }
  if (by_split.size() != splits.size())
    throw std::invalid_argument("MarkedTree: lengths for unknown splits");
  return MarkedTree(std::move(labels), std::move(splits), std::move(lengths));
}

}  // namespace tropcross
