#pragma once

// Full triangulations of a convex n-gon and the cross-ratio conditions they
// induce. Conventions: edges are marked 1..n clockwise and vertices are
// numbered 1..n so that vertex i is shared by edges i and i+1 (edge n+1
// wraps to 1); edge i therefore connects vertices i-1 and i. A diagonal
// {a,b} joins two non-adjacent vertices, and the four edge markings adjacent
// to its endpoints are {a, a+1, b, b+1} (mod n). Each diagonal carries one
// condition on those four markings; the pairing depends on a per-diagonal
// reading:
//   dual:         (a, b+1 | a+1, b)
//   neighboring:  (a, a+1 | b, b+1)
//   intersecting: (a, b   | a+1, b+1)
// Triangles are classified by how many polygon sides they use: inner (0),
// outer (1), border (2). Splitting along outer triangles decomposes the
// polygon into pieces without outer triangles; the split triangle survives
// in both pieces as a border triangle and the cut chord inherits the marking
// of the polygon edge it replaces.

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crossratio.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace tropcross {

struct Diagonal {
  int a = 0, b = 0;  // vertices, stored with a < b

  Diagonal() = default;
  Diagonal(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y) throw std::invalid_argument("Diagonal: endpoints must differ");
  }

  friend bool operator==(const Diagonal& p, const Diagonal& q) {
    return p.a == q.a && p.b == q.b;
  }
  friend bool operator!=(const Diagonal& p, const Diagonal& q) { return !(p == q); }
  friend bool operator<(const Diagonal& p, const Diagonal& q) {
    return p.a != q.a ? p.a < q.a : p.b < q.b;
  }
};

// Two diagonals (with a < b each) cross iff exactly one endpoint of one lies
// strictly between the endpoints of the other.
inline bool diagonals_cross(const Diagonal& p, const Diagonal& q) {
  return (p.a < q.a && q.a < p.b && p.b < q.b) ||
         (q.a < p.a && p.a < q.b && q.b < p.b);
}

class Triangulation {
 public:
  Triangulation(int n, std::vector<Diagonal> diagonals)
      : n_(n), diagonals_(std::move(diagonals)) {
    if (n_ < 4) throw std::invalid_argument("Triangulation: need n >= 4");
    if (diagonals_.size() != static_cast<std::size_t>(n_ - 3))
      throw std::invalid_argument("Triangulation: a full triangulation has n-3 diagonals");
    for (const auto& d : diagonals_) {
      if (d.a < 1 || d.b > n_)
        throw std::invalid_argument("Triangulation: vertex out of range");
      if (d.b - d.a < 2 || (d.a == 1 && d.b == n_))
        throw std::invalid_argument("Triangulation: endpoints must not be adjacent");
    }
    std::sort(diagonals_.begin(), diagonals_.end());
    for (std::size_t i = 0; i + 1 < diagonals_.size(); ++i)
      if (diagonals_[i] == diagonals_[i + 1])
        throw std::invalid_argument("Triangulation: repeated diagonal");
    for (std::size_t i = 0; i < diagonals_.size(); ++i)
      for (std::size_t j = i + 1; j < diagonals_.size(); ++j)
        if (diagonals_cross(diagonals_[i], diagonals_[j]))
          throw std::invalid_argument("Triangulation: diagonals cross");
  }

  int n() const { return n_; }
  const std::vector<Diagonal>& diagonals() const { return diagonals_; }

  bool has_diagonal(const Diagonal& d) const {
    return std::binary_search(diagonals_.begin(), diagonals_.end(), d);
  }

  friend bool operator==(const Triangulation& s, const Triangulation& t) {
    return s.n_ == t.n_ && s.diagonals_ == t.diagonals_;
  }
  friend bool operator!=(const Triangulation& s, const Triangulation& t) {
    return !(s == t);
  }
  friend bool operator<(const Triangulation& s, const Triangulation& t) {
    return s.n_ != t.n_ ? s.n_ < t.n_ : s.diagonals_ < t.diagonals_;
  }

 private:
  int n_;
  std::vector<Diagonal> diagonals_;
};

// All full triangulations of the n-gon, Catalan(n-2) of them, in canonical
// (sorted diagonal list) order. Recursion: in the sub-polygon on vertices
// lo..hi closed by the chord (lo,hi), the triangle on that chord picks its
// apex k, contributing the chords (lo,k) and (k,hi) when they are proper.
inline std::vector<Triangulation> enumerate_triangulations(int n) {
  if (n < 4) throw std::invalid_argument("enumerate_triangulations: need n >= 4");

  struct Rec {
    std::vector<std::vector<Diagonal>> operator()(int lo, int hi) const {
      if (hi - lo < 2) return {{}};
      std::vector<std::vector<Diagonal>> out;
      for (int k = lo + 1; k < hi; ++k) {
        auto left = (*this)(lo, k);
        auto right = (*this)(k, hi);
        for (const auto& l : left)
          for (const auto& r : right) {
            std::vector<Diagonal> d;
            d.reserve(l.size() + r.size() + 2);
            d.insert(d.end(), l.begin(), l.end());
            d.insert(d.end(), r.begin(), r.end());
            if (k - lo >= 2) d.emplace_back(lo, k);
            if (hi - k >= 2) d.emplace_back(k, hi);
            out.push_back(std::move(d));
          }
      }
      return out;
    }
  };

  std::vector<Triangulation> out;
  for (auto& d : Rec{}(1, n)) out.emplace_back(n, std::move(d));
  std::sort(out.begin(), out.end());
  return out;
}

enum class TriangleKind { inner, outer, border };

struct Triangle {
  std::array<int, 3> vertices;  // ascending
  int polygon_sides = 0;
  TriangleKind kind = TriangleKind::border;
};

// The n-2 triangles of the triangulation, ascending by vertex triple. A
// triple is a face iff all three connecting segments are polygon sides or
// diagonals: the enclosed region contains no further vertex, so it cannot be
// subdivided.
inline std::vector<Triangle> classify_triangles(const Triangulation& t) {
  const int n = t.n();
  auto polygon_side = [&](int u, int v) { return v - u == 1 || (u == 1 && v == n); };
  auto connected = [&](int u, int v) {
    return polygon_side(u, v) || t.has_diagonal(Diagonal(u, v));
  };
  std::vector<Triangle> out;
  for (int p = 1; p <= n; ++p)
    for (int q = p + 1; q <= n; ++q) {
      if (!connected(p, q)) continue;
      for (int r = q + 1; r <= n; ++r) {
        if (!connected(q, r) || !connected(p, r)) continue;
        Triangle tri;
        tri.vertices = {p, q, r};
        tri.polygon_sides = (polygon_side(p, q) ? 1 : 0) + (polygon_side(q, r) ? 1 : 0) +
                            (polygon_side(p, r) ? 1 : 0);
        tri.kind = tri.polygon_sides == 0
                       ? TriangleKind::inner
                       : (tri.polygon_sides == 1 ? TriangleKind::outer : TriangleKind::border);
        out.push_back(tri);
      }
    }
  if (out.size() != static_cast<std::size_t>(n - 2))
    throw std::logic_error("classify_triangles: face count mismatch");
  return out;
}

enum class Interp { dual, neighboring, intersecting };

inline LabelSet diagonal_markings(int n, const Diagonal& d) {
  auto next = [&](int v) { return v == n ? 1 : v + 1; };
  LabelSet m{d.a, next(d.a), d.b, next(d.b)};
  std::sort(m.begin(), m.end());
  return m;
}

inline CrossRatio diagonal_crossratio(int n, const Diagonal& d, Interp interp,
                                      Rational length) {
  auto next = [&](int v) { return v == n ? 1 : v + 1; };
  const int a = d.a, a1 = next(d.a), b = d.b, b1 = next(d.b);
  switch (interp) {
    case Interp::dual:         return CrossRatio(a, b1, a1, b, std::move(length));
    case Interp::neighboring:  return CrossRatio(a, a1, b, b1, std::move(length));
    case Interp::intersecting: return CrossRatio(a, b, a1, b1, std::move(length));
  }
  throw std::invalid_argument("diagonal_crossratio: unknown reading");
}

// One condition per diagonal, aligned with the canonical diagonals() order.
inline CrossRatioSet derive_crossratios(const Triangulation& t,
                                        const std::vector<Interp>& interps,
                                        const std::vector<Rational>& lengths) {
  if (interps.size() != t.diagonals().size() || lengths.size() != t.diagonals().size())
    throw std::invalid_argument("derive_crossratios: need one reading and one length per diagonal");
  std::vector<CrossRatio> items;
  items.reserve(t.diagonals().size());
  for (std::size_t i = 0; i < t.diagonals().size(); ++i)
    items.push_back(diagonal_crossratio(t.n(), t.diagonals()[i], interps[i], lengths[i]));
  return CrossRatioSet(t.n(), std::move(items));
}

inline CrossRatioSet derive_crossratios(const Triangulation& t, Interp interp,
                                        const std::vector<Rational>& lengths) {
  return derive_crossratios(t, std::vector<Interp>(t.diagonals().size(), interp), lengths);
}

inline bool strict_triangle_inequalities(const Rational& a, const Rational& b,
                                         const Rational& c) {
  return a < b + c && b < a + c && c < a + b;
}

namespace detail {

// A sub-polygon produced by splitting along outer triangles, kept in the
// original polygon's terms: em[t] is the marking of piece edge t (0-based,
// clockwise), vid[t] the original vertex between piece edges t and t+1, and
// diags holds the internal diagonals as original vertex pairs. A cut chord
// is a piece edge like any other; it carries the marking of the polygon edge
// it replaces, so conditions derived inside the piece equal the originals.
struct WorkPiece {
  std::vector<Label> em;
  std::vector<int> vid;
  std::vector<Diagonal> diags;

  std::size_t size() const { return em.size(); }
};

inline WorkPiece whole_polygon_piece(const Triangulation& t) {
  WorkPiece p;
  p.em.resize(static_cast<std::size_t>(t.n()));
  p.vid.resize(static_cast<std::size_t>(t.n()));
  for (int i = 0; i < t.n(); ++i) {
    p.em[static_cast<std::size_t>(i)] = i + 1;
    p.vid[static_cast<std::size_t>(i)] = i + 1;
  }
  p.diags = t.diagonals();
  return p;
}

struct PieceTriangle {
  std::array<std::size_t, 3> pos;  // vertex positions, ascending
  int boundary_sides = 0;
};

inline std::vector<PieceTriangle> piece_triangles(const WorkPiece& p) {
  const std::size_t m = p.size();
  auto boundary = [&](std::size_t u, std::size_t v) {
    return v - u == 1 || (u == 0 && v == m - 1);
  };
  auto connected = [&](std::size_t u, std::size_t v) {
    return boundary(u, v) ||
           std::find(p.diags.begin(), p.diags.end(), Diagonal(p.vid[u], p.vid[v])) !=
               p.diags.end();
  };
  std::vector<PieceTriangle> out;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!connected(a, b)) continue;
      for (std::size_t c = b + 1; c < m; ++c) {
        if (!connected(b, c) || !connected(a, c)) continue;
        PieceTriangle tri;
        tri.pos = {a, b, c};
        tri.boundary_sides = (boundary(a, b) ? 1 : 0) + (boundary(b, c) ? 1 : 0) +
                             (boundary(a, c) ? 1 : 0);
        out.push_back(tri);
      }
    }
  if (out.size() + 2 != m)
    throw std::logic_error("piece_triangles: face count mismatch");
  return out;
}

struct PieceSplit {
  WorkPiece x, y;
  std::array<Label, 3> anchor;  // {i1, i2, i3} markings shared by both pieces
};

// Split the piece along its first outer triangle, if any. With the triangle
// (p, p+1, w) whose boundary side is the edge e1 = p+1: i1 = em[e1], and the
// opposite vertex w carries the markings i2 = em[w], i3 = em[w+1]. The X
// piece keeps the edges e1..w plus a chord marked i3 (the cut diagonal
// {vid[p], vid[w]}); the Y piece keeps the edges w+1..e1 plus a chord marked
// i2 (the cut diagonal {vid[p+1], vid[w]}). Both keep the split triangle as
// a border triangle.
inline std::optional<PieceSplit> split_once(const WorkPiece& piece) {
  const std::size_t m = piece.size();
  std::optional<PieceTriangle> outer;
  for (const auto& tri : piece_triangles(piece))
    if (tri.boundary_sides == 1) { outer = tri; break; }
  if (!outer) return std::nullopt;

  auto boundary = [&](std::size_t u, std::size_t v) {
    return v - u == 1 || (u == 0 && v == m - 1);
  };
  // Orient the triangle: (p, p+1 mod m, w) with the boundary side first.
  std::size_t p = 0, w = 0;
  const auto& v = outer->pos;
  if (boundary(v[0], v[1]) && v[1] - v[0] == 1) { p = v[0]; w = v[2]; }
  else if (boundary(v[1], v[2]) && v[2] - v[1] == 1) { p = v[1]; w = v[0]; }
  else { p = v[2]; w = v[1]; }  // wrap pair (0, m-1): p = m-1, successor 0

  const std::size_t e1 = (p + 1) % m;
  const std::size_t w1 = (w + 1) % m;
  const Label i1 = piece.em[e1];
  const Label i2 = piece.em[w];
  const Label i3 = piece.em[w1];
  const Diagonal cut_x(piece.vid[p], piece.vid[w]);        // becomes X's chord
  const Diagonal cut_y(piece.vid[(p + 1) % m], piece.vid[w]);  // becomes Y's chord

  auto walk = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> idx;
    for (std::size_t t = from;; t = (t + 1) % m) {
      idx.push_back(t);
      if (t == to) break;
    }
    return idx;
  };

  PieceSplit out;
  out.anchor = {i1, i2, i3};

  const auto xs = walk(e1, w);
  out.x.em.reserve(xs.size() + 1);
  out.x.vid.reserve(xs.size() + 1);
  for (std::size_t t : xs) {
    out.x.em.push_back(piece.em[t]);
    out.x.vid.push_back(piece.vid[t]);
  }
  out.x.em.push_back(i3);
  out.x.vid.push_back(piece.vid[p]);  // closing vertex between the chord and e1

  const auto ys = walk(w1, e1);
  out.y.em.reserve(ys.size() + 1);
  out.y.vid.reserve(ys.size() + 1);
  for (std::size_t t : ys) {
    out.y.em.push_back(piece.em[t]);
    out.y.vid.push_back(piece.vid[t]);
  }
  out.y.em.push_back(i2);
  out.y.vid.push_back(piece.vid[w]);  // closing vertex between the chord and w+1

  auto inside = [](const std::vector<int>& ids, const Diagonal& d) {
    return std::find(ids.begin(), ids.end(), d.a) != ids.end() &&
           std::find(ids.begin(), ids.end(), d.b) != ids.end();
  };
  for (const auto& d : piece.diags) {
    if (d == cut_x || d == cut_y) {
      // cut_x stays internal to Y, cut_y stays internal to X.
      (d == cut_x ? out.y : out.x).diags.push_back(d);
      continue;
    }
    if (inside(out.x.vid, d)) out.x.diags.push_back(d);
    else out.y.diags.push_back(d);
  }
  if (out.x.diags.size() + 3 != out.x.size() || out.y.diags.size() + 3 != out.y.size())
    throw std::logic_error("split_once: diagonal count mismatch");
  return out;
}

inline void split_fully(const WorkPiece& piece, std::vector<WorkPiece>& out) {
  if (auto s = split_once(piece)) {
    split_fully(s->x, out);
    split_fully(s->y, out);
  } else {
    out.push_back(piece);
  }
}

}  // namespace detail

// A no-outer-triangle piece of the polygon: the shape relabeled onto a
// fresh 1..m polygon, plus the map sending its edges back to the original
// markings (edge_markings[t-1] is the original marking of piece edge t).
struct TriangulationPiece {
  Triangulation shape;
  LabelSet edge_markings;
};

// Split along outer triangles until none remain; pieces appear in recursion
// order (the side between i1 and i2 first). Sizes are always even and the
// internal diagonals are conserved across the decomposition.
inline std::vector<TriangulationPiece> split_at_outer(const Triangulation& t) {
  std::vector<detail::WorkPiece> raw;
  detail::split_fully(detail::whole_polygon_piece(t), raw);
  std::vector<TriangulationPiece> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    const int m = static_cast<int>(p.size());
    auto pos_of = [&](int vertex) {
      auto it = std::find(p.vid.begin(), p.vid.end(), vertex);
      if (it == p.vid.end()) throw std::logic_error("split_at_outer: lost vertex");
      return static_cast<int>(it - p.vid.begin()) + 1;
    };
    std::vector<Diagonal> diags;
    diags.reserve(p.diags.size());
    for (const auto& d : p.diags) diags.emplace_back(pos_of(d.a), pos_of(d.b));
    out.push_back(TriangulationPiece{Triangulation(m, std::move(diags)), p.em});
  }
  return out;
}

}  // namespace tropcross
