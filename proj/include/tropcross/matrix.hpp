#pragma once

// Exact integer matrices with fraction-free (Bareiss) elimination.
// No floating point: determinants are arbitrary-precision integers, linear
// solves return exact rationals. A checked 64-bit kernel handles the common
// small case and falls back to the GMP kernel as soon as any product or
// difference would overflow, so results are always exact.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace tropcross {

class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1 || rows > 64 || cols > 64)
      throw std::invalid_argument("IntMatrix: dimensions must be in [1, 64]");
    a_.resize(rows * cols, BigInt(0));
  }

  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    if (rows.empty()) throw std::invalid_argument("IntMatrix: no rows");
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<BigInt> a_;
};

namespace detail {

// Bareiss elimination over a row-major n x n scratch copy. Entry updates are
// M(i,j) <- (M(i,j)*pivot - M(i,k)*M(k,j)) / prev_pivot with exact division.
inline BigInt bareiss_det_big(std::vector<BigInt> m, std::size_t n) {
  if (n == 0) return BigInt(1);
  int sign = 1;
  BigInt prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m[k * n + k]) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m[p * n + k]) == 0) ++p;
      if (p == n) return BigInt(0);
      for (std::size_t j = k; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
      sign = -sign;
    }
    const BigInt& pivot = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m[i * n + j] * pivot - m[i * n + k] * m[k * n + j];
        mpz_divexact(m[i * n + j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i * n + k] = 0;
    }
    prev = pivot;
  }
  BigInt det = m[n * n - 1];
  if (sign < 0) det = -det;
  return det;
}

// Same elimination over int64 with overflow checks. Returns nullopt when any
// intermediate would overflow; the caller retries with the GMP kernel.
inline std::optional<std::int64_t> bareiss_det_i64(std::vector<std::int64_t> m,
                                                   std::size_t n) {
  if (n == 0) return std::int64_t{1};
  int sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p * n + k] == 0) ++p;
      if (p == n) return std::int64_t{0};
      for (std::size_t j = k; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
      sign = -sign;
    }
    const std::int64_t pivot = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        std::int64_t a, b, t;
        if (__builtin_mul_overflow(m[i * n + j], pivot, &a)) return std::nullopt;
        if (__builtin_mul_overflow(m[i * n + k], m[k * n + j], &b)) return std::nullopt;
        if (__builtin_sub_overflow(a, b, &t)) return std::nullopt;
        m[i * n + j] = t / prev;  // exact by the Bareiss identity
      }
      m[i * n + k] = 0;
    }
    prev = pivot;
  }
  std::int64_t det = m[n * n - 1];
  if (sign < 0) {
    if (__builtin_sub_overflow(std::int64_t{0}, det, &det)) return std::nullopt;
  }
  return det;
}

}  // namespace detail

inline BigInt determinant(const IntMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("determinant: matrix must be square");
  const std::size_t n = m.rows();
  bool small = true;
  std::vector<std::int64_t> s(n * n);
  for (std::size_t i = 0; i < n && small; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.at(i, j).fits_slong_p()) { small = false; break; }
      s[i * n + j] = m.at(i, j).get_si();
    }
  if (small)
    if (auto d = detail::bareiss_det_i64(std::move(s), n)) return BigInt(*d);
  std::vector<BigInt> big(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) big[i * n + j] = m.at(i, j);
  return detail::bareiss_det_big(std::move(big), n);
}

// Exact solve of m * x = rhs for square m. Returns nullopt when m is
// singular. Cramer's rule with Bareiss determinants: after clearing rhs
// denominators, x_j = det(m with column j replaced) / (det(m) * lcm).
inline std::optional<std::vector<Rational>> solve(const IntMatrix& m,
                                                  const std::vector<Rational>& rhs) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve: matrix must be square");
  const std::size_t n = m.rows();
  if (rhs.size() != n) throw std::invalid_argument("solve: rhs size mismatch");

  BigInt det = determinant(m);
  if (sgn(det) == 0) return std::nullopt;

  BigInt lcm(1);
  for (const auto& r : rhs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.den().get_mpz_t());
  std::vector<BigInt> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rhs[i].num() * (lcm / rhs[i].den());

  std::vector<Rational> x;
  x.reserve(n);
  std::vector<BigInt> scratch(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < n; ++c)
        scratch[i * n + c] = (c == j) ? b[i] : m.at(i, c);
    BigInt dj = detail::bareiss_det_big(scratch, n);
    x.emplace_back(dj, det * lcm);
  }
  return x;
}

}  // namespace tropcross
