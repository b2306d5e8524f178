#pragma once

// Exact rational numbers on top of GMP. Every value is kept canonical:
// numerator/denominator coprime, denominator > 0.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tropcross {

using BigInt = mpz_class;

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit on purpose
  Rational(const BigInt& n) : v_(n) {}
  Rational(long num, long den) { init(BigInt(num), BigInt(den)); }
  Rational(const BigInt& num, const BigInt& den) { init(num, den); }

  const BigInt num() const { return v_.get_num(); }
  const BigInt den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  // "p/q", or just "p" when the denominator is 1.
  std::string to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  // Accepts the same forms to_string emits: optional '-', digits, optional "/digits".
  static Rational parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s), BigInt(1));
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational: malformed value '" + s + "'");
    }
  }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) {}

  void init(const BigInt& num, const BigInt& den) {
    if (sgn(den) == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num) / mpq_class(den);  // mpq_class division canonicalizes
  }

  mpq_class v_;
};

}  // namespace tropcross
