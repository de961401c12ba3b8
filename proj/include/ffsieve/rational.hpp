#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffsieve {

// Exact rational on 128-bit integers.  All quantities in this project are
// sums of products of powers of q and q+1 with small exponents, so 128 bits
// leave several orders of magnitude of headroom; overflow still throws.
class Rational {
 public:
  using Int = __int128;

  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }
  static Rational fromInt128(Int n, Int d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return fromInt128(checkedAdd(checkedMul(a.num_, b.den_), checkedMul(b.num_, a.den_)),
                      checkedMul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return fromInt128(checkedAdd(checkedMul(a.num_, b.den_), -checkedMul(b.num_, a.den_)),
                      checkedMul(a.den_, b.den_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return fromInt128(checkedMul(a.num_, b.num_), checkedMul(a.den_, b.den_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return fromInt128(checkedMul(a.num_, b.den_), checkedMul(a.den_, b.num_));
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return checkedMul(a.num_, b.den_) < checkedMul(b.num_, a.den_);
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  double toDouble() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "num/den" with den omitted when 1; exact decimal digits.
  std::string toString() const {
    std::string s = intToString(num_);
    if (den_ != 1) s += "/" + intToString(den_);
    return s;
  }

  // base^e for integer e of either sign; base > 0.
  static Rational pow(std::int64_t base, int e) {
    if (base <= 0) throw std::invalid_argument("Rational::pow: base must be positive");
    Int v = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) v = checkedMul(v, base);
    return e >= 0 ? fromInt128(v, 1) : fromInt128(1, v);
  }

  static std::string intToString(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
      u /= 10;
    }
    return neg ? "-" + s : s;
  }

 private:
  static Int checkedMul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  static Int checkedAdd(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    unsigned __int128 a = num_ < 0 ? -static_cast<unsigned __int128>(num_) : num_;
    unsigned __int128 b = den_;
    while (b) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num_ /= static_cast<Int>(a);
      den_ /= static_cast<Int>(a);
    }
    if (num_ == 0) den_ = 1;
  }

  Int num_, den_;
};

}  // namespace ffsieve
