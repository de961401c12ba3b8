#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ffsieve {

// Characteristic-p arithmetic for F_q with q = p^m, plus polynomial algebra
// over F_q.  Elements are addressed by their canonical index: the rank of the
// coordinate vector (c_0, ..., c_{m-1}) w.r.t. the basis 1, x, ..., x^{m-1}
// in lexicographic order, i.e. index = sum c_i * p^(m-1-i).  All arithmetic
// is table-driven; tables are built once per FieldConfig.
class FieldConfig {
 public:
  // Largest supported field size.  Tables are O(q^2); desk scale is q <= 9.
  static constexpr std::int64_t kMaxQ = 512;

  // h: coefficients of the modulus over F_p, little-endian, length m+1,
  // monic, irreducible.  Empty selects the canonically smallest irreducible
  // monic of degree m (first in counting order).  For m == 1, h is x.
  FieldConfig(int p, int m = 1, std::vector<int> h = {});

  int p() const { return p_; }
  int m() const { return m_; }
  std::int64_t q() const { return q_; }
  const std::vector<int>& modulus() const { return h_; }

  int zero() const { return 0; }
  int one() const { return one_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int inv(int a) const;

  // Trace to the prime field: sum of the m Frobenius powers.  The result is
  // an element of F_p, returned as an integer in [0, p).
  int trace(int a) const { return trace_[a]; }

  int pow(int a, std::int64_t e) const;

  std::vector<int> coords(int idx) const;
  int fromCoords(const std::vector<int>& coords) const;

  // Embedding of F_p: scalar c as field element index.
  int fromPrime(int c) const;

  std::string elementName(int idx) const;

 private:
  void buildTables();

  int p_, m_;
  std::int64_t q_;
  std::vector<int> h_;
  int one_;
  std::vector<int> add_, mul_, neg_, inv_, trace_;
};

// Element view exposing the coordinate vector; used at API boundaries where
// the basis representation matters (tests, serialization).
struct FieldElement {
  int index = 0;
  std::vector<int> coords;

  static FieldElement of(const FieldConfig& cfg, int idx) {
    return FieldElement{idx, cfg.coords(idx)};
  }
};

// Polynomial over F_q: little-endian vector of element indices with no zero
// leading coefficient.  The zero polynomial has an empty vector and degree
// kNegInfDegree, which compares below every attainable degree.
class Poly {
 public:
  static constexpr int kNegInfDegree = std::numeric_limits<int>::min() / 2;

  Poly() = default;
  explicit Poly(std::vector<int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly zero() { return Poly(); }
  static Poly constant(int element) { return Poly(std::vector<int>{element}); }
  static Poly one(const FieldConfig& cfg) { return Poly({cfg.one()}); }
  // t^k
  static Poly shift(const FieldConfig& cfg, int k);

  bool isZero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? kNegInfDegree : static_cast<int>(c_.size()) - 1; }
  int coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0;
  }
  int leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<int>& coeffs() const { return c_; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<int> c_;
};

struct DivModResult {
  Poly quotient, remainder;
};

Poly add(const FieldConfig& cfg, const Poly& a, const Poly& b);
Poly sub(const FieldConfig& cfg, const Poly& a, const Poly& b);
Poly negate(const FieldConfig& cfg, const Poly& a);
Poly mul(const FieldConfig& cfg, const Poly& a, const Poly& b);
Poly mulScalar(const FieldConfig& cfg, const Poly& a, int element);

// Euclidean division; throws on zero divisor.  a = q*b + r with
// deg r < deg b.
DivModResult divmod(const FieldConfig& cfg, const Poly& a, const Poly& b);
Poly mod(const FieldConfig& cfg, const Poly& a, const Poly& b);

bool isMonic(const FieldConfig& cfg, const Poly& a);
Poly makeMonic(const FieldConfig& cfg, const Poly& a);

// gcd/lcm are returned monic.  gcd(0, 0) = 0; lcm of a zero input throws.
Poly gcd(const FieldConfig& cfg, Poly a, Poly b);
Poly lcm(const FieldConfig& cfg, const Poly& a, const Poly& b);

Poly powInt(const FieldConfig& cfg, const Poly& a, int e);

// Canonical order: by degree, then by the little-endian coefficient counter
// (coefficient 0 least significant, digits compared by element index).
bool polyLess(const Poly& a, const Poly& b);

// All monic polynomials of degree d in canonical counting order.
std::vector<Poly> enumerateMonic(const FieldConfig& cfg, int d);
// All polynomials of degree < bound (q^bound of them) in counting order.
std::vector<Poly> enumeratePolysBelow(const FieldConfig& cfg, int bound);
// Monic irreducibles of degree <= maxDeg, canonical order.
std::vector<Poly> monicIrreducibles(const FieldConfig& cfg, int maxDeg);
bool isIrreducible(const FieldConfig& cfg, const Poly& f);

// Number of residues r mod f with gcd(r, f) = 1; eulerPhi(1) = 1.
// Computed from the factorization of f; throws on zero input.
std::int64_t eulerPhi(const FieldConfig& cfg, const Poly& f);

// Display form like "t^3+2*t+1"; coefficients are element indices.
std::string polyToString(const FieldConfig& cfg, const Poly& f);

}  // namespace ffsieve
