#include "ffsieve/gfpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffsieve {
namespace {

bool isPrime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<std::int64_t>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Polynomials over the prime field, little-endian int coefficients in [0, p).
// Only used to validate/build the extension modulus h.
using PPoly = std::vector<int>;

PPoly ptrim(PPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

PPoly pmod(PPoly a, const PPoly& b, int p) {
  a = ptrim(std::move(a));
  int pinv = 1;  // inverse of leading coefficient of b
  for (int x = 1; x < p; ++x)
    if (x * b.back() % p == 1) pinv = x;
  while (a.size() >= b.size()) {
    int c = a.back() * pinv % p;
    size_t s = a.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j)
      a[s + j] = ((a[s + j] - c * b[j]) % p + p) % p;
    a = ptrim(std::move(a));
  }
  return a;
}

// Trial division: no monic factor of degree <= d/2.
bool primeIrreducible(const PPoly& f, int p) {
  int d = static_cast<int>(f.size()) - 1;
  if (d < 1) return false;
  for (int e = 1; e <= d / 2; ++e) {
    std::int64_t total = 1;
    for (int i = 0; i < e; ++i) total *= p;
    for (std::int64_t idx = 0; idx < total; ++idx) {
      PPoly g(static_cast<size_t>(e) + 1, 0);
      std::int64_t t = idx;
      for (int i = 0; i < e; ++i) {
        g[static_cast<size_t>(i)] = static_cast<int>(t % p);
        t /= p;
      }
      g[static_cast<size_t>(e)] = 1;
      if (pmod(f, g, p).empty()) return false;
    }
  }
  return true;
}

PPoly defaultModulus(int p, int m) {
  // First irreducible monic of degree m in counting order (c_0 fastest).
  std::int64_t total = 1;
  for (int i = 0; i < m; ++i) total *= p;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    PPoly h(static_cast<size_t>(m) + 1, 0);
    std::int64_t t = idx;
    for (int i = 0; i < m; ++i) {
      h[static_cast<size_t>(i)] = static_cast<int>(t % p);
      t /= p;
    }
    h[static_cast<size_t>(m)] = 1;
    if (primeIrreducible(h, p)) return h;
  }
  throw std::logic_error("no irreducible modulus found");
}

}  // namespace

FieldConfig::FieldConfig(int p, int m, std::vector<int> h) : p_(p), m_(m) {
  if (!isPrime(p)) throw std::invalid_argument("FieldConfig: p must be prime");
  if (m < 1) throw std::invalid_argument("FieldConfig: m must be >= 1");
  q_ = 1;
  for (int i = 0; i < m; ++i) {
    q_ *= p;
    if (q_ > kMaxQ) throw std::invalid_argument("FieldConfig: q exceeds supported scale");
  }
  if (m == 1) {
    h_ = {0, 1};
  } else if (h.empty()) {
    h_ = defaultModulus(p, m);
  } else {
    if (static_cast<int>(h.size()) != m + 1)
      throw std::invalid_argument("FieldConfig: h must have length m+1");
    for (int c : h)
      if (c < 0 || c >= p) throw std::invalid_argument("FieldConfig: h coefficients must lie in [0, p)");
    if (h.back() != 1) throw std::invalid_argument("FieldConfig: h must be monic");
    if (!primeIrreducible(h, p)) throw std::invalid_argument("FieldConfig: h must be irreducible");
    h_ = std::move(h);
  }
  buildTables();
}

void FieldConfig::buildTables() {
  const int q = static_cast<int>(q_);
  add_.assign(static_cast<size_t>(q) * q, 0);
  mul_.assign(static_cast<size_t>(q) * q, 0);
  neg_.assign(q, 0);
  inv_.assign(q, 0);
  trace_.assign(q, 0);

  // index <-> coords: lexicographic rank, c_0 most significant.
  auto coordsOf = [&](int idx) {
    std::vector<int> c(static_cast<size_t>(m_));
    for (int i = m_ - 1; i >= 0; --i) {
      c[static_cast<size_t>(i)] = idx % p_;
      idx /= p_;
    }
    return c;
  };
  auto indexOf = [&](const std::vector<int>& c) {
    int idx = 0;
    for (int i = 0; i < m_; ++i) idx = idx * p_ + c[static_cast<size_t>(i)];
    return idx;
  };

  std::vector<int> oneC(static_cast<size_t>(m_), 0);
  oneC[0] = 1;
  one_ = indexOf(oneC);

  for (int a = 0; a < q; ++a) {
    auto ca = coordsOf(a);
    std::vector<int> nc(static_cast<size_t>(m_));
    for (int i = 0; i < m_; ++i) nc[static_cast<size_t>(i)] = (p_ - ca[static_cast<size_t>(i)]) % p_;
    neg_[static_cast<size_t>(a)] = indexOf(nc);
    for (int b = 0; b < q; ++b) {
      auto cb = coordsOf(b);
      std::vector<int> sc(static_cast<size_t>(m_));
      for (int i = 0; i < m_; ++i)
        sc[static_cast<size_t>(i)] = (ca[static_cast<size_t>(i)] + cb[static_cast<size_t>(i)]) % p_;
      add_[static_cast<size_t>(a) * q + b] = indexOf(sc);

      // product of coordinate polynomials reduced mod h
      std::vector<int> prod(static_cast<size_t>(2 * m_ - 1), 0);
      for (int i = 0; i < m_; ++i)
        if (ca[static_cast<size_t>(i)])
          for (int j = 0; j < m_; ++j)
            prod[static_cast<size_t>(i + j)] =
                (prod[static_cast<size_t>(i + j)] + ca[static_cast<size_t>(i)] * cb[static_cast<size_t>(j)]) % p_;
      for (int d = 2 * m_ - 2; d >= m_; --d) {
        int c = prod[static_cast<size_t>(d)];
        if (c) {
          prod[static_cast<size_t>(d)] = 0;
          for (int j = 0; j < m_; ++j)
            prod[static_cast<size_t>(d - m_ + j)] =
                ((prod[static_cast<size_t>(d - m_ + j)] - c * h_[static_cast<size_t>(j)]) % p_ + p_) % p_;
        }
      }
      std::vector<int> pc(prod.begin(), prod.begin() + m_);
      mul_[static_cast<size_t>(a) * q + b] = indexOf(pc);
    }
  }

  for (int a = 1; a < q; ++a) {
    std::int64_t e = q_ - 2;
    int r = one_, b = a;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    inv_[static_cast<size_t>(a)] = r;
  }

  for (int a = 0; a < q; ++a) {
    int acc = a, cur = a;
    for (int i = 1; i < m_; ++i) {
      cur = pow(cur, p_);
      acc = add(acc, cur);
    }
    auto c = coordsOf(acc);
    for (int i = 1; i < m_; ++i)
      if (c[static_cast<size_t>(i)] != 0) throw std::logic_error("trace left the prime field");
    trace_[static_cast<size_t>(a)] = c[0];
  }
}

int FieldConfig::inv(int a) const {
  if (a == 0) throw std::domain_error("FieldConfig::inv of zero");
  return inv_[static_cast<size_t>(a)];
}

int FieldConfig::pow(int a, std::int64_t e) const {
  int r = one_, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::vector<int> FieldConfig::coords(int idx) const {
  std::vector<int> c(static_cast<size_t>(m_));
  for (int i = m_ - 1; i >= 0; --i) {
    c[static_cast<size_t>(i)] = idx % p_;
    idx /= p_;
  }
  return c;
}

int FieldConfig::fromCoords(const std::vector<int>& coords) const {
  if (static_cast<int>(coords.size()) != m_)
    throw std::invalid_argument("FieldConfig::fromCoords: wrong length");
  int idx = 0;
  for (int i = 0; i < m_; ++i) {
    int c = coords[static_cast<size_t>(i)];
    if (c < 0 || c >= p_) throw std::invalid_argument("FieldConfig::fromCoords: out of range");
    idx = idx * p_ + c;
  }
  return idx;
}

int FieldConfig::fromPrime(int c) const {
  std::vector<int> coords(static_cast<size_t>(m_), 0);
  coords[0] = ((c % p_) + p_) % p_;
  return fromCoords(coords);
}

std::string FieldConfig::elementName(int idx) const { return std::to_string(idx); }

Poly Poly::shift(const FieldConfig& cfg, int k) {
  std::vector<int> c(static_cast<size_t>(k) + 1, 0);
  c.back() = cfg.one();
  return Poly(std::move(c));
}

Poly add(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  int n = std::max(a.degree(), b.degree()) + 1;
  if (n <= 0) return Poly::zero();
  std::vector<int> c(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = cfg.add(a.coeff(i), b.coeff(i));
  return Poly(std::move(c));
}

Poly negate(const FieldConfig& cfg, const Poly& a) {
  std::vector<int> c(a.coeffs());
  for (int& x : c) x = cfg.neg(x);
  return Poly(std::move(c));
}

Poly sub(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  return add(cfg, a, negate(cfg, b));
}

Poly mul(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  if (a.isZero() || b.isZero()) return Poly::zero();
  std::vector<int> c(static_cast<size_t>(a.degree() + b.degree() + 1), 0);
  for (int i = 0; i <= a.degree(); ++i) {
    int ai = a.coeff(i);
    if (ai == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) {
      size_t k = static_cast<size_t>(i + j);
      c[k] = cfg.add(c[k], cfg.mul(ai, b.coeff(j)));
    }
  }
  return Poly(std::move(c));
}

Poly mulScalar(const FieldConfig& cfg, const Poly& a, int element) {
  std::vector<int> c(a.coeffs());
  for (int& x : c) x = cfg.mul(x, element);
  return Poly(std::move(c));
}

DivModResult divmod(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  if (b.isZero()) throw std::domain_error("divmod: zero divisor");
  if (a.degree() < b.degree()) return {Poly::zero(), a};
  std::vector<int> rem(a.coeffs());
  std::vector<int> quo(static_cast<size_t>(a.degree() - b.degree() + 1), 0);
  int binv = cfg.inv(b.leading());
  for (int d = a.degree(); d >= b.degree(); --d) {
    int lead = rem[static_cast<size_t>(d)];
    if (lead == 0) continue;
    int c = cfg.mul(lead, binv);
    int s = d - b.degree();
    quo[static_cast<size_t>(s)] = c;
    for (int j = 0; j <= b.degree(); ++j) {
      size_t k = static_cast<size_t>(s + j);
      rem[k] = cfg.sub(rem[k], cfg.mul(c, b.coeff(j)));
    }
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly mod(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  return divmod(cfg, a, b).remainder;
}

bool isMonic(const FieldConfig& cfg, const Poly& a) {
  return !a.isZero() && a.leading() == cfg.one();
}

Poly makeMonic(const FieldConfig& cfg, const Poly& a) {
  if (a.isZero()) return a;
  return mulScalar(cfg, a, cfg.inv(a.leading()));
}

Poly gcd(const FieldConfig& cfg, Poly a, Poly b) {
  while (!b.isZero()) {
    Poly r = mod(cfg, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return makeMonic(cfg, a);
}

Poly lcm(const FieldConfig& cfg, const Poly& a, const Poly& b) {
  if (a.isZero() || b.isZero()) throw std::invalid_argument("lcm: zero input");
  Poly g = gcd(cfg, a, b);
  return makeMonic(cfg, divmod(cfg, mul(cfg, a, b), g).quotient);
}

Poly powInt(const FieldConfig& cfg, const Poly& a, int e) {
  if (e < 0) throw std::invalid_argument("powInt: negative exponent");
  Poly r = Poly::one(cfg);
  for (int i = 0; i < e; ++i) r = mul(cfg, r, a);
  return r;
}

bool polyLess(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  return false;
}

std::vector<Poly> enumerateMonic(const FieldConfig& cfg, int d) {
  if (d < 0) throw std::invalid_argument("enumerateMonic: negative degree");
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) total *= cfg.q();
  std::vector<Poly> out;
  out.reserve(static_cast<size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<int> c(static_cast<size_t>(d) + 1, 0);
    std::int64_t t = idx;
    for (int i = 0; i < d; ++i) {
      c[static_cast<size_t>(i)] = static_cast<int>(t % cfg.q());
      t /= cfg.q();
    }
    c[static_cast<size_t>(d)] = cfg.one();
    out.emplace_back(std::move(c));
  }
  return out;
}

std::vector<Poly> enumeratePolysBelow(const FieldConfig& cfg, int bound) {
  if (bound < 0) throw std::invalid_argument("enumeratePolysBelow: negative bound");
  std::int64_t total = 1;
  for (int i = 0; i < bound; ++i) total *= cfg.q();
  std::vector<Poly> out;
  out.reserve(static_cast<size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<int> c(static_cast<size_t>(bound), 0);
    std::int64_t t = idx;
    for (int i = 0; i < bound; ++i) {
      c[static_cast<size_t>(i)] = static_cast<int>(t % cfg.q());
      t /= cfg.q();
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

bool isIrreducible(const FieldConfig& cfg, const Poly& f) {
  if (f.degree() < 1) return false;
  for (int e = 1; e <= f.degree() / 2; ++e)
    for (const Poly& g : enumerateMonic(cfg, e))
      if (mod(cfg, f, g).isZero()) return false;
  return true;
}

std::vector<Poly> monicIrreducibles(const FieldConfig& cfg, int maxDeg) {
  std::vector<Poly> out;
  for (int d = 1; d <= maxDeg; ++d)
    for (const Poly& f : enumerateMonic(cfg, d))
      if (isIrreducible(cfg, f)) out.push_back(f);
  return out;
}

std::int64_t eulerPhi(const FieldConfig& cfg, const Poly& f) {
  if (f.isZero()) throw std::invalid_argument("eulerPhi: zero input");
  Poly rest = makeMonic(cfg, f);
  auto qpow = [&](int d) {
    std::int64_t v = 1;
    for (int i = 0; i < d; ++i) v *= cfg.q();
    return v;
  };
  std::int64_t phi = 1;
  // Trial division by irreducibles of degree <= deg(rest)/2; phi(P^e) =
  // q^(d e) - q^(d (e-1)).  Whatever survives is itself irreducible.
  for (int d = 1; rest.degree() >= 2 * d; ++d) {
    for (const Poly& P : enumerateMonic(cfg, d)) {
      if (!isIrreducible(cfg, P)) continue;
      int e = 0;
      while (rest.degree() >= d && mod(cfg, rest, P).isZero()) {
        rest = divmod(cfg, rest, P).quotient;
        ++e;
      }
      if (e > 0) phi *= qpow(d * e) - qpow(d * (e - 1));
    }
  }
  if (rest.degree() >= 1) phi *= qpow(rest.degree()) - 1;
  return phi;
}

std::string polyToString(const FieldConfig& cfg, const Poly& f) {
  if (f.isZero()) return "0";
  std::string s;
  for (int i = f.degree(); i >= 0; --i) {
    int c = f.coeff(i);
    if (c == 0) continue;
    if (!s.empty()) s += "+";
    bool unit = (c == cfg.one());
    if (i == 0) {
      s += cfg.elementName(c);
    } else {
      if (!unit) s += cfg.elementName(c) + "*";
      s += (i == 1) ? "t" : "t^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace ffsieve
