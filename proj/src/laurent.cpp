#include "ffsieve/laurent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ffsieve {

FracExpansion fracExpansion(const FieldConfig& cfg, const Poly& r, const Poly& f, int depth) {
  if (!isMonic(cfg, f)) throw std::invalid_argument("fracExpansion: denominator must be monic");
  if (depth < 0) throw std::invalid_argument("fracExpansion: negative depth");
  FracExpansion out;
  out.coeffs.assign(static_cast<size_t>(depth), 0);
  Poly s = mod(cfg, r, f);
  if (s.isZero() || depth == 0) return out;
  Poly shifted = mul(cfg, s, Poly::shift(cfg, depth));
  Poly quot = divmod(cfg, shifted, f).quotient;
  for (int j = 1; j <= depth; ++j)
    out.coeffs[static_cast<size_t>(j - 1)] = quot.coeff(depth - j);
  return out;
}

std::complex<double> CharValue::value() const {
  double angle = 2.0 * std::numbers::pi * exponent / p;
  return {std::cos(angle), std::sin(angle)};
}

CharValue eChar(const FieldConfig& cfg, const Poly& r, const Poly& f) {
  FracExpansion tail = fracExpansion(cfg, r, f, 1);
  return {cfg.p(), cfg.trace(tail.coeffs[0])};
}

CharValue psi(const FieldConfig& cfg, const std::vector<std::pair<Poly, Poly>>& x,
              const std::vector<Poly>& g) {
  if (x.size() != g.size()) throw std::invalid_argument("psi: dimension mismatch");
  int e = 0;
  for (size_t i = 0; i < x.size(); ++i)
    e = (e + eChar(cfg, mul(cfg, g[i], x[i].first), x[i].second).exponent) % cfg.p();
  return {cfg.p(), e};
}

std::optional<int> torusNormExponent(const FieldConfig& cfg, const Poly& r, const Poly& f) {
  if (!isMonic(cfg, f)) throw std::invalid_argument("torusNorm: denominator must be monic");
  Poly s = mod(cfg, r, f);
  if (s.isZero()) return std::nullopt;
  return f.degree() - s.degree();
}

Rational torusNorm(const FieldConfig& cfg, const Poly& r, const Poly& f) {
  auto j = torusNormExponent(cfg, r, f);
  if (!j) return Rational(0);
  return Rational::pow(cfg.q(), -*j);
}

bool torusNormLeq(const FieldConfig& cfg, const Poly& r, const Poly& f, int N) {
  auto j = torusNormExponent(cfg, r, f);
  return !j || *j >= N;
}

}  // namespace ffsieve
