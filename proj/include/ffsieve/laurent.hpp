#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "ffsieve/gfpoly.hpp"
#include "ffsieve/rational.hpp"

namespace ffsieve {

// Tail of the expansion of r/f at infinity: coefficients c_1..c_D of
// t^-1, ..., t^-D as element indices.  Expansion is F_q-linear in r/f.
struct FracExpansion {
  std::vector<int> coeffs;
  int depth() const { return static_cast<int>(coeffs.size()); }
};

// Long division of (r mod f) * t^D by f; the low quotient coefficients are
// the tail.  f must be monic and nonzero.
FracExpansion fracExpansion(const FieldConfig& cfg, const Poly& r, const Poly& f, int depth);

// A p-th root of unity carried by its exponent so that products and
// cancellations stay exact; realized to complex only on demand.
struct CharValue {
  int p = 2;
  int exponent = 0;  // in [0, p)
  std::complex<double> value() const;
};

// e(r/f) = exp(2 pi i Tr(c_1) / p) where c_1 is the t^-1 coefficient.
CharValue eChar(const FieldConfig& cfg, const Poly& r, const Poly& f);

// Character of the torus point x = (r_i/f_i) evaluated at the lattice tuple
// g: coordinate exponents add mod p.
CharValue psi(const FieldConfig& cfg, const std::vector<std::pair<Poly, Poly>>& x,
              const std::vector<Poly>& g);

// Distance of r/f to the nearest polynomial: 0 when f divides r, otherwise
// q^-j with j = deg f - deg(r mod f) >= 1.  The exponent form avoids
// rounding; the Rational form is exact as well.
std::optional<int> torusNormExponent(const FieldConfig& cfg, const Poly& r, const Poly& f);
Rational torusNorm(const FieldConfig& cfg, const Poly& r, const Poly& f);
bool torusNormLeq(const FieldConfig& cfg, const Poly& r, const Poly& f, int N);

}  // namespace ffsieve
