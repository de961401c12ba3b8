#pragma once

// Brute-force reference computations for tests.  Deliberately independent of
// the library's counting shortcuts: complex accumulation over literal
// enumeration only, so a bug in the exponent-class bookkeeping cannot hide.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffsieve/gfpoly.hpp"
#include "ffsieve/laurent.hpp"
#include "ffsieve/sieve.hpp"

namespace oracle {

inline std::complex<double> ballCharSum(
    const ffsieve::FieldConfig& cfg,
    const std::vector<std::pair<ffsieve::Poly, ffsieve::Poly>>& x, int N) {
  const ffsieve::BallIndex ball(cfg, static_cast<int>(x.size()), N);
  std::complex<double> acc = 0.0;
  for (std::int64_t i = 0; i < ball.size(); ++i)
    acc += ffsieve::psi(cfg, x, ball.tuple(i)).value();
  return acc;
}

inline std::int64_t bruteEulerPhi(const ffsieve::FieldConfig& cfg, const ffsieve::Poly& f) {
  std::int64_t count = 0;
  for (const ffsieve::Poly& r : ffsieve::enumeratePolysBelow(cfg, f.degree()))
    if (ffsieve::gcd(cfg, r, f) == ffsieve::Poly::one(cfg)) ++count;
  return count;
}

// Closeness through the torus-norm route, coordinate by coordinate.  The
// library's closePair uses cross multiplication instead; the two must agree.
inline bool bruteClose(const ffsieve::FieldConfig& cfg, const ffsieve::FareyPoint& x,
                       const ffsieve::FareyPoint& y, int N) {
  for (size_t c = 0; c < x.r.size(); ++c) {
    const auto d = ffsieve::subtractCoordinate(cfg, x.r[c], x.f[c], y.r[c], y.f[c]);
    if (!ffsieve::torusNormLeq(cfg, d.first, d.second, N)) return false;
  }
  return true;
}

inline std::int64_t bruteCountM(const ffsieve::FieldConfig& cfg,
                                const std::vector<ffsieve::FareyPoint>& S, int N) {
  std::int64_t best = 0;
  for (const ffsieve::FareyPoint& x : S) {
    std::int64_t c = 0;
    for (const ffsieve::FareyPoint& y : S)
      if (bruteClose(cfg, x, y, N)) ++c;
    best = std::max(best, c);
  }
  return best;
}

}  // namespace oracle
