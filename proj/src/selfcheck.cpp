#include "ffsieve/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <utility>

#include "ffsieve/laurent.hpp"
#include "ffsieve/parallel.hpp"
#include "ffsieve/prng.hpp"
#include "ffsieve/sieve.hpp"

namespace ffsieve {

namespace {

constexpr std::uint64_t kCheckSeed = 0xA11CEULL;

CheckResult mk(std::string name, bool pass, std::string observed, std::string expected) {
  CheckResult r;
  r.name = std::move(name);
  r.pass = pass;
  r.observed = std::move(observed);
  r.expected = std::move(expected);
  return r;
}

std::string countStr(std::int64_t bad, std::int64_t total) {
  return std::to_string(bad) + " failures over " + std::to_string(total) + " cases";
}

Poly randomPoly(const FieldConfig& cfg, SplitMix64& rng, int maxDeg) {
  const int len = static_cast<int>(rng.next() % static_cast<std::uint64_t>(maxDeg + 2));
  std::vector<int> c(static_cast<size_t>(len));
  for (int& v : c) v = static_cast<int>(rng.next() % static_cast<std::uint64_t>(cfg.q()));
  return Poly(std::move(c));
}

}  // namespace

bool allPass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

std::vector<CheckResult> checkFieldAlgebra(const FieldConfig& cfg) {
  const int q = static_cast<int>(cfg.q());
  const int p = cfg.p();
  std::vector<CheckResult> out;

  std::int64_t pairBad = 0, pairTotal = 0;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      ++pairTotal;
      if (cfg.add(a, b) != cfg.add(b, a) || cfg.mul(a, b) != cfg.mul(b, a)) ++pairBad;
    }
  out.push_back(mk("field.commutativity", pairBad == 0, countStr(pairBad, pairTotal), "0 failures"));

  // Associativity and distributivity: exhaustive up to q = 64, sampled above.
  std::int64_t tripleBad = 0, tripleTotal = 0;
  auto tripleCheck = [&](int a, int b, int c) {
    ++tripleTotal;
    const bool ok = cfg.add(cfg.add(a, b), c) == cfg.add(a, cfg.add(b, c)) &&
                    cfg.mul(cfg.mul(a, b), c) == cfg.mul(a, cfg.mul(b, c)) &&
                    cfg.mul(a, cfg.add(b, c)) == cfg.add(cfg.mul(a, b), cfg.mul(a, c));
    if (!ok) ++tripleBad;
  };
  if (q <= 64) {
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) tripleCheck(a, b, c);
  } else {
    SplitMix64 rng(kCheckSeed);
    for (int it = 0; it < 200000; ++it)
      tripleCheck(static_cast<int>(rng.next() % q), static_cast<int>(rng.next() % q),
                  static_cast<int>(rng.next() % q));
  }
  out.push_back(mk("field.assoc_distrib", tripleBad == 0, countStr(tripleBad, tripleTotal), "0 failures"));

  std::int64_t unitBad = 0;
  for (int a = 0; a < q; ++a) {
    if (cfg.add(a, cfg.zero()) != a || cfg.mul(a, cfg.one()) != a) ++unitBad;
    if (cfg.add(a, cfg.neg(a)) != cfg.zero()) ++unitBad;
    if (a != 0 && cfg.mul(a, cfg.inv(a)) != cfg.one()) ++unitBad;
    if (a != 0 && cfg.pow(a, cfg.q() - 1) != cfg.one()) ++unitBad;
    int s = 0;
    for (int i = 0; i < p; ++i) s = cfg.add(s, a);
    if (s != cfg.zero()) ++unitBad;
    if (cfg.fromCoords(cfg.coords(a)) != a) ++unitBad;
  }
  out.push_back(mk("field.identities", unitBad == 0, countStr(unitBad, q), "0 failures"));

  std::int64_t traceBad = 0;
  std::set<int> traceImage;
  for (int a = 0; a < q; ++a) {
    traceImage.insert(cfg.trace(a));
    if (cfg.trace(cfg.pow(a, p)) != cfg.trace(a)) ++traceBad;
    for (int b = 0; b < q; ++b)
      if (cfg.trace(cfg.add(a, b)) != (cfg.trace(a) + cfg.trace(b)) % p) ++traceBad;
  }
  const bool surjective = static_cast<int>(traceImage.size()) == p;
  out.push_back(mk("field.trace_linear_frobenius", traceBad == 0, countStr(traceBad, q), "0 failures"));
  out.push_back(mk("field.trace_surjective", surjective,
                   std::to_string(traceImage.size()) + " trace values", std::to_string(p) + " trace values"));
  return out;
}

std::vector<CheckResult> checkPolyAlgebra(const FieldConfig& cfg) {
  SplitMix64 rng(kCheckSeed);
  std::int64_t divBad = 0, gcdBad = 0, lcmBad = 0, powBad = 0;
  const int iters = 200;
  for (int it = 0; it < iters; ++it) {
    const Poly a = randomPoly(cfg, rng, 6);
    Poly b = randomPoly(cfg, rng, 4);
    if (b.isZero()) b = Poly::one(cfg);
    const DivModResult d = divmod(cfg, a, b);
    if (add(cfg, mul(cfg, d.quotient, b), d.remainder) != a || d.remainder.degree() >= b.degree())
      ++divBad;

    const Poly g = gcd(cfg, a, b);
    if (g.isZero()) {
      if (!a.isZero() || !b.isZero()) ++gcdBad;
    } else {
      if (!isMonic(cfg, g)) ++gcdBad;
      if (!a.isZero() && !mod(cfg, a, g).isZero()) ++gcdBad;
      if (!mod(cfg, b, g).isZero()) ++gcdBad;
      if (!a.isZero()) {
        const Poly l = lcm(cfg, a, b);
        if (mul(cfg, g, l) != makeMonic(cfg, mul(cfg, a, b))) ++lcmBad;
      }
    }

    const int e = static_cast<int>(rng.next() % 5);
    Poly ref = Poly::one(cfg);
    for (int i = 0; i < e; ++i) ref = mul(cfg, ref, a);
    if (powInt(cfg, a, e) != ref) ++powBad;
  }
  std::vector<CheckResult> out;
  out.push_back(mk("poly.division_identity", divBad == 0, countStr(divBad, iters), "0 failures"));
  out.push_back(mk("poly.gcd_divides_monic", gcdBad == 0, countStr(gcdBad, iters), "0 failures"));
  out.push_back(mk("poly.gcd_lcm_product", lcmBad == 0, countStr(lcmBad, iters), "0 failures"));
  out.push_back(mk("poly.pow_repeated_mul", powBad == 0, countStr(powBad, iters), "0 failures"));
  return out;
}

std::vector<CheckResult> checkPhi(const FieldConfig& cfg) {
  std::int64_t bad = 0, total = 0;
  std::int64_t residues = 1;
  for (int d = 0; d <= 3; ++d, residues *= cfg.q()) {
    if (residues > 4096) break;
    for (const Poly& f : enumerateMonic(cfg, d)) {
      std::int64_t brute = 0;
      for (const Poly& r : enumeratePolysBelow(cfg, d))
        if (gcd(cfg, r, f) == Poly::one(cfg)) ++brute;
      ++total;
      if (brute != eulerPhi(cfg, f)) ++bad;
    }
  }
  return {mk("phi.literal_count", bad == 0, countStr(bad, total), "0 failures")};
}

std::vector<CheckResult> checkCharacterAdditivity(const FieldConfig& cfg) {
  const int p = cfg.p();
  std::int64_t addBad = 0, addTotal = 0;
  std::int64_t deg = 1;
  for (int d = 1; d <= 2; ++d) {
    deg *= cfg.q();
    if (deg * deg > 4096) break;
    for (const Poly& f : enumerateMonic(cfg, d)) {
      const std::vector<Poly> rs = enumeratePolysBelow(cfg, d);
      for (const Poly& g : rs)
        for (const Poly& h : rs) {
          ++addTotal;
          const int lhs = eChar(cfg, add(cfg, g, h), f).exponent;
          const int rhs = (eChar(cfg, g, f).exponent + eChar(cfg, h, f).exponent) % p;
          if (lhs != rhs) ++addBad;
        }
    }
  }

  // Tuple character vs the single combined fraction over the common
  // denominator: an independent evaluation route.
  SplitMix64 rng(kCheckSeed);
  std::int64_t psiBad = 0;
  const int psiTotal = 200;
  for (int it = 0; it < psiTotal; ++it) {
    std::vector<std::pair<Poly, Poly>> x;
    std::vector<Poly> g;
    Poly num = Poly::zero();
    Poly den = Poly::one(cfg);
    for (int c = 0; c < 2; ++c) {
      Poly f = randomPoly(cfg, rng, 2);
      if (f.isZero()) f = Poly::one(cfg);
      f = makeMonic(cfg, f);
      const Poly r = mod(cfg, randomPoly(cfg, rng, 2), f);
      const Poly gc = randomPoly(cfg, rng, 2);
      x.emplace_back(r, f);
      g.push_back(gc);
      num = add(cfg, mul(cfg, num, f), mul(cfg, mul(cfg, gc, r), den));
      den = mul(cfg, den, f);
    }
    if (psi(cfg, x, g).exponent != eChar(cfg, num, den).exponent) ++psiBad;
  }

  std::vector<CheckResult> out;
  out.push_back(mk("char.numerator_additive", addBad == 0, countStr(addBad, addTotal), "0 failures"));
  out.push_back(mk("char.tuple_product", psiBad == 0, countStr(psiBad, psiTotal), "0 failures"));
  return out;
}

std::vector<CheckResult> checkTorusWellDefined(const FieldConfig& cfg) {
  SplitMix64 rng(kCheckSeed);
  std::int64_t bad = 0, total = 0;
  for (int d = 1; d <= 2; ++d) {
    if (static_cast<std::int64_t>(std::pow(static_cast<double>(cfg.q()), d)) > 64) break;
    for (const Poly& f : enumerateMonic(cfg, d))
      for (const Poly& g : enumeratePolysBelow(cfg, d))
        for (int it = 0; it < 4; ++it) {
          const Poly h = randomPoly(cfg, rng, 2);
          ++total;
          if (eChar(cfg, add(cfg, g, mul(cfg, f, h)), f).exponent != eChar(cfg, g, f).exponent)
            ++bad;
        }
  }
  return {mk("char.mod_f_invariant", bad == 0, countStr(bad, total), "0 failures")};
}

std::vector<CheckResult> checkNontriviality(const FieldConfig& cfg) {
  int witness = -1;
  for (int a = 0; a < cfg.q(); ++a)
    if (cfg.trace(a) != 0) {
      witness = a;
      break;
    }
  bool pass = false;
  std::string observed = "no element with nonzero trace";
  if (witness >= 0) {
    const CharValue v = eChar(cfg, Poly::constant(witness), Poly::shift(cfg, 1));
    pass = v.exponent != 0;
    observed = "e(" + cfg.elementName(witness) + "/t) exponent " + std::to_string(v.exponent);
  }
  return {mk("char.nontrivial", pass, observed, "nonzero exponent")};
}

OrthogonalityReport checkOrthogonality(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                                       int N, std::int64_t pairCap, unsigned threads) {
  OrthogonalityReport rep;
  if (S.empty()) {
    rep.pass = true;
    return rep;
  }
  if (pairCap < 1) pairCap = 1;
  const int n = static_cast<int>(S[0].r.size());
  const int depth = N + 1;
  const std::int64_t R = static_cast<std::int64_t>(S.size());

  std::int64_t rowStep = 1;
  while ((R + rowStep - 1) / rowStep * R > pairCap) ++rowStep;
  rep.truncated = rowStep > 1;

  const CoordSumTable table(cfg, N, threads);
  const size_t stride = static_cast<size_t>(n) * static_cast<size_t>(depth);
  std::vector<int> cvecs(static_cast<size_t>(R) * stride);
  for (std::int64_t i = 0; i < R; ++i) {
    const std::vector<int> cv = laurentDigits(cfg, S[static_cast<size_t>(i)], N);
    std::copy(cv.begin(), cv.end(), cvecs.begin() + static_cast<std::ptrdiff_t>(i) * static_cast<std::ptrdiff_t>(stride));
  }

  std::int64_t total = 1;
  for (int j = 0; j < n * depth; ++j) total *= cfg.q();

  std::vector<std::int64_t> rowPairs(static_cast<size_t>(R), 0);
  std::vector<std::int64_t> rowClose(static_cast<size_t>(R), 0);
  std::vector<std::int64_t> rowBad(static_cast<size_t>(R), 0);
  std::vector<double> rowErr(static_cast<size_t>(R), 0.0);

  parallelFor(R, threads, [&](std::int64_t i) {
    if (i % rowStep != 0) return;
    std::vector<int> diff(static_cast<size_t>(depth));
    const int* ci = &cvecs[static_cast<size_t>(i) * stride];
    for (std::int64_t j = 0; j < R; ++j) {
      const int* cj = &cvecs[static_cast<size_t>(j) * stride];
      ExponentCounts acc;
      for (int c = 0; c < n; ++c) {
        const size_t off = static_cast<size_t>(c) * static_cast<size_t>(depth);
        for (int d = 0; d < depth; ++d)
          diff[static_cast<size_t>(d)] = cfg.sub(ci[off + static_cast<size_t>(d)],
                                                 cj[off + static_cast<size_t>(d)]);
        const ExponentCounts& cc = table.at(table.keyOf(diff.data()));
        acc = (c == 0) ? cc : convolve(acc, cc);
      }
      const bool close = closePair(cfg, S[static_cast<size_t>(i)], S[static_cast<size_t>(j)], N + 2);
      bool ok;
      if (close) {
        ok = acc.counts[0] == total;
        for (int e = 1; e < acc.p; ++e) ok = ok && acc.counts[static_cast<size_t>(e)] == 0;
      } else {
        ok = true;
        for (int e = 1; e < acc.p; ++e)
          ok = ok && acc.counts[static_cast<size_t>(e)] == acc.counts[0];
      }
      ++rowPairs[static_cast<size_t>(i)];
      if (close) ++rowClose[static_cast<size_t>(i)];
      if (!ok) ++rowBad[static_cast<size_t>(i)];
      const double expect = close ? static_cast<double>(total) : 0.0;
      const double err = std::abs(acc.realize() - expect);
      rowErr[static_cast<size_t>(i)] = std::max(rowErr[static_cast<size_t>(i)], err);
    }
  });

  for (std::int64_t i = 0; i < R; ++i) {
    rep.pairsChecked += rowPairs[static_cast<size_t>(i)];
    rep.closePairs += rowClose[static_cast<size_t>(i)];
    rep.countViolations += rowBad[static_cast<size_t>(i)];
    rep.maxRealizedError = std::max(rep.maxRealizedError, rowErr[static_cast<size_t>(i)]);
  }
  rep.pass = rep.countViolations == 0 && rep.maxRealizedError <= 1e-6;
  return rep;
}

}  // namespace ffsieve
