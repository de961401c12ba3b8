#include "ffsieve/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffsieve {

namespace {

constexpr std::int64_t kMaxCandidates = std::int64_t{1} << 22;

// sum over tuples t of prod_i (delta(f_i, t_i) + q^(degScale * deg t_i - shift)).
Rational weightedMatchSum(const FieldConfig& cfg, const std::vector<std::vector<Poly>>& tuples,
                          const std::vector<Poly>& f, int degScale, int shift) {
  const std::int64_t q = cfg.q();
  Rational total(0);
  for (const std::vector<Poly>& t : tuples) {
    Rational prod(1);
    for (size_t i = 0; i < f.size(); ++i) {
      Rational term = Rational::pow(q, degScale * t[i].degree() - shift);
      if (t[i] == f[i]) term += Rational(1);
      prod *= term;
    }
    total += prod;
  }
  return total;
}

// Per-coordinate appearing values in canonical order, each list closed with
// one fresh monic of degree above every appearing value.  The maximand of
// the match-sum bounds depends on a tuple only through which coordinates hit
// appearing values, so this grid contains a global maximizer.
std::vector<std::vector<Poly>> candidateGrid(const FieldConfig& cfg,
                                             const std::vector<std::vector<Poly>>& tuples, int n) {
  std::vector<std::vector<Poly>> grid(static_cast<size_t>(n));
  int maxDeg = 0;
  for (const std::vector<Poly>& t : tuples)
    for (size_t i = 0; i < t.size(); ++i) {
      grid[i].push_back(t[i]);
      maxDeg = std::max(maxDeg, t[i].degree());
    }
  const Poly fresh = Poly::shift(cfg, maxDeg + 1);
  for (std::vector<Poly>& coord : grid) {
    std::sort(coord.begin(), coord.end(), polyLess);
    coord.erase(std::unique(coord.begin(), coord.end()), coord.end());
    coord.push_back(fresh);
  }
  return grid;
}

// First maximizer of the match sum over the candidate grid, coordinate 0
// varying fastest.
GeneralBoundResult maximizeMatchSum(const FieldConfig& cfg,
                                    const std::vector<std::vector<Poly>>& tuples, int n,
                                    int degScale, int shift) {
  if (tuples.empty()) throw std::invalid_argument("empty tuple family");
  const std::vector<std::vector<Poly>> grid = candidateGrid(cfg, tuples, n);
  std::int64_t total = 1;
  for (const std::vector<Poly>& coord : grid) {
    if (total > kMaxCandidates / static_cast<std::int64_t>(coord.size()))
      throw std::invalid_argument("candidate grid exceeds supported size");
    total *= static_cast<std::int64_t>(coord.size());
  }
  GeneralBoundResult best;
  std::vector<size_t> digit(static_cast<size_t>(n), 0);
  std::vector<Poly> f(static_cast<size_t>(n));
  bool first = true;
  for (std::int64_t it = 0; it < total; ++it) {
    for (int i = 0; i < n; ++i) f[static_cast<size_t>(i)] = grid[static_cast<size_t>(i)][digit[static_cast<size_t>(i)]];
    const Rational v = weightedMatchSum(cfg, tuples, f, degScale, shift);
    if (first || best.value < v) {
      first = false;
      best.value = v;
      best.argmax = f;
      best.argmaxUsesGuard = false;
      for (int i = 0; i < n; ++i)
        if (digit[static_cast<size_t>(i)] + 1 == grid[static_cast<size_t>(i)].size())
          best.argmaxUsesGuard = true;
    }
    for (int i = 0; i < n; ++i) {
      if (++digit[static_cast<size_t>(i)] < grid[static_cast<size_t>(i)].size()) break;
      digit[static_cast<size_t>(i)] = 0;
    }
  }
  best.argmaxInFamily = std::find(tuples.begin(), tuples.end(), best.argmax) != tuples.end();
  return best;
}

}  // namespace

Rational boundTineq(const FieldConfig& cfg, int n, int N, std::int64_t m) {
  if (n < 1) throw std::invalid_argument("need at least one coordinate");
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  if (m < 0) throw std::invalid_argument("negative class size");
  return Rational::pow(cfg.q(), n * (N + 1)) * Rational(m);
}

GeneralBoundResult boundGeneral(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N) {
  if (Q < 0) throw std::invalid_argument("negative degree bound");
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  const ModuliSet ms = enumerateModuli(cfg, family, Q);
  GeneralBoundResult res = maximizeMatchSum(cfg, ms.moduli, family.n, 1, N + 2);
  res.value = Rational::pow(cfg.q(), family.n * (N + 1)) * res.value;
  return res;
}

Rational boundDim1(const FieldConfig& cfg, std::int64_t moduliCount, int qeff, int N) {
  if (moduliCount < 0) throw std::invalid_argument("negative modulus count");
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  return Rational::pow(cfg.q(), N + 1) + Rational(moduliCount) * Rational::pow(cfg.q(), qeff - 1);
}

Rational mTilde(const FieldConfig& cfg, const std::vector<Poly>& f, int k, int X, int N) {
  if (f.empty()) throw std::invalid_argument("empty tuple");
  if (k < 1) throw std::invalid_argument("power exponent must be positive");
  if (X < 0) throw std::invalid_argument("negative degree bound");
  if (N <= 0) throw std::invalid_argument("radius exponent must be positive");
  for (const Poly& fi : f)
    if (!isMonic(cfg, fi)) throw std::invalid_argument("tuple coordinates must be monic");
  const ModuliSet ms = enumerateModuli(cfg, ModuliFamily::full(static_cast<int>(f.size())), X);
  return weightedMatchSum(cfg, ms.bases, f, k, N);
}

RecursionCheckResult mTildeRecursionCheck(const FieldConfig& cfg, const std::vector<Poly>& f,
                                          int k, int X, int N) {
  if (f.size() < 2) throw std::invalid_argument("recursion check needs at least two coordinates");
  RecursionCheckResult res;
  res.lhs = mTilde(cfg, f, k, X, N);
  const std::vector<Poly> head(f.begin(), f.end() - 1);
  res.rhs = mTilde(cfg, head, k, X, N);
  const std::int64_t q1 = cfg.q() + 1;
  for (int j = 0; j <= X; ++j)
    res.rhs += mTilde(cfg, head, k, j, N) * Rational::pow(q1, (k + 1) * X - k * j - N);
  res.slack = res.rhs - res.lhs;
  res.holds = res.lhs <= res.rhs;
  return res;
}

Rational lemmaBracket(const FieldConfig& cfg, int k, int n, int X, int N) {
  const std::int64_t q1 = cfg.q() + 1;
  return Rational(1) + Rational::pow(q1, k * X + (X - N)) + Rational::pow(q1, k * X + n * (X - N));
}

Rational powerBracket(const FieldConfig& cfg, int k, int n, int Q, int N) {
  const std::int64_t q1 = cfg.q() + 1;
  return Rational::pow(q1, n * N) + Rational::pow(q1, (k + 1) * Q + (n - 1) * N) +
         Rational::pow(q1, (k + n) * Q);
}

Rational fullBracket(const FieldConfig& cfg, int n, int Q, int N) {
  return powerBracket(cfg, 1, n, Q, N);
}

Rational dim1PowerBracket(const FieldConfig& cfg, int k, int Q, int N) {
  const std::int64_t q1 = cfg.q() + 1;
  return Rational::pow(q1, N) + Rational::pow(q1, (k + 1) * Q);
}

double lemmaBound(const FieldConfig& cfg, int k, int n, int X, int N, double C) {
  return C * lemmaBracket(cfg, k, n, X, N).toDouble();
}

double powerBound(const FieldConfig& cfg, int k, int n, int Q, int N, double C) {
  return C * powerBracket(cfg, k, n, Q, N).toDouble();
}

GeneralBoundResult kthCorollaryBound(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N) {
  if (Q < 0) throw std::invalid_argument("negative degree bound");
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  const int k = family.kind == FamilyKind::KthPower ? family.k : 1;
  const ModuliSet ms = enumerateModuli(cfg, family, Q);
  GeneralBoundResult res = maximizeMatchSum(cfg, ms.bases, family.n, k, N + 2);
  res.value = Rational::pow(cfg.q(), family.n * (N + 1)) * res.value;
  return res;
}

}  // namespace ffsieve
