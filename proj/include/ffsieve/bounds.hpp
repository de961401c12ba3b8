#pragma once

#include <cstdint>
#include <vector>

#include "ffsieve/farey.hpp"
#include "ffsieve/gfpoly.hpp"
#include "ffsieve/rational.hpp"

namespace ffsieve {

// Exact operator-norm value from the block structure of the Gram matrix:
// q^(n(N+1)) * M, with M the largest closeness class at radius q^-(N+2).
Rational boundTineq(const FieldConfig& cfg, int n, int N, std::int64_t m);

struct GeneralBoundResult {
  Rational value;
  std::vector<Poly> argmax;      // maximizing denominator tuple
  bool argmaxInFamily = false;   // argmax appears among the enumerated tuples
  bool argmaxUsesGuard = false;  // argmax uses the fresh above-degree candidate
};

// q^(n(N+1)) * max over monic tuples f of
//   sum over modulus tuples ftilde of prod_i (delta(f_i, ftilde_i) + q^(deg ftilde_i - (N+2))).
// The maximand depends on f only through which coordinates match appearing
// modulus values, so the max over all tuples is attained on the finite grid
// of per-coordinate appearing values plus one fresh monic above every
// appearing degree; that grid is scanned directly.
GeneralBoundResult boundGeneral(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N);

// One-dimensional bound q^(N+1) + moduliCount * q^(qeff - 1), where qeff is
// the largest modulus degree bound (k*Q for k-th power families).
Rational boundDim1(const FieldConfig& cfg, std::int64_t moduliCount, int qeff, int N);

// mTilde(f, k, X, N) = sum over monic base tuples g with deg lcm(g) <= X of
//   prod_i (delta(f_i, g_i) + q^(k deg g_i - N)).
// Requires X >= 0, N > 0, every f_i monic.
Rational mTilde(const FieldConfig& cfg, const std::vector<Poly>& f, int k, int X, int N);

struct RecursionCheckResult {
  bool holds = false;
  Rational lhs;
  Rational rhs;
  Rational slack;  // rhs - lhs, negative on violation
};

// Evaluates the coordinate-peeling recursion claim
//   mTilde(f, k, X, N) <= mTilde(f', k, X, N)
//     + sum_{j=0..X} mTilde(f', k, j, N) * (q+1)^((k+1)X - kj - N)
// with f' = f minus its last coordinate.  Both sides are computed exactly;
// the claim does not hold in general and violations are reported as data.
RecursionCheckResult mTildeRecursionCheck(const FieldConfig& cfg, const std::vector<Poly>& f,
                                          int k, int X, int N);

// Bracket values with the outer constant fixed to 1; callers scale.
// lemma:      1 + (q+1)^(kX + (X-N)) + (q+1)^(kX + n(X-N))
// power:      (q+1)^(nN) + (q+1)^((k+1)Q + (n-1)N) + (q+1)^((k+n)Q)
// full:       power with k = 1
// dim1 power: (q+1)^N + (q+1)^((k+1)Q)
Rational lemmaBracket(const FieldConfig& cfg, int k, int n, int X, int N);
Rational powerBracket(const FieldConfig& cfg, int k, int n, int Q, int N);
Rational fullBracket(const FieldConfig& cfg, int n, int Q, int N);
Rational dim1PowerBracket(const FieldConfig& cfg, int k, int Q, int N);

double lemmaBound(const FieldConfig& cfg, int k, int n, int X, int N, double C);
double powerBound(const FieldConfig& cfg, int k, int n, int Q, int N, double C);

// q^(n(N+1)) * max over monic tuples f of mTilde(f, k, Q, N+2), f scanned
// over per-coordinate appearing base values plus the fresh candidate.  For
// k-th power families this equals boundGeneral on the same family.
GeneralBoundResult kthCorollaryBound(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N);

}  // namespace ffsieve
