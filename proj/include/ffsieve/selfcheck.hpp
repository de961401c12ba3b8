#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffsieve/farey.hpp"
#include "ffsieve/gfpoly.hpp"

namespace ffsieve {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool hard = true;  // failure is an inequality/invariant break, not a soft report
  std::string observed;
  std::string expected;
};

bool allPass(const std::vector<CheckResult>& results);

// Field table invariants: group/ring axioms, identities, inverses,
// characteristic, trace linearity, Frobenius invariance of the trace, trace
// surjectivity onto the prime field, coordinate round-trips.  Exhaustive up
// to q = 64; seeded sampling above.
std::vector<CheckResult> checkFieldAlgebra(const FieldConfig& cfg);

// Polynomial algebra round-trips on seeded random inputs: division identity,
// gcd divisibility and monicity, gcd * lcm = product, power vs repeated
// multiplication.
std::vector<CheckResult> checkPolyAlgebra(const FieldConfig& cfg);

// eulerPhi against a literal coprime-residue count for every monic modulus
// of small degree.
std::vector<CheckResult> checkPhi(const FieldConfig& cfg);

// Additivity of the numerator: e((g+h)/f) has exponent e(g/f)+e(h/f) mod p,
// and the tuple character is the product of its coordinate characters.
std::vector<CheckResult> checkCharacterAdditivity(const FieldConfig& cfg);

// e(r/f) depends on r only through r mod f.
std::vector<CheckResult> checkTorusWellDefined(const FieldConfig& cfg);

// The character separates points: some r/f has a nontrivial value.
std::vector<CheckResult> checkNontriviality(const FieldConfig& cfg);

struct OrthogonalityReport {
  std::int64_t pairsChecked = 0;
  std::int64_t closePairs = 0;
  std::int64_t countViolations = 0;  // exact exponent-class pattern mismatches
  double maxRealizedError = 0.0;     // realized sum vs expected value
  bool truncated = false;            // pair cap forced row subsampling
  bool pass = false;
};

// Verifies, for every ordered pair of points (row-subsampled only past
// pairCap), that the ball character sum of the difference is q^(n(N+1)) when
// the pair is within q^-(N+2) and zero otherwise.  The sum is checked at the
// exponent-class level: the close case must put every ball tuple in class 0,
// the far case must spread classes evenly (the only way a sum of p-th roots
// of unity with integer multiplicities vanishes).  Closeness comes from the
// cross-multiplication route, independent of the expansion digits.
OrthogonalityReport checkOrthogonality(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                                       int N, std::int64_t pairCap, unsigned threads = 1);

}  // namespace ffsieve
