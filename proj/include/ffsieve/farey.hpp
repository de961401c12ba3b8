#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ffsieve/gfpoly.hpp"

namespace ffsieve {

enum class FamilyKind { Full, KthPower, Explicit };

// A family of denominator tuples.  Full: every monic tuple.  KthPower: k-th
// powers of every monic tuple.  Explicit: a fixed list of monic base tuples.
struct ModuliFamily {
  FamilyKind kind = FamilyKind::Full;
  int n = 1;
  int k = 1;
  std::vector<std::vector<Poly>> members;  // Explicit only

  static ModuliFamily full(int n) { return {FamilyKind::Full, n, 1, {}}; }
  static ModuliFamily kthPower(int n, int k) { return {FamilyKind::KthPower, n, k, {}}; }
  static ModuliFamily explicitList(int n, std::vector<std::vector<Poly>> members) {
    return {FamilyKind::Explicit, n, 1, std::move(members)};
  }
};

// Aligned base and modulus tuples with deg lcm(base) <= Q, in canonical
// order: coordinate 0 varies fastest, each coordinate running through monic
// polynomials in (degree, counter) order.  modulus = base^k for KthPower,
// modulus = base otherwise.
struct ModuliSet {
  std::vector<std::vector<Poly>> bases;
  std::vector<std::vector<Poly>> moduli;
  std::vector<int> lcmDegrees;  // of the modulus tuple
  size_t size() const { return moduli.size(); }
};

ModuliSet enumerateModuli(const FieldConfig& cfg, const ModuliFamily& family, int Q);

// One point of the Farey set: coordinates r_i/f_i with f_i the modulus,
// deg r_i < deg f_i, and r_i coprime to f_i (r_i = 0 exactly when f_i = 1).
// base holds the k-th root of f for KthPower families and equals f otherwise.
struct FareyPoint {
  std::vector<Poly> r;
  std::vector<Poly> f;
  std::vector<Poly> base;
  int lcmDegree = 0;
};

std::vector<FareyPoint> fareySet(const FieldConfig& cfg, const ModuliFamily& family, int Q);

// Exact closeness predicate: for every coordinate,
// |r'_i f_i - r_i f'_i| <= q^(deg f_i + deg f'_i - N).
bool closePair(const FieldConfig& cfg, const FareyPoint& x, const FareyPoint& y, int N);

// Largest N for which closePair(x, y, N) holds; kInfiniteDepth when x = y as
// torus points (all cross differences vanish).
inline constexpr int kInfiniteDepth = 1 << 29;
int closenessDepth(const FieldConfig& cfg, const FareyPoint& x, const FareyPoint& y);

// Difference of two coordinates as a fraction over lcm(f1, f2) with the
// numerator reduced mod the denominator.
std::pair<Poly, Poly> subtractCoordinate(const FieldConfig& cfg, const Poly& r1, const Poly& f1,
                                         const Poly& r2, const Poly& f2);

// closenessCounts[i] = number of points within q^-N of point i (including i).
std::vector<std::int64_t> closenessCounts(const FieldConfig& cfg,
                                          const std::vector<FareyPoint>& S, int N,
                                          unsigned threads = 1);

struct CountMResult {
  std::int64_t count = 0;
  size_t argmax = 0;  // first attaining index in canonical order
};

CountMResult countMOfSet(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                         unsigned threads = 1);
CountMResult countM(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N,
                    unsigned threads = 1);

std::string fareyPointToString(const FieldConfig& cfg, const FareyPoint& pt);

// Order-sensitive FNV-1a over the canonical serialization of every point.
// The seeded overload continues an existing fold (for multi-set hashes).
inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
std::uint64_t fareySetHash(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                           std::uint64_t seed);
std::uint64_t fareySetHash(const FieldConfig& cfg, const std::vector<FareyPoint>& S);

// Columns: index, f, r, lcm_degree, count.  counts must align with S.
void writeFareySetCsv(std::ostream& os, const FieldConfig& cfg,
                      const std::vector<FareyPoint>& S,
                      const std::vector<std::int64_t>& counts);

}  // namespace ffsieve
