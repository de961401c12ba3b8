#include "ffsieve/farey.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <stdexcept>

#include "ffsieve/parallel.hpp"

namespace ffsieve {
namespace {

std::vector<Poly> monicUpTo(const FieldConfig& cfg, int maxDeg) {
  std::vector<Poly> out;
  for (int d = 0; d <= maxDeg; ++d) {
    auto block = enumerateMonic(cfg, d);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

bool tupleLess(const std::vector<Poly>& a, const std::vector<Poly>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return polyLess(a[i], b[i]);
  }
  return false;
}

}  // namespace

ModuliSet enumerateModuli(const FieldConfig& cfg, const ModuliFamily& family, int Q) {
  if (family.n < 1) throw std::invalid_argument("enumerateModuli: n must be >= 1");
  if (Q < 0) throw std::invalid_argument("enumerateModuli: Q must be >= 0");
  if (family.kind == FamilyKind::KthPower && family.k < 1)
    throw std::invalid_argument("enumerateModuli: k must be >= 1");

  ModuliSet out;
  auto push = [&](const std::vector<Poly>& base) {
    Poly l = Poly::one(cfg);
    for (const Poly& f : base) l = lcm(cfg, l, f);
    if (l.degree() > Q) return;
    std::vector<Poly> mods;
    mods.reserve(base.size());
    int k = family.kind == FamilyKind::KthPower ? family.k : 1;
    for (const Poly& f : base) mods.push_back(powInt(cfg, f, k));
    out.bases.push_back(base);
    out.lcmDegrees.push_back(l.degree() * k);
    out.moduli.push_back(std::move(mods));
  };

  if (family.kind == FamilyKind::Explicit) {
    auto members = family.members;
    for (const auto& tup : members) {
      if (static_cast<int>(tup.size()) != family.n)
        throw std::invalid_argument("enumerateModuli: explicit tuple of wrong dimension");
      for (const Poly& f : tup)
        if (!isMonic(cfg, f)) throw std::invalid_argument("enumerateModuli: explicit entries must be monic");
    }
    std::sort(members.begin(), members.end(), tupleLess);
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (const auto& tup : members) push(tup);
    return out;
  }

  std::vector<Poly> pool = monicUpTo(cfg, Q);
  std::vector<size_t> odo(static_cast<size_t>(family.n), 0);
  std::vector<Poly> tup(static_cast<size_t>(family.n));
  for (;;) {
    for (size_t i = 0; i < odo.size(); ++i) tup[i] = pool[odo[i]];
    push(tup);
    size_t i = 0;
    while (i < odo.size() && ++odo[i] == pool.size()) odo[i++] = 0;
    if (i == odo.size()) break;
  }
  return out;
}

std::vector<FareyPoint> fareySet(const FieldConfig& cfg, const ModuliFamily& family, int Q) {
  ModuliSet mods = enumerateModuli(cfg, family, Q);
  std::vector<FareyPoint> out;
  for (size_t mi = 0; mi < mods.size(); ++mi) {
    const auto& base = mods.bases[mi];
    const auto& mod_ = mods.moduli[mi];
    std::vector<std::vector<Poly>> residues(base.size());
    for (size_t i = 0; i < base.size(); ++i) {
      for (const Poly& r : enumeratePolysBelow(cfg, std::max(0, mod_[i].degree()))) {
        if (base[i].degree() == 0) {
          residues[i].push_back(r);  // only r = 0 enumerated
        } else if (!r.isZero() && gcd(cfg, r, base[i]).degree() == 0) {
          residues[i].push_back(r);
        }
      }
    }
    std::vector<size_t> odo(base.size(), 0);
    for (;;) {
      FareyPoint pt;
      pt.f = mod_;
      pt.base = base;
      pt.r.reserve(base.size());
      for (size_t i = 0; i < base.size(); ++i) pt.r.push_back(residues[i][odo[i]]);
      pt.lcmDegree = mods.lcmDegrees[mi];
      out.push_back(std::move(pt));
      size_t i = 0;
      while (i < odo.size() && ++odo[i] == residues[i].size()) odo[i++] = 0;
      if (i == odo.size()) break;
    }
  }
  return out;
}

bool closePair(const FieldConfig& cfg, const FareyPoint& x, const FareyPoint& y, int N) {
  if (x.f.size() != y.f.size()) throw std::invalid_argument("closePair: dimension mismatch");
  for (size_t i = 0; i < x.f.size(); ++i) {
    Poly c = sub(cfg, mul(cfg, y.r[i], x.f[i]), mul(cfg, x.r[i], y.f[i]));
    if (!c.isZero() && c.degree() > x.f[i].degree() + y.f[i].degree() - N) return false;
  }
  return true;
}

int closenessDepth(const FieldConfig& cfg, const FareyPoint& x, const FareyPoint& y) {
  if (x.f.size() != y.f.size()) throw std::invalid_argument("closenessDepth: dimension mismatch");
  int depth = kInfiniteDepth;
  for (size_t i = 0; i < x.f.size(); ++i) {
    Poly c = sub(cfg, mul(cfg, y.r[i], x.f[i]), mul(cfg, x.r[i], y.f[i]));
    if (!c.isZero())
      depth = std::min(depth, x.f[i].degree() + y.f[i].degree() - c.degree());
  }
  return depth;
}

std::pair<Poly, Poly> subtractCoordinate(const FieldConfig& cfg, const Poly& r1, const Poly& f1,
                                         const Poly& r2, const Poly& f2) {
  Poly den = lcm(cfg, f1, f2);
  Poly a = mul(cfg, r1, divmod(cfg, den, f1).quotient);
  Poly b = mul(cfg, r2, divmod(cfg, den, f2).quotient);
  return {mod(cfg, sub(cfg, a, b), den), den};
}

std::vector<std::int64_t> closenessCounts(const FieldConfig& cfg,
                                          const std::vector<FareyPoint>& S, int N,
                                          unsigned threads) {
  std::vector<std::int64_t> counts(S.size(), 0);
  parallelFor(static_cast<std::int64_t>(S.size()), threads, [&](std::int64_t i) {
    std::int64_t c = 0;
    for (size_t j = 0; j < S.size(); ++j)
      if (closePair(cfg, S[static_cast<size_t>(i)], S[j], N)) ++c;
    counts[static_cast<size_t>(i)] = c;
  });
  return counts;
}

CountMResult countMOfSet(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                         unsigned threads) {
  auto counts = closenessCounts(cfg, S, N, threads);
  CountMResult res;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > res.count) {
      res.count = counts[i];
      res.argmax = i;
    }
  }
  return res;
}

CountMResult countM(const FieldConfig& cfg, const ModuliFamily& family, int Q, int N,
                    unsigned threads) {
  return countMOfSet(cfg, fareySet(cfg, family, Q), N, threads);
}

std::string fareyPointToString(const FieldConfig& cfg, const FareyPoint& pt) {
  std::string s;
  for (size_t i = 0; i < pt.f.size(); ++i) {
    if (i) s += ";";
    s += "(" + polyToString(cfg, pt.r[i]) + ")/(" + polyToString(cfg, pt.f[i]) + ")";
  }
  return s;
}

std::uint64_t fareySetHash(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                           std::uint64_t seed) {
  std::uint64_t h = seed;
  auto feed = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  };
  for (const FareyPoint& pt : S) {
    for (char c : fareyPointToString(cfg, pt)) feed(c);
    feed('\n');
  }
  return h;
}

std::uint64_t fareySetHash(const FieldConfig& cfg, const std::vector<FareyPoint>& S) {
  return fareySetHash(cfg, S, kFnvOffset);
}

void writeFareySetCsv(std::ostream& os, const FieldConfig& cfg,
                      const std::vector<FareyPoint>& S,
                      const std::vector<std::int64_t>& counts) {
  if (counts.size() != S.size())
    throw std::invalid_argument("writeFareySetCsv: counts must align with S");
  os << "index,f,r,lcm_degree,count\n";
  for (size_t i = 0; i < S.size(); ++i) {
    std::string fs, rs;
    for (size_t c = 0; c < S[i].f.size(); ++c) {
      if (c) {
        fs += ";";
        rs += ";";
      }
      fs += polyToString(cfg, S[i].f[c]);
      rs += polyToString(cfg, S[i].r[c]);
    }
    os << i << "," << fs << "," << rs << "," << S[i].lcmDegree << "," << counts[i] << "\n";
  }
}

}  // namespace ffsieve
