#include "ffsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ffsieve/laurent.hpp"
#include "ffsieve/parallel.hpp"
#include "ffsieve/prng.hpp"

namespace ffsieve {

namespace {

constexpr std::int64_t kMaxBallPoints = std::int64_t{1} << 22;
constexpr std::int64_t kMaxCoordBall = 4096;
constexpr std::int64_t kMaxCountTotal = std::int64_t{1} << 60;
constexpr std::int64_t kMaxTableCells = std::int64_t{1} << 28;
constexpr std::uint64_t kPowerSeed1 = 0x243F6A8885A308D3ULL;
constexpr std::uint64_t kPowerSeed2 = 0x13198A2E03707344ULL;
constexpr int kMaxPowerIters = 100000;

std::int64_t checkedPow(std::int64_t base, int e, std::int64_t cap, const char* what) {
  std::int64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > cap / base)
      throw std::invalid_argument(std::string(what) + " exceeds supported size");
    v *= base;
  }
  return v;
}

// p-th roots of unity indexed by exponent; exact +-1 for p = 2.
std::vector<std::complex<double>> unitRoots(int p) {
  std::vector<std::complex<double>> u(static_cast<size_t>(p));
  if (p == 2) {
    u[0] = {1.0, 0.0};
    u[1] = {-1.0, 0.0};
    return u;
  }
  for (int e = 0; e < p; ++e) {
    double angle = 2.0 * std::numbers::pi * e / p;
    u[static_cast<size_t>(e)] = {std::cos(angle), std::sin(angle)};
  }
  return u;
}

// Exponent-class counts of Tr(sum_j g_j * c_{j+1}) over every polynomial g
// with deg <= depth-1, by literal enumeration.  The running exponent is kept
// as the exact integer sum of per-digit contributions (each in [0, p)), so
// an odometer step only touches the digit that changed.
ExponentCounts coordBallCounts(const FieldConfig& cfg, const int* cdigits, int depth) {
  const int p = cfg.p();
  const int q = static_cast<int>(cfg.q());
  ExponentCounts out = ExponentCounts::zero(p);
  std::vector<int> contrib(static_cast<size_t>(depth) * static_cast<size_t>(q));
  for (int j = 0; j < depth; ++j)
    for (int v = 0; v < q; ++v)
      contrib[static_cast<size_t>(j) * q + static_cast<size_t>(v)] =
          cfg.trace(cfg.mul(v, cdigits[j]));
  std::int64_t total = 1;
  for (int j = 0; j < depth; ++j) total *= q;
  std::vector<int> g(static_cast<size_t>(depth), 0);
  int expSum = 0;
  for (std::int64_t it = 0;;) {
    ++out.counts[static_cast<size_t>(expSum % p)];
    if (++it == total) break;
    int j = 0;
    for (;;) {
      const int* cj = &contrib[static_cast<size_t>(j) * q];
      const int old = g[static_cast<size_t>(j)];
      if (old + 1 == q) {
        expSum -= cj[old];  // digit resets to 0, whose contribution is 0
        g[static_cast<size_t>(j)] = 0;
        ++j;
      } else {
        expSum += cj[old + 1] - cj[old];
        g[static_cast<size_t>(j)] = old + 1;
        break;
      }
    }
  }
  return out;
}

Eigen::VectorXcd randomStart(std::uint64_t seed, Eigen::Index rows) {
  SplitMix64 rng(seed);
  Eigen::VectorXcd v(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double re = rng.nextSymmetric();
    const double im = rng.nextSymmetric();
    v[i] = {re, im};
  }
  const double nv = v.norm();
  if (nv == 0.0) {
    v.setZero();
    v[0] = {1.0, 0.0};
    return v;
  }
  return v / nv;
}

int commonCoordinateCount(const std::vector<FareyPoint>& S) {
  if (S.empty()) throw std::invalid_argument("empty point set");
  const size_t n = S[0].r.size();
  for (const FareyPoint& x : S)
    if (x.r.size() != n || x.f.size() != n)
      throw std::invalid_argument("coordinate count mismatch in point set");
  return static_cast<int>(n);
}

}  // namespace

BallIndex::BallIndex(const FieldConfig& cfg, int n, int N) {
  if (n < 1) throw std::invalid_argument("need at least one coordinate");
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  q_ = static_cast<int>(cfg.q());
  n_ = n;
  N_ = N;
  digitCount_ = n * (N + 1);
  size_ = checkedPow(q_, digitCount_, kMaxBallPoints, "ball");
}

std::vector<int> BallIndex::digits(std::int64_t idx) const {
  if (idx < 0 || idx >= size_) throw std::out_of_range("ball index out of range");
  std::vector<int> d(static_cast<size_t>(digitCount_));
  for (int j = 0; j < digitCount_; ++j) {
    d[static_cast<size_t>(j)] = static_cast<int>(idx % q_);
    idx /= q_;
  }
  return d;
}

std::vector<Poly> BallIndex::tuple(std::int64_t idx) const {
  const std::vector<int> d = digits(idx);
  const int depth = N_ + 1;
  std::vector<Poly> out;
  out.reserve(static_cast<size_t>(n_));
  for (int c = 0; c < n_; ++c)
    out.emplace_back(std::vector<int>(d.begin() + static_cast<std::ptrdiff_t>(c) * depth,
                                      d.begin() + static_cast<std::ptrdiff_t>(c + 1) * depth));
  return out;
}

ExponentCounts ExponentCounts::zero(int p) {
  if (p < 2) throw std::invalid_argument("exponent modulus must be at least 2");
  ExponentCounts c;
  c.p = p;
  c.counts.assign(static_cast<size_t>(p), 0);
  return c;
}

std::complex<double> ExponentCounts::realize() const {
  if (p == 2) return {static_cast<double>(counts[0] - counts[1]), 0.0};
  const auto u = unitRoots(p);
  std::complex<double> s{0.0, 0.0};
  for (int e = 0; e < p; ++e)
    if (counts[static_cast<size_t>(e)] != 0)
      s += static_cast<double>(counts[static_cast<size_t>(e)]) * u[static_cast<size_t>(e)];
  return s;
}

std::int64_t ExponentCounts::total() const {
  std::int64_t t = 0;
  for (std::int64_t c : counts) t += c;
  return t;
}

ExponentCounts convolve(const ExponentCounts& a, const ExponentCounts& b) {
  if (a.p != b.p) throw std::invalid_argument("exponent class moduli differ");
  const __int128 prod = static_cast<__int128>(a.total()) * static_cast<__int128>(b.total());
  if (prod > static_cast<__int128>(kMaxCountTotal))
    throw std::overflow_error("exponent count convolution exceeds supported size");
  ExponentCounts out = ExponentCounts::zero(a.p);
  for (int i = 0; i < a.p; ++i) {
    if (a.counts[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < b.p; ++j)
      out.counts[static_cast<size_t>((i + j) % a.p)] +=
          a.counts[static_cast<size_t>(i)] * b.counts[static_cast<size_t>(j)];
  }
  return out;
}

std::vector<int> laurentDigits(const FieldConfig& cfg,
                               const std::vector<std::pair<Poly, Poly>>& x, int N) {
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  std::vector<int> out;
  out.reserve(x.size() * static_cast<size_t>(N + 1));
  for (const auto& [r, f] : x) {
    const FracExpansion e = fracExpansion(cfg, r, f, N + 1);
    out.insert(out.end(), e.coeffs.begin(), e.coeffs.end());
  }
  return out;
}

std::vector<int> laurentDigits(const FieldConfig& cfg, const FareyPoint& x, int N) {
  std::vector<std::pair<Poly, Poly>> coords;
  coords.reserve(x.r.size());
  for (size_t c = 0; c < x.r.size(); ++c) coords.emplace_back(x.r[c], x.f[c]);
  return laurentDigits(cfg, coords, N);
}

ExponentCounts charBallCounts(const FieldConfig& cfg,
                              const std::vector<std::pair<Poly, Poly>>& x, int N) {
  if (x.empty()) throw std::invalid_argument("point has no coordinates");
  const int depth = N + 1;
  checkedPow(cfg.q(), depth, kMaxCoordBall, "coordinate ball");
  const std::vector<int> digits = laurentDigits(cfg, x, N);
  ExponentCounts acc = coordBallCounts(cfg, digits.data(), depth);
  for (size_t c = 1; c < x.size(); ++c)
    acc = convolve(acc, coordBallCounts(cfg, digits.data() + c * static_cast<size_t>(depth), depth));
  return acc;
}

std::complex<double> charBallSum(const FieldConfig& cfg,
                                 const std::vector<std::pair<Poly, Poly>>& x, int N) {
  return charBallCounts(cfg, x, N).realize();
}

CoordSumTable::CoordSumTable(const FieldConfig& cfg, int N, unsigned threads) {
  if (N < 0) throw std::invalid_argument("negative ball radius exponent");
  q_ = static_cast<int>(cfg.q());
  N_ = N;
  const int depth = N + 1;
  const std::int64_t keys = checkedPow(q_, depth, kMaxCoordBall, "coordinate ball");
  table_.assign(static_cast<size_t>(keys), ExponentCounts{});
  parallelFor(keys, threads, [&](std::int64_t key) {
    std::vector<int> c(static_cast<size_t>(depth));
    std::int64_t k = key;
    for (int j = 0; j < depth; ++j) {
      c[static_cast<size_t>(j)] = static_cast<int>(k % q_);
      k /= q_;
    }
    table_[static_cast<size_t>(key)] = coordBallCounts(cfg, c.data(), depth);
  });
}

std::int64_t CoordSumTable::keyOf(const int* digits) const {
  std::int64_t k = 0;
  for (int j = N_; j >= 0; --j) k = k * q_ + digits[j];
  return k;
}

Eigen::MatrixXcd gramMatrix(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                            int N, unsigned threads) {
  const int n = commonCoordinateCount(S);
  const int depth = N + 1;
  const CoordSumTable table(cfg, N, threads);
  const size_t R = S.size();
  const size_t stride = static_cast<size_t>(n) * static_cast<size_t>(depth);
  std::vector<int> cvecs(R * stride);
  for (size_t i = 0; i < R; ++i) {
    const std::vector<int> cv = laurentDigits(cfg, S[i], N);
    std::copy(cv.begin(), cv.end(), cvecs.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  Eigen::MatrixXcd G(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(R));
  parallelFor(static_cast<std::int64_t>(R), threads, [&](std::int64_t i) {
    std::vector<int> diff(static_cast<size_t>(depth));
    const int* ci = &cvecs[static_cast<size_t>(i) * stride];
    for (size_t j = static_cast<size_t>(i); j < R; ++j) {
      const int* cj = &cvecs[j * stride];
      ExponentCounts acc;
      for (int c = 0; c < n; ++c) {
        const size_t off = static_cast<size_t>(c) * static_cast<size_t>(depth);
        for (int d = 0; d < depth; ++d)
          diff[static_cast<size_t>(d)] =
              cfg.sub(ci[off + static_cast<size_t>(d)], cj[off + static_cast<size_t>(d)]);
        const ExponentCounts& cc = table.at(table.keyOf(diff.data()));
        acc = (c == 0) ? cc : convolve(acc, cc);
      }
      const std::complex<double> v = acc.realize();
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
    }
  });
  return G;
}

PowerIterationResult operatorNorm(const Eigen::MatrixXcd& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("matrix not square");
  PowerIterationResult res;
  if (G.rows() == 0) {
    res.converged = true;
    return res;
  }
  const double maxAbs = G.cwiseAbs().maxCoeff();
  const double asym = (G - G.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, maxAbs))
    throw std::invalid_argument("matrix not Hermitian");
  int totalIters = 0;
  for (int phase = 0; phase < 2; ++phase) {
    Eigen::VectorXcd v = randomStart(phase == 0 ? kPowerSeed1 : kPowerSeed2, G.rows());
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < kMaxPowerIters; ++iter) {
      ++totalIters;
      const Eigen::VectorXcd w = G * v;
      const double rq = v.dot(w).real();
      const bool settled =
          !std::isnan(prev) && std::abs(rq - prev) <= 1e-12 * std::max(1.0, std::abs(rq));
      const double wn = w.norm();
      if (settled || wn == 0.0) {
        res.value = rq;
        res.vector = v;
        res.converged = true;
        res.iterations = totalIters;
        res.restarted = phase == 1;
        return res;
      }
      v = w / wn;
      prev = rq;
    }
    res.value = prev;
    res.vector = v;
    res.converged = false;
    res.iterations = totalIters;
    res.restarted = phase == 1;
  }
  return res;
}

CharacterTable::CharacterTable(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                               int N, unsigned threads)
    : rows_(S.size()),
      p_(cfg.p()),
      ball_(cfg, commonCoordinateCount(S), N) {
  if (p_ > 255) throw std::invalid_argument("characteristic too large for character table");
  const std::int64_t B = ball_.size();
  if (static_cast<std::int64_t>(rows_) > kMaxTableCells / B)
    throw std::invalid_argument("character table exceeds supported size");
  const int q = static_cast<int>(cfg.q());
  const int D = ball_.digitCount();
  exp_.assign(rows_ * static_cast<size_t>(B), 0);
  parallelFor(static_cast<std::int64_t>(rows_), threads, [&](std::int64_t i) {
    const std::vector<int> cv = laurentDigits(cfg, S[static_cast<size_t>(i)], N);
    std::vector<int> contrib(static_cast<size_t>(D) * static_cast<size_t>(q));
    for (int d = 0; d < D; ++d)
      for (int v = 0; v < q; ++v)
        contrib[static_cast<size_t>(d) * q + static_cast<size_t>(v)] =
            cfg.trace(cfg.mul(v, cv[static_cast<size_t>(d)]));
    std::uint8_t* row = &exp_[static_cast<size_t>(i) * static_cast<size_t>(B)];
    std::vector<int> g(static_cast<size_t>(D), 0);
    int expSum = 0;
    for (std::int64_t idx = 0;;) {
      row[idx] = static_cast<std::uint8_t>(expSum % p_);
      if (++idx == B) break;
      int j = 0;
      for (;;) {
        const int* cj = &contrib[static_cast<size_t>(j) * q];
        const int old = g[static_cast<size_t>(j)];
        if (old + 1 == q) {
          expSum -= cj[old];
          g[static_cast<size_t>(j)] = 0;
          ++j;
        } else {
          expSum += cj[old + 1] - cj[old];
          g[static_cast<size_t>(j)] = old + 1;
          break;
        }
      }
    }
  });
}

double sieveSumT(const CharacterTable& table, const std::vector<std::complex<double>>& a,
                 unsigned threads) {
  const std::int64_t B = table.cols();
  if (static_cast<std::int64_t>(a.size()) != B)
    throw std::invalid_argument("coefficient count mismatch");
  const auto u = unitRoots(table.p());
  const size_t R = table.rows();
  std::vector<double> rowNorm(R, 0.0);
  parallelFor(static_cast<std::int64_t>(R), threads, [&](std::int64_t i) {
    std::complex<double> s{0.0, 0.0};
    for (std::int64_t g = 0; g < B; ++g)
      s += a[static_cast<size_t>(g)] * u[table.exponent(static_cast<size_t>(i), g)];
    rowNorm[static_cast<size_t>(i)] = std::norm(s);
  });
  double T = 0.0;
  for (size_t i = 0; i < R; ++i) T += rowNorm[i];
  return T;
}

double sieveSumT(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                 const std::vector<std::complex<double>>& a, unsigned threads) {
  return sieveSumT(CharacterTable(cfg, S, N, threads), a, threads);
}

double dualSumT(const CharacterTable& table, const std::vector<std::complex<double>>& b,
                unsigned threads) {
  const size_t R = table.rows();
  if (b.size() != R) throw std::invalid_argument("coefficient count mismatch");
  const auto u = unitRoots(table.p());
  const std::int64_t B = table.cols();
  std::vector<double> colNorm(static_cast<size_t>(B), 0.0);
  parallelFor(B, threads, [&](std::int64_t g) {
    std::complex<double> s{0.0, 0.0};
    for (size_t i = 0; i < R; ++i) s += b[i] * u[table.exponent(i, g)];
    colNorm[static_cast<size_t>(g)] = std::norm(s);
  });
  double T = 0.0;
  for (std::int64_t g = 0; g < B; ++g) T += colNorm[static_cast<size_t>(g)];
  return T;
}

double dualSumT(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                const std::vector<std::complex<double>>& b, unsigned threads) {
  return dualSumT(CharacterTable(cfg, S, N, threads), b, threads);
}

namespace {

Eigen::MatrixXcd ballGramFromTable(const FieldConfig& cfg, const CharacterTable& table,
                                   unsigned threads) {
  const BallIndex& ball = table.ball();
  const std::int64_t B = ball.size();
  const size_t R = table.rows();
  const int p = table.p();
  // W(d) = sum over points of e(d.x), via exponent-class counts per column.
  std::vector<std::complex<double>> W(static_cast<size_t>(B));
  parallelFor(B, threads, [&](std::int64_t d) {
    ExponentCounts c = ExponentCounts::zero(p);
    for (size_t i = 0; i < R; ++i) ++c.counts[table.exponent(i, d)];
    W[static_cast<size_t>(d)] = c.realize();
  });
  const int D = ball.digitCount();
  const int q = ball.q();
  Eigen::MatrixXcd G(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(B));
  parallelFor(B, threads, [&](std::int64_t g) {
    const std::vector<int> dg = ball.digits(g);
    std::vector<int> dh(static_cast<size_t>(D));
    for (std::int64_t h = g; h < B; ++h) {
      std::int64_t k = h;
      for (int j = 0; j < D; ++j) {
        dh[static_cast<size_t>(j)] = static_cast<int>(k % q);
        k /= q;
      }
      std::int64_t idx = 0;
      for (int j = D - 1; j >= 0; --j)
        idx = idx * q + cfg.sub(dh[static_cast<size_t>(j)], dg[static_cast<size_t>(j)]);
      const std::complex<double> v = W[static_cast<size_t>(idx)];
      G(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) = v;
      G(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(g)) = std::conj(v);
    }
  });
  return G;
}

}  // namespace

Eigen::MatrixXcd ballGramMatrix(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                                int N, unsigned threads) {
  const CharacterTable table(cfg, S, N, threads);
  return ballGramFromTable(cfg, table, threads);
}

DualityReport dualityCheck(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                           int trials, std::uint64_t seed, unsigned threads) {
  PowerIterationResult col;
  {
    const Eigen::MatrixXcd G = gramMatrix(cfg, S, N, threads);
    col = operatorNorm(G);
  }
  return dualityCheck(cfg, S, N, trials, seed, threads, col);
}

DualityReport dualityCheck(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                           int trials, std::uint64_t seed, unsigned threads,
                           const PowerIterationResult& colNorm) {
  if (trials < 0) throw std::invalid_argument("negative trial count");
  const CharacterTable table(cfg, S, N, threads);
  DualityReport rep;
  rep.points = S.size();
  rep.ballSize = table.ball().size();
  rep.deltaCol = colNorm.value;
  rep.colConverged = colNorm.converged;
  rep.colIterations = colNorm.iterations;
  {
    const Eigen::MatrixXcd BG = ballGramFromTable(cfg, table, threads);
    const PowerIterationResult row = operatorNorm(BG);
    rep.deltaRow = row.value;
    rep.rowConverged = row.converged;
    rep.rowIterations = row.iterations;
  }
  const double dmax = std::max(rep.deltaRow, rep.deltaCol);
  const double denom = std::max({std::abs(rep.deltaRow), std::abs(rep.deltaCol), 1.0});
  rep.relGap = std::abs(rep.deltaRow - rep.deltaCol) / denom;
  rep.gapOk = rep.relGap <= 1e-8;
  rep.trials = trials;
  const double guarded = dmax * (1.0 + 1e-9);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::complex<double>> a(static_cast<size_t>(rep.ballSize));
    SplitMix64 ra(SplitMix64::mix(seed, 2 * static_cast<std::uint64_t>(t)));
    double na = 0.0;
    for (auto& z : a) {
      const double re = ra.nextSymmetric();
      const double im = ra.nextSymmetric();
      z = {re, im};
      na += std::norm(z);
    }
    const double T = sieveSumT(table, a, threads);
    if (na > 0.0) {
      rep.worstPrimalRatio = std::max(rep.worstPrimalRatio, T / (dmax * na));
      if (T > guarded * na) ++rep.violations;
    }
    std::vector<std::complex<double>> b(rep.points);
    SplitMix64 rb(SplitMix64::mix(seed, 2 * static_cast<std::uint64_t>(t) + 1));
    double nb = 0.0;
    for (auto& z : b) {
      const double re = rb.nextSymmetric();
      const double im = rb.nextSymmetric();
      z = {re, im};
      nb += std::norm(z);
    }
    const double Tp = dualSumT(table, b, threads);
    if (nb > 0.0) {
      rep.worstDualRatio = std::max(rep.worstDualRatio, Tp / (dmax * nb));
      if (Tp > guarded * nb) ++rep.violations;
    }
  }
  rep.pass = rep.gapOk && rep.violations == 0 && rep.rowConverged && rep.colConverged;
  return rep;
}

}  // namespace ffsieve
