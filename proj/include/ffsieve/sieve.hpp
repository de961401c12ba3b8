#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffsieve/farey.hpp"
#include "ffsieve/gfpoly.hpp"

namespace ffsieve {

// Canonical enumeration of the ball B(0,N) in n coordinates: all n-tuples of
// polynomials with deg <= N.  An index is a base-q counter over the n*(N+1)
// coefficient digits (element indices), coordinate 0 least significant and
// each coordinate's coefficients little-endian, so index 0 is the zero tuple.
class BallIndex {
 public:
  BallIndex(const FieldConfig& cfg, int n, int N);

  std::int64_t size() const { return size_; }
  int digitCount() const { return digitCount_; }
  int n() const { return n_; }
  int N() const { return N_; }
  int q() const { return q_; }

  // Element-index digits of tuple idx, length digitCount().
  std::vector<int> digits(std::int64_t idx) const;
  std::vector<Poly> tuple(std::int64_t idx) const;

 private:
  int q_ = 0;
  int n_ = 0;
  int N_ = 0;
  int digitCount_ = 0;
  std::int64_t size_ = 0;
};

// Character sums are accumulated as integer counts per exponent class mod p
// and realized to a complex number once at the end.  For p = 2 the realized
// value is the exact integer counts[0] - counts[1].
struct ExponentCounts {
  int p = 2;
  std::vector<std::int64_t> counts;

  static ExponentCounts zero(int p);
  std::complex<double> realize() const;
  std::int64_t total() const;
};

ExponentCounts convolve(const ExponentCounts& a, const ExponentCounts& b);

// Concatenated per-coordinate expansion digits c_1..c_{N+1} of the point, as
// element indices (coordinate-major).  The exponent of e(g.x) for a ball
// tuple g is trace-linear in these digits, so differences of points map to
// digitwise differences.
std::vector<int> laurentDigits(const FieldConfig& cfg,
                               const std::vector<std::pair<Poly, Poly>>& x, int N);
std::vector<int> laurentDigits(const FieldConfig& cfg, const FareyPoint& x, int N);

// Exact sum of e(g.x) over the ball B(0,N), as exponent-class counts.  Each
// coordinate is summed literally over its q^(N+1) ball polynomials; the
// coordinate counts are combined by convolution (the product structure of
// the character over coordinates).
ExponentCounts charBallCounts(const FieldConfig& cfg,
                              const std::vector<std::pair<Poly, Poly>>& x, int N);
std::complex<double> charBallSum(const FieldConfig& cfg,
                                 const std::vector<std::pair<Poly, Poly>>& x, int N);

// Single-coordinate ball sums for every possible expansion-digit vector,
// keyed by the base-q packing of c_1..c_{N+1}.  Each entry is built by
// literal summation over the q^(N+1) ball polynomials.
class CoordSumTable {
 public:
  CoordSumTable(const FieldConfig& cfg, int N, unsigned threads = 1);

  std::int64_t keyOf(const int* digits) const;
  const ExponentCounts& at(std::int64_t key) const { return table_[static_cast<size_t>(key)]; }
  int N() const { return N_; }

 private:
  int q_ = 0;
  int N_ = 0;
  std::vector<ExponentCounts> table_;
};

// Gram matrix of the point set: entry (i,j) = charBallSum(x_i - x_j, N),
// evaluated through the digitwise difference of the cached expansions.
// Upper triangle computed, lower filled by conjugation.
Eigen::MatrixXcd gramMatrix(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                            int N, unsigned threads = 1);

struct PowerIterationResult {
  double value = 0.0;
  Eigen::VectorXcd vector;
  bool converged = false;
  int iterations = 0;
  bool restarted = false;
};

// Largest-magnitude eigenvalue of a Hermitian matrix by power iteration with
// a fixed-seed complex start; stops when the relative Rayleigh-quotient
// change falls below 1e-12, with one restart from a second fixed seed on
// stagnation.  Throws std::invalid_argument if the input fails the Hermitian
// check (1e-9 relative).
PowerIterationResult operatorNorm(const Eigen::MatrixXcd& G);

// Exponent of e(g.x_i) for every point row i and ball column g.
class CharacterTable {
 public:
  CharacterTable(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                 unsigned threads = 1);

  size_t rows() const { return rows_; }
  std::int64_t cols() const { return ball_.size(); }
  int p() const { return p_; }
  const BallIndex& ball() const { return ball_; }
  std::uint8_t exponent(size_t i, std::int64_t g) const {
    return exp_[i * static_cast<size_t>(ball_.size()) + static_cast<size_t>(g)];
  }

 private:
  size_t rows_ = 0;
  int p_ = 2;
  BallIndex ball_;
  std::vector<std::uint8_t> exp_;
};

// T = sum over points x of |sum_g a_g e(g.x)|^2; inner sums are folded in
// canonical ball order, the outer sum in point order, so results do not
// depend on the thread count.
double sieveSumT(const CharacterTable& table, const std::vector<std::complex<double>>& a,
                 unsigned threads = 1);
double sieveSumT(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                 const std::vector<std::complex<double>>& a, unsigned threads = 1);

// T' = sum over ball tuples g of |sum over points x of b_x e(g.x)|^2.
double dualSumT(const CharacterTable& table, const std::vector<std::complex<double>>& b,
                unsigned threads = 1);
double dualSumT(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                const std::vector<std::complex<double>>& b, unsigned threads = 1);

// Gram matrix of the ball character columns: entry (g,h) = W(h-g) with
// W(d) = sum over points x of e(d.x).  Shares its nonzero spectrum with the
// point Gram matrix.
Eigen::MatrixXcd ballGramMatrix(const FieldConfig& cfg, const std::vector<FareyPoint>& S,
                                int N, unsigned threads = 1);

struct DualityReport {
  size_t points = 0;
  std::int64_t ballSize = 0;
  double deltaRow = 0.0;
  double deltaCol = 0.0;
  double relGap = 0.0;
  bool gapOk = false;
  bool rowConverged = false;
  bool colConverged = false;
  int rowIterations = 0;
  int colIterations = 0;
  int trials = 0;
  int violations = 0;
  double worstPrimalRatio = 0.0;  // max T  / (max(deltaRow, deltaCol) * sum |a|^2)
  double worstDualRatio = 0.0;    // max T' / (max(deltaRow, deltaCol) * sum |b|^2)
  bool pass = false;
};

// Computes deltaCol from the point Gram and deltaRow from the ball Gram,
// checks they agree within 1e-8 relative, then draws `trials` random
// coefficient vectors and checks T and T' against max(deltaRow, deltaCol)
// with a 1e-9 relative guard.  Failures are recorded, not thrown.  The
// second overload reuses a precomputed point-Gram operator norm.
DualityReport dualityCheck(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                           int trials, std::uint64_t seed, unsigned threads = 1);
DualityReport dualityCheck(const FieldConfig& cfg, const std::vector<FareyPoint>& S, int N,
                           int trials, std::uint64_t seed, unsigned threads,
                           const PowerIterationResult& colNorm);

}  // namespace ffsieve
