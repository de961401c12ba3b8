#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>

#include "ffsieve/prng.hpp"
#include "ffsieve/sieve.hpp"
#include "oracles.hpp"

using namespace ffsieve;

namespace {

std::vector<std::pair<Poly, Poly>> asFractions(const FareyPoint& pt) {
  std::vector<std::pair<Poly, Poly>> x;
  for (size_t c = 0; c < pt.r.size(); ++c) x.emplace_back(pt.r[c], pt.f[c]);
  return x;
}

std::vector<std::pair<Poly, Poly>> diffOf(const FieldConfig& cfg, const FareyPoint& a,
                                          const FareyPoint& b) {
  std::vector<std::pair<Poly, Poly>> x;
  for (size_t c = 0; c < a.r.size(); ++c)
    x.push_back(subtractCoordinate(cfg, a.r[c], a.f[c], b.r[c], b.f[c]));
  return x;
}

}  // namespace

TEST_CASE("ball index enumerates tuples in canonical order") {
  const FieldConfig q3(3, 1, {});
  const BallIndex ball(q3, 2, 1);
  CHECK(ball.size() == 81);  // 3^(2*2)
  CHECK(ball.digitCount() == 4);
  CHECK(ball.tuple(0) == std::vector<Poly>{Poly::zero(), Poly::zero()});
  // Coordinate 0 varies fastest, little-endian coefficients within it.
  CHECK(ball.tuple(1) == std::vector<Poly>{Poly::constant(1), Poly::zero()});
  CHECK(ball.tuple(3) == std::vector<Poly>{Poly({0, 1}), Poly::zero()});
  CHECK(ball.tuple(9) == std::vector<Poly>{Poly::zero(), Poly::constant(1)});
  for (std::int64_t i = 0; i < ball.size(); ++i) {
    const auto d = ball.digits(i);
    std::int64_t key = 0;
    for (size_t j = d.size(); j-- > 0;) key = key * 3 + d[j];
    CHECK(key == i);
    for (const Poly& g : ball.tuple(i)) CHECK(g.degree() <= 1);
  }
}

TEST_CASE("exponent counts realize exactly in characteristic 2") {
  ExponentCounts c = ExponentCounts::zero(2);
  c.counts = {5, 3};
  CHECK(c.realize() == std::complex<double>(2.0, 0.0));
  CHECK(c.total() == 8);
  ExponentCounts d = ExponentCounts::zero(2);
  d.counts = {1, 1};
  const ExponentCounts conv = convolve(c, d);
  // (5,3) * (1,1): class 0 gets 5+3, class 1 gets 5+3.
  CHECK(conv.counts == std::vector<std::int64_t>{8, 8});
  CHECK(conv.realize() == std::complex<double>(0.0, 0.0));
}

TEST_CASE("laurent digits stack coordinate expansions") {
  const FieldConfig q2(2, 1, {});
  const std::vector<std::pair<Poly, Poly>> x = {{Poly::constant(1), Poly({1, 1})},
                                                {Poly::constant(1), Poly({0, 1})}};
  const auto d = laurentDigits(q2, x, 1);
  // Depth N+1 = 2 per coordinate: 1/(t+1) -> (1,1); 1/t -> (1,0).
  CHECK(d == std::vector<int>{1, 1, 1, 0});
}

TEST_CASE("charBallSum matches the literal psi oracle") {
  const FieldConfig q2(2, 1, {});
  const FieldConfig q3(3, 1, {});
  const FieldConfig q4(2, 2, {});
  for (const FieldConfig* cfg : {&q2, &q3, &q4}) {
    for (int n = 1; n <= 2; ++n) {
      const auto S = fareySet(*cfg, ModuliFamily::full(n), 1);
      for (int N = 0; N <= 1; ++N) {
        for (const FareyPoint& pt : S) {
          const auto x = asFractions(pt);
          const std::complex<double> lib = charBallSum(*cfg, x, N);
          const std::complex<double> ref = oracle::ballCharSum(*cfg, x, N);
          CHECK(std::abs(lib - ref) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("charBallSum is the ball size on zero and vanishes off the block") {
  const FieldConfig q3(3, 1, {});
  const std::vector<std::pair<Poly, Poly>> zero = {{Poly::zero(), Poly::one(q3)}};
  CHECK(charBallSum(q3, zero, 2) == std::complex<double>(27.0, 0.0));
  // 1/t has c_1 != 0, so the depth-N sums vanish for every N >= 0.
  const std::vector<std::pair<Poly, Poly>> x = {{Poly::constant(1), Poly({0, 1})}};
  for (int N = 0; N <= 3; ++N) CHECK(std::abs(charBallSum(q3, x, N)) < 1e-12);
  // 1/t^3 has c_1 = c_2 = 0: full sum for N <= 1, zero for N >= 2.
  const std::vector<std::pair<Poly, Poly>> y = {{Poly::constant(1), Poly({0, 0, 0, 1})}};
  CHECK(charBallSum(q3, y, 1) == std::complex<double>(9.0, 0.0));
  CHECK(std::abs(charBallSum(q3, y, 2)) < 1e-12);
}

TEST_CASE("coord sum table reproduces single coordinate ball sums") {
  const FieldConfig q3(3, 1, {});
  const int N = 1;
  const CoordSumTable table(q3, N);
  for (int d1 = 0; d1 < 3; ++d1)
    for (int d2 = 0; d2 < 3; ++d2) {
      const int digits[] = {d1, d2};
      const std::int64_t key = table.keyOf(digits);
      // Build a fraction with expansion digits (d1, d2): (d1 t + d2) / t^2.
      const Poly num({d2, d1});
      const std::vector<std::pair<Poly, Poly>> x = {{num, Poly({0, 0, 1})}};
      const ExponentCounts direct = charBallCounts(q3, x, N);
      CHECK(table.at(key).counts == direct.counts);
    }
}

TEST_CASE("gram matrix equals literal difference character sums") {
  const FieldConfig q3(3, 1, {});
  const auto S = fareySet(q3, ModuliFamily::full(1), 1);
  const int N = 1;
  const Eigen::MatrixXcd G = gramMatrix(q3, S, N);
  REQUIRE(G.rows() == static_cast<Eigen::Index>(S.size()));
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j) {
      const std::complex<double> ref = oracle::ballCharSum(q3, diffOf(q3, S[i], S[j]), N);
      CHECK(std::abs(G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref) <
            1e-9);
    }
}

TEST_CASE("gram matrix is the scaled closeness indicator") {
  const FieldConfig q2(2, 1, {});
  const auto S = fareySet(q2, ModuliFamily::full(2), 1);
  const int N = 1;
  const double block = 16.0;  // q^(n(N+1))
  const Eigen::MatrixXcd G = gramMatrix(q2, S, N);
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j) {
      const bool close = closePair(q2, S[i], S[j], N + 2);
      const std::complex<double> want = close ? block : 0.0;
      CHECK(std::abs(G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - want) <
            1e-9);
    }
}

TEST_CASE("gram matrix is Hermitian positive semidefinite") {
  const FieldConfig q3(3, 1, {});
  const auto S = fareySet(q3, ModuliFamily::full(1), 2);
  const Eigen::MatrixXcd G = gramMatrix(q3, S, 1);
  CHECK((G - G.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  CHECK(es.eigenvalues().minCoeff() > -1e-9);
  for (Eigen::Index i = 0; i < G.rows(); ++i) CHECK(std::abs(G(i, i) - 9.0) < 1e-12);
}

TEST_CASE("operator norm matches dense eigensolver") {
  const FieldConfig q2(2, 1, {});
  const FieldConfig q3(3, 1, {});
  struct Case {
    const FieldConfig* cfg;
    ModuliFamily fam;
    int Q, N;
  };
  const Case cases[] = {{&q2, ModuliFamily::full(1), 2, 1},
                        {&q2, ModuliFamily::full(2), 1, 0},
                        {&q3, ModuliFamily::full(1), 1, 1},
                        {&q2, ModuliFamily::kthPower(1, 2), 1, 1}};
  for (const Case& c : cases) {
    const auto S = fareySet(*c.cfg, c.fam, c.Q);
    const Eigen::MatrixXcd G = gramMatrix(*c.cfg, S, c.N);
    const PowerIterationResult r = operatorNorm(G);
    CHECK(r.converged);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    CHECK(r.value == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-9));
    // Rayleigh quotient of the returned vector reproduces the value.
    const double rq = (r.vector.adjoint() * G * r.vector).real()(0, 0) / r.vector.squaredNorm();
    CHECK(rq == doctest::Approx(r.value).epsilon(1e-9));
  }
}

TEST_CASE("frozen spectrum for the smallest nontrivial gram") {
  const FieldConfig q2(2, 1, {});
  const auto S = fareySet(q2, ModuliFamily::full(1), 1);
  const Eigen::MatrixXcd G = gramMatrix(q2, S, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  REQUIRE(es.eigenvalues().size() == 3);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(operatorNorm(G).value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("operator norm rejects non Hermitian input") {
  Eigen::MatrixXcd A(2, 2);
  A << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(operatorNorm(A), std::invalid_argument);
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2, 2);
  const PowerIterationResult r = operatorNorm(Z);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
}

TEST_CASE("character table exponents match psi") {
  const FieldConfig q3(3, 1, {});
  const auto S = fareySet(q3, ModuliFamily::full(1), 1);
  const int N = 1;
  const CharacterTable table(q3, S, N);
  CHECK(table.rows() == S.size());
  CHECK(table.cols() == 9);
  for (size_t i = 0; i < S.size(); ++i)
    for (std::int64_t g = 0; g < table.cols(); ++g)
      CHECK(static_cast<int>(table.exponent(i, g)) ==
            psi(q3, asFractions(S[i]), table.ball().tuple(g)).exponent);
}

TEST_CASE("point gram is the character matrix times its adjoint") {
  const FieldConfig q2(2, 1, {});
  const auto S = fareySet(q2, ModuliFamily::full(2), 1);
  const int N = 1;
  const CharacterTable table(q2, S, N);
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(S.size()), table.cols());
  CharValue v;
  v.p = q2.p();
  for (size_t i = 0; i < S.size(); ++i)
    for (std::int64_t g = 0; g < table.cols(); ++g) {
      v.exponent = table.exponent(i, g);
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) = v.value();
    }
  const Eigen::MatrixXcd G = gramMatrix(q2, S, N);
  CHECK((A * A.adjoint() - G).cwiseAbs().maxCoeff() < 1e-9);
  // Ball gram is the adjoint product in the other order.
  const Eigen::MatrixXcd B = ballGramMatrix(q2, S, N);
  CHECK((A.adjoint() * A - B).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("sieve sums are the quadratic forms of the grams") {
  const FieldConfig q3(3, 1, {});
  const auto S = fareySet(q3, ModuliFamily::full(1), 1);
  const int N = 1;
  const CharacterTable table(q3, S, N);
  const Eigen::MatrixXcd B = ballGramMatrix(q3, S, N);
  const Eigen::MatrixXcd G = gramMatrix(q3, S, N);
  SplitMix64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::complex<double>> a(static_cast<size_t>(table.cols()));
    Eigen::VectorXcd av(table.cols());
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = {rng.nextSymmetric(), rng.nextSymmetric()};
      av(static_cast<Eigen::Index>(i)) = a[i];
    }
    const double T = sieveSumT(table, a);
    const double quad = (av.adjoint() * B * av).real()(0, 0);
    CHECK(T == doctest::Approx(quad).epsilon(1e-9));

    std::vector<std::complex<double>> b(S.size());
    Eigen::VectorXcd bv(static_cast<Eigen::Index>(S.size()));
    for (size_t i = 0; i < b.size(); ++i) {
      b[i] = {rng.nextSymmetric(), rng.nextSymmetric()};
      bv(static_cast<Eigen::Index>(i)) = b[i];
    }
    const double Tp = dualSumT(table, b);
    // T' = b^T G-conj b in the unconjugated convention: row sums use e(g.x),
    // so the quadratic form runs over the transposed gram.
    const double quadp = (bv.adjoint() * G.transpose() * bv).real()(0, 0);
    CHECK(Tp == doctest::Approx(quadp).epsilon(1e-9));
  }
}

TEST_CASE("duality report frozen values") {
  const FieldConfig q2(2, 1, {});
  const auto S = fareySet(q2, ModuliFamily::full(1), 2);
  const DualityReport d = dualityCheck(q2, S, 1, 32, 0);
  CHECK(d.pass);
  CHECK(d.points == 11);
  CHECK(d.ballSize == 4);
  CHECK(d.deltaRow == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(d.deltaCol == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(d.relGap < 1e-8);
  CHECK(d.violations == 0);
  CHECK(d.worstPrimalRatio <= 1.0 + 1e-9);
  CHECK(d.worstDualRatio <= 1.0 + 1e-9);
  CHECK(d.worstPrimalRatio > 0.0);

  const FieldConfig q3(3, 1, {});
  const auto S3 = fareySet(q3, ModuliFamily::full(1), 1);
  const DualityReport d3 = dualityCheck(q3, S3, 1, 16, 7);
  CHECK(d3.pass);
  CHECK(d3.deltaCol == doctest::Approx(9.0).epsilon(1e-9));

  const auto S22 = fareySet(q2, ModuliFamily::full(2), 1);
  const DualityReport d22 = dualityCheck(q2, S22, 0, 16, 7);
  CHECK(d22.pass);
  CHECK(d22.deltaCol == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("duality check reuses a precomputed norm") {
  const FieldConfig q2(2, 1, {});
  const auto S = fareySet(q2, ModuliFamily::full(1), 2);
  const PowerIterationResult col = operatorNorm(gramMatrix(q2, S, 1));
  const DualityReport a = dualityCheck(q2, S, 1, 8, 3);
  const DualityReport b = dualityCheck(q2, S, 1, 8, 3, 1, col);
  CHECK(a.deltaCol == b.deltaCol);
  CHECK(a.deltaRow == b.deltaRow);
  CHECK(a.violations == b.violations);
  CHECK(a.worstPrimalRatio == b.worstPrimalRatio);
}

TEST_CASE("results do not depend on the thread count") {
  const FieldConfig q3(3, 1, {});
  const auto S = fareySet(q3, ModuliFamily::full(1), 2);
  const int N = 1;
  const Eigen::MatrixXcd G1 = gramMatrix(q3, S, N, 1);
  const Eigen::MatrixXcd G4 = gramMatrix(q3, S, N, 4);
  CHECK(G1 == G4);  // bitwise: entries are computed independently per cell
  const Eigen::MatrixXcd B1 = ballGramMatrix(q3, S, N, 1);
  const Eigen::MatrixXcd B4 = ballGramMatrix(q3, S, N, 4);
  CHECK(B1 == B4);
  const CharacterTable t1(q3, S, N, 1);
  const CharacterTable t4(q3, S, N, 4);
  const std::vector<std::complex<double>> a(static_cast<size_t>(t1.cols()), {0.1, 0.2});
  const std::vector<std::complex<double>> b(S.size(), {0.5, -0.25});
  CHECK(sieveSumT(t1, a, 1) == sieveSumT(t4, a, 4));
  CHECK(dualSumT(t1, b, 1) == dualSumT(t4, b, 4));
}
