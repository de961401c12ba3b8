#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ffsieve/report.hpp"

using namespace ffsieve;

namespace {

bool rejects(const ExperimentConfig& cfg) {
  try {
    validateConfig(cfg);
  } catch (const std::invalid_argument&) {
    return true;
  }
  return false;
}

std::string tempPath(const char* name) {
  return std::string("/tmp/ffsieve_test_") + name;
}

}  // namespace

TEST_CASE("parsePoly accepts the printed forms") {
  const FieldConfig q3(3, 1, {});
  CHECK(parsePoly(q3, "0") == Poly::zero());
  CHECK(parsePoly(q3, "1") == Poly::constant(1));
  CHECK(parsePoly(q3, "t") == Poly({0, 1}));
  CHECK(parsePoly(q3, "t^2") == Poly({0, 0, 1}));
  CHECK(parsePoly(q3, "2*t") == Poly({0, 2}));
  CHECK(parsePoly(q3, "t^2+2*t+1") == Poly({1, 2, 1}));
  CHECK(parsePoly(q3, " t ^ 2 + 1 ") == Poly({1, 0, 1}));
  for (int d = 0; d <= 3; ++d)
    for (const Poly& f : enumerateMonic(q3, d))
      CHECK(parsePoly(q3, polyToString(q3, f)) == f);
}

TEST_CASE("parsePoly rejects malformed input") {
  const FieldConfig q3(3, 1, {});
  CHECK_THROWS_AS(parsePoly(q3, ""), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "t+t"), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "3*t"), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "t^0"), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "2t"), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "t^"), std::invalid_argument);
  CHECK_THROWS_AS(parsePoly(q3, "+1"), std::invalid_argument);
}

TEST_CASE("readTupleFile parses comments and separators") {
  const FieldConfig q2(2, 1, {});
  const std::string path = tempPath("tuples.txt");
  {
    std::ofstream f(path);
    f << "# header comment\n";
    f << "t; t+1\n";
    f << "\n";
    f << "t^2; 1  # inline comment\n";
  }
  const auto tuples = readTupleFile(q2, path, 2);
  REQUIRE(tuples.size() == 2);
  CHECK(tuples[0][0] == Poly({0, 1}));
  CHECK(tuples[0][1] == Poly({1, 1}));
  CHECK(tuples[1][0] == Poly({0, 0, 1}));
  CHECK(tuples[1][1] == Poly::constant(1));
  CHECK_THROWS_AS(readTupleFile(q2, "/nonexistent/tuples.txt", 2), IoError);
  CHECK_THROWS_AS(readTupleFile(q2, path, 3), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("grid expansion nests in fixed parameter order") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.grid.push_back({"p", 2, 3});
  cfg.grid.push_back({"N", 0, 1});
  const auto tuples = expandGrid(cfg);
  REQUIRE(tuples.size() == 4);
  CHECK((tuples[0].p == 2 && tuples[0].N == 0));
  CHECK((tuples[1].p == 2 && tuples[1].N == 1));
  CHECK((tuples[2].p == 3 && tuples[2].N == 0));
  CHECK((tuples[3].p == 3 && tuples[3].N == 1));
  CHECK(tuples[0].Q == 1);
  cfg.grid.push_back({"p", 2, 3});
  CHECK_THROWS_AS(expandGrid(cfg), std::invalid_argument);
  cfg.grid.pop_back();
  cfg.grid.push_back({"x", 0, 1});
  CHECK_THROWS_AS(expandGrid(cfg), std::invalid_argument);
  cfg.grid.pop_back();
  cfg.grid.push_back({"Q", 2, 1});
  CHECK_THROWS_AS(expandGrid(cfg), std::invalid_argument);
}

TEST_CASE("validateConfig rejects unusable configurations") {
  ExperimentConfig cfg;
  SUBCASE("trials range") {
    cfg.trials = 20000;
    CHECK(rejects(cfg));
  }
  SUBCASE("format name") {
    cfg.format = "xml";
    CHECK(rejects(cfg));
  }
  SUBCASE("suite name") {
    cfg.suite = "everything";
    CHECK(rejects(cfg));
  }
  SUBCASE("composite p") {
    cfg.p = 4;
    CHECK(rejects(cfg));
  }
  SUBCASE("k without kpower") {
    cfg.k = 2;
    CHECK(rejects(cfg));
  }
  SUBCASE("gridded k without kpower") {
    cfg.grid.push_back({"k", 1, 2});
    CHECK(rejects(cfg));
  }
  SUBCASE("ball too large") {
    cfg.N = 15;
    CHECK(rejects(cfg));
  }
  SUBCASE("point set too large for spectral work") {
    cfg.Q = 9;
    cfg.suite = "duality";
    CHECK(rejects(cfg));
  }
  SUBCASE("explicit family with gridded dimension") {
    cfg.family = "explicit:/tmp/whatever.txt";
    cfg.grid.push_back({"n", 1, 2});
    CHECK(rejects(cfg));
  }
  SUBCASE("explicit modulus with gridded p") {
    cfg.h = {1, 1, 1};
    cfg.m = 2;
    cfg.grid.push_back({"p", 2, 3});
    CHECK(rejects(cfg));
  }
  SUBCASE("default is accepted") { CHECK_NOTHROW(validateConfig(cfg)); }
}

TEST_CASE("runExperiment emits suites in canonical order") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.suite = "all";
  cfg.trials = 8;
  const Report rep = runExperiment(cfg);
  CHECK(!rep.hardViolation);
  REQUIRE(rep.suites.size() == 5);
  CHECK(rep.suites[0].suite == "algebra");
  CHECK(rep.suites[1].suite == "orthogonality");
  CHECK(rep.suites[2].suite == "duality");
  CHECK(rep.suites[3].suite == "counts");
  CHECK(rep.suites[4].suite == "bounds");
  for (const SuiteResult& s : rep.suites) CHECK(s.pass);
  REQUIRE(rep.bounds.size() == 1);
  CHECK(rep.bounds[0].sCount == 3);
  CHECK(rep.bounds[0].mClose == 1);
  CHECK(rep.bounds[0].deltaOpt == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(rep.bounds[0].boundTineq == "4");
  CHECK(rep.bounds[0].boundDim1 == "7");
  CHECK(rep.pointsCsvSections.size() == 1);
  CHECK(rep.timing.gramEntries > 0);
  CHECK(rep.timing.trialDraws == 16);
}

TEST_CASE("suite selection subsets") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  SUBCASE("verify") {
    cfg.suite = "verify";
    const Report rep = runExperiment(cfg);
    REQUIRE(rep.suites.size() == 2);
    CHECK(rep.suites[0].suite == "algebra");
    CHECK(rep.suites[1].suite == "orthogonality");
    CHECK(rep.bounds.empty());
  }
  SUBCASE("bound") {
    cfg.suite = "bound";
    const Report rep = runExperiment(cfg);
    REQUIRE(rep.suites.size() == 1);
    CHECK(rep.suites[0].suite == "bounds");
    CHECK(rep.bounds.size() == 1);
  }
  SUBCASE("count") {
    cfg.suite = "count";
    const Report rep = runExperiment(cfg);
    REQUIRE(rep.suites.size() == 1);
    CHECK(rep.suites[0].suite == "counts");
    CHECK(rep.pointsCsvSections.size() == 1);
  }
}

TEST_CASE("grid runs group results by suite then tuple") {
  ExperimentConfig cfg;
  cfg.Q = 1;
  cfg.suite = "all";
  cfg.trials = 4;
  cfg.grid.push_back({"N", 0, 1});
  const Report rep = runExperiment(cfg);
  REQUIRE(rep.suites.size() == 10);
  CHECK((rep.suites[0].suite == "algebra" && rep.suites[0].params.N == 0));
  CHECK((rep.suites[1].suite == "algebra" && rep.suites[1].params.N == 1));
  CHECK(rep.suites[2].suite == "orthogonality");
  CHECK(rep.bounds.size() == 2);
  CHECK(!rep.hardViolation);
}

TEST_CASE("json report is byte deterministic with ordered keys") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.suite = "all";
  cfg.trials = 8;
  const Report r1 = runExperiment(cfg);
  const Report r2 = runExperiment(cfg);
  std::ostringstream j1, j2;
  writeReportJson(r1, j1);
  writeReportJson(r2, j2);
  const std::string js = j1.str();
  CHECK(js == j2.str());
  CHECK(js.find("\"config\"") < js.find("\"suites\""));
  CHECK(js.find("\"suites\"") < js.find("\"bounds\""));
  CHECK(js.find("\"bounds\"") < js.find("\"timing\""));
  CHECK(js.find("\"timing\"") < js.find("\"version\""));
  CHECK(js.find("\"version\"") < js.find("\"s_q_hash\""));
  CHECK(js.find("\"version\": \"ffsieve 1.0.0\"") != std::string::npos);
  CHECK(js.find("\"seed\":\"0\"") != std::string::npos);  // seed kept as string
  CHECK(js.find("\"unit\":\"work_items\"") != std::string::npos);
  CHECK(js.back() == '\n');
  // Doubles carry full precision: 4/13 has a 17 digit decimal image.
  CHECK(js.find("0.61538461538461542") != std::string::npos);
}

TEST_CASE("csv report carries bound columns only on bound rows") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.suite = "all";
  cfg.trials = 4;
  const Report rep = runExperiment(cfg);
  std::ostringstream os;
  writeReportCsv(rep, os);
  std::istringstream in(os.str());
  std::string header, line;
  REQUIRE(std::getline(in, header));
  CHECK(header ==
        "suite,p,m,n,N,Q,k,family,pass,checks_total,checks_failed,s_count,m_close,delta_opt,"
        "delta_converged,bound_tineq,bound_general,bound_dim1,bound_kth,bracket_lemma,"
        "bracket_power,bracket_full,bracket_dim1_power,mtilde_max,argmax,argmax_in_family,"
        "argmax_uses_guard,ratio_tineq,ratio_general,ratio_dim1,ratio_kth,ratio_power,"
        "ratio_lemma,detail");
  const size_t columns = std::count(header.begin(), header.end(), ',') + 1;
  int rows = 0;
  bool sawBounds = false;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') + 1 == static_cast<long>(columns));
    if (line.rfind("bounds,", 0) == 0) {
      sawBounds = true;
      CHECK(line.find(",4,true,") != std::string::npos);  // delta_opt, delta_converged
    }
  }
  CHECK(rows == 5);
  CHECK(sawBounds);
}

TEST_CASE("points csv concatenates parameter sections") {
  ExperimentConfig cfg;
  cfg.Q = 1;
  cfg.suite = "count";
  cfg.grid.push_back({"N", 0, 1});
  const Report rep = runExperiment(cfg);
  REQUIRE(rep.pointsCsvSections.size() == 2);
  std::ostringstream os;
  writePointsCsv(rep, os);
  const std::string s = os.str();
  CHECK(s.find("# p=2 m=1 n=1 N=0 Q=1 k=1 family=full\n") != std::string::npos);
  CHECK(s.find("# p=2 m=1 n=1 N=1 Q=1 k=1 family=full\n") != std::string::npos);
  CHECK(s.find("index,f,r,lcm_degree,count\n") != std::string::npos);
}

TEST_CASE("explicit family flows through an experiment") {
  const std::string path = tempPath("family.txt");
  {
    std::ofstream f(path);
    f << "t\n";
    f << "t+1\n";
  }
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.family = std::string("explicit:") + path;
  cfg.suite = "all";
  cfg.trials = 4;
  const Report rep = runExperiment(cfg);
  CHECK(!rep.hardViolation);
  for (const SuiteResult& s : rep.suites) CHECK(s.pass);
  std::remove(path.c_str());
}

TEST_CASE("kpower family reports the power bound") {
  ExperimentConfig cfg;
  cfg.N = 1;
  cfg.Q = 1;
  cfg.k = 2;
  cfg.family = "kpower";
  cfg.suite = "bound";
  const Report rep = runExperiment(cfg);
  CHECK(!rep.hardViolation);
  REQUIRE(rep.bounds.size() == 1);
  CHECK(rep.bounds[0].boundKth == "17/2");
  CHECK(rep.bounds[0].params.k == 2);
}

TEST_CASE("field modulus override reaches the field") {
  ExperimentConfig cfg;
  cfg.p = 2;
  cfg.m = 2;
  cfg.h = {1, 1, 1};
  cfg.Q = 1;
  cfg.suite = "verify";
  const Report rep = runExperiment(cfg);
  CHECK(!rep.hardViolation);
  for (const SuiteResult& s : rep.suites) CHECK(s.pass);
}

TEST_CASE("hash changes when the grid changes") {
  ExperimentConfig a;
  a.Q = 1;
  a.suite = "count";
  ExperimentConfig b = a;
  b.Q = 2;
  CHECK(runExperiment(a).sqHash != runExperiment(b).sqHash);
}
