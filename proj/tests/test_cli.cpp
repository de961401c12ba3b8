#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FFSIEVE_BIN
#error "FFSIEVE_BIN must point at the built binary"
#endif

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const std::string outPath = "/tmp/ffsieve_cli_" + std::to_string(counter++) + ".out";
  const std::string cmd =
      std::string(FFSIEVE_BIN) + " " + args + " > " + outPath + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(outPath);
  std::remove(outPath.c_str());
  return r;
}

}  // namespace

TEST_CASE("valid run exits zero with a json report") {
  const RunResult r = run("--p 2 --N 1 --Q 1 --suite bound");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("\"version\": \"ffsieve 1.0.0\"") != std::string::npos);
  CHECK(r.out.find("\"suite\":\"bounds\"") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("--bogus-flag").exitCode == 2);
  CHECK(run("--p").exitCode == 2);  // missing value
}

TEST_CASE("validation errors exit 3") {
  CHECK(run("--p 4").exitCode == 3);
  CHECK(run("--suite everything").exitCode == 3);
  CHECK(run("--k 2").exitCode == 3);
  CHECK(run("--grid N=x..2").exitCode == 3);
  CHECK(run("--N 15").exitCode == 3);
}

TEST_CASE("io errors exit 4") {
  CHECK(run("--family explicit:/nonexistent/tuples.txt --suite count").exitCode == 4);
  CHECK(run("--suite count --out /nonexistent/dir/report.json").exitCode == 4);
}

TEST_CASE("help exits zero") {
  const RunResult r = run("--help");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("--family") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string cfgPath = "/tmp/ffsieve_cli_cfg.ini";
  {
    std::ofstream f(cfgPath);
    f << "p=3\n";
    f << "N=1\n";
    f << "Q=1\n";
    f << "suite=bound\n";
  }
  const RunResult fromFile = run("--config " + cfgPath);
  CHECK(fromFile.exitCode == 0);
  CHECK(fromFile.out.find("\"p\":3") != std::string::npos);
  const RunResult overridden = run("--config " + cfgPath + " --p 2");
  CHECK(overridden.exitCode == 0);
  CHECK(overridden.out.find("\"p\":2") != std::string::npos);
  CHECK(overridden.out.find("\"p\":3") == std::string::npos);
  std::remove(cfgPath.c_str());
}

TEST_CASE("repeated runs are byte identical") {
  // Q=2 at N=1 genuinely exceeds the closed-form denominator-count bound
  // (the four reciprocal quadratics cluster within 2^-3), so the run must
  // both flag the violation via exit code 1 and stay byte deterministic.
  const std::string args = "--p 2 --N 1 --Q 2 --suite all --trials 8 --seed 42";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.exitCode == 1);
  CHECK(!a.out.empty());
  CHECK(a.out == b.out);
  CHECK(a.exitCode == b.exitCode);
  CHECK(a.out.find("\"name\":\"bounds.delta_le_general\",\"pass\":false") !=
        std::string::npos);
}

TEST_CASE("violation-free configs exit zero on the all suite") {
  const RunResult r = run("--p 2 --N 1 --Q 1 --suite all --trials 8 --seed 42");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("\"pass\":false") == std::string::npos);
}

TEST_CASE("grid flag expands into multiple parameter rows") {
  const RunResult r = run("--p 2 --Q 1 --suite count --grid N=0..2 --format csv");
  CHECK(r.exitCode == 0);
  std::istringstream in(r.out);
  std::string line;
  int countRows = 0;
  while (std::getline(in, line))
    if (line.rfind("counts,", 0) == 0) ++countRows;
  CHECK(countRows == 3);
}

TEST_CASE("csv output with counts writes a points sidecar") {
  const std::string outPath = "/tmp/ffsieve_cli_report.csv";
  const RunResult r =
      run("--p 2 --N 1 --Q 1 --suite count --format csv --out " + outPath);
  CHECK(r.exitCode == 0);
  const std::string report = slurp(outPath);
  CHECK(report.rfind("suite,p,m,", 0) == 0);
  const std::string points = slurp(outPath + ".points.csv");
  CHECK(points.find("index,f,r,lcm_degree,count") != std::string::npos);
  std::remove(outPath.c_str());
  std::remove((outPath + ".points.csv").c_str());
}

TEST_CASE("seed changes randomized draws but not set hashes") {
  const RunResult a = run("--p 2 --N 1 --Q 2 --suite duality --trials 4 --seed 1");
  const RunResult b = run("--p 2 --N 1 --Q 2 --suite duality --trials 4 --seed 2");
  CHECK(a.exitCode == 0);
  CHECK(b.exitCode == 0);
  auto hashOf = [](const std::string& s) {
    const size_t pos = s.find("\"s_q_hash\"");
    return s.substr(pos, 40);
  };
  CHECK(hashOf(a.out) == hashOf(b.out));
  auto worstOf = [](const std::string& s) {
    const size_t pos = s.find("worst_primal=");
    return s.substr(pos, 30);
  };
  CHECK(worstOf(a.out) != worstOf(b.out));
}
