#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffsieve/farey.hpp"
#include "ffsieve/gfpoly.hpp"
#include "ffsieve/selfcheck.hpp"

namespace ffsieve {

inline constexpr const char* kVersion = "ffsieve 1.0.0";

// Inclusive integer range for one gridded parameter.
struct GridRange {
  std::string param;  // one of p, m, n, N, Q, k
  int lo = 0;
  int hi = 0;
};

struct ExperimentConfig {
  int p = 2;
  int m = 1;
  std::vector<int> h;  // modulus coefficients over F_p, little-endian; empty = canonical
  int n = 1;
  int N = 0;
  int Q = 0;
  int k = 1;
  std::string family = "full";  // full | kpower | explicit:<path>
  int trials = 32;
  std::uint64_t seed = 0;
  std::string suite = "all";  // verify | bound | count | duality | all
  std::string out;            // empty = stdout
  std::string format = "json";
  std::vector<GridRange> grid;
};

// One expanded grid point.
struct TupleParams {
  int p = 2, m = 1, n = 1, N = 0, Q = 0, k = 1;
  std::string family;
};

// Deterministic work counters; the only timing the report carries.  Wall
// clock goes to stderr so that output files are byte-reproducible.
struct WorkCounters {
  std::int64_t gramEntries = 0;      // Gram matrix cells filled (point and ball)
  std::int64_t powerIterations = 0;  // matrix-vector products in power iteration
  std::int64_t charSums = 0;         // exact ball character sums evaluated
  std::int64_t pairChecks = 0;       // closeness predicate evaluations
  std::int64_t trialDraws = 0;       // random coefficient vectors drawn
};

struct SuiteResult {
  std::string suite;
  TupleParams params;
  std::vector<CheckResult> checks;
  bool pass = true;
};

// Per-tuple bound table.  Exact values are decimal rational strings; ratios
// are delta_opt over the bound, NaN when not applicable.
struct BoundReportEntry {
  TupleParams params;
  std::int64_t sCount = 0;
  std::int64_t mClose = 0;  // largest closeness class at radius q^-(N+2)
  double deltaOpt = 0.0;
  bool deltaConverged = false;
  std::string boundTineq;
  std::string boundGeneral;
  std::string boundDim1;  // empty unless n = 1
  std::string boundKth;
  std::string bracketLemma;
  std::string bracketPower;
  std::string bracketFull;
  std::string bracketDim1Power;
  std::string mTildeMax;
  std::string argmax;
  bool argmaxInFamily = false;
  bool argmaxUsesGuard = false;
  double ratioTineq = 0.0;
  double ratioGeneral = 0.0;
  double ratioDim1 = 0.0;  // NaN unless n = 1
  double ratioKth = 0.0;
  double ratioPower = 0.0;
  double ratioLemma = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<SuiteResult> suites;  // suite-major, tuples in grid order within
  std::vector<BoundReportEntry> bounds;
  WorkCounters timing;
  std::string version = kVersion;
  std::uint64_t sqHash = 0;  // FNV-1a folded over every tuple's point set
  bool hardViolation = false;
  std::vector<std::string> pointsCsvSections;  // one per tuple, counts suite only
};

// Throws std::invalid_argument on any contract violation, including scale
// guards evaluated per expanded grid tuple.
void validateConfig(const ExperimentConfig& cfg);

// Expanded tuples ordered by p, m, n, N, Q, k ascending.
std::vector<TupleParams> expandGrid(const ExperimentConfig& cfg);

Report runExperiment(const ExperimentConfig& cfg);

void writeReportJson(const Report& rep, std::ostream& os);
void writeReportCsv(const Report& rep, std::ostream& os);
// Concatenated per-tuple point tables, each prefixed by a '#' params line.
void writePointsCsv(const Report& rep, std::ostream& os);

// Inverse of polyToString for one polynomial ("t^3+2*t+1", "0", ...).
Poly parsePoly(const FieldConfig& cfg, const std::string& text);

// Raised for file-system problems so the CLI can map them to its own exit
// code, distinct from validation errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One tuple per line, coordinates ';'-separated, '#' comments and blank
// lines ignored.  Throws IoError when the file cannot be read and
// std::invalid_argument on malformed content.
std::vector<std::vector<Poly>> readTupleFile(const FieldConfig& cfg, const std::string& path, int n);

}  // namespace ffsieve
