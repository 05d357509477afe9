#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cspack/cnf.h"
#include "cspack/packing.h"
#include "cspack/reduction.h"

namespace cspack {

/// Process exit codes shared by the command-line tools.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDisagree = 2,
  kExitInconclusive = 3,
};

enum class Agreement { kAgree, kDisagree, kInconclusive };

std::string_view AgreementName(Agreement a);

struct RoundtripOptions {
  int r = 2;
  ReduceOptions reduce;
  std::uint64_t budget = kDefaultNodeBudget;
  int oracle_cap = kDefaultOracleCap;
};

/// Outcome of reduce -> solve -> lift -> evaluate, checked against the
/// brute-force oracle and against lowering the oracle's assignment.
struct RoundtripReport {
  std::size_t universe_size = 0;
  std::size_t set_count = 0;
  std::size_t core_sets = 0;
  SolveResult solve;
  std::optional<Assignment> lifted;
  std::optional<Assignment> oracle;
  std::vector<std::size_t> lowered;
  Agreement agreement = Agreement::kInconclusive;
  /// Empty on agreement; otherwise what went wrong.
  std::string detail;
  double reduce_seconds = 0.0;
  double solve_seconds = 0.0;
};

RoundtripReport Roundtrip(const CnfFormula& formula,
                          const RoundtripOptions& options);

enum class PaddingMode { kNone, kDefault, kFixed };

struct SweepConfig {
  std::vector<int> n_values;
  /// nullopt means r = ceil(log2 n).
  std::optional<int> fixed_r;
  int instances = 1;
  std::uint64_t seed = 0;
  /// Clauses per variable; m = round(density * n).
  double density = 4.0;
  PaddingMode padding = PaddingMode::kNone;
  int padding_width = 0;
  std::uint64_t budget = kDefaultNodeBudget;
  int oracle_cap = kDefaultOracleCap;
  bool planted = false;
  std::string output;
};

/// Reads a JSON sweep description, e.g.
///   {"n_values": [6, 9, 12], "r": "log2", "instances": 5, "seed": 1,
///    "density": 2.0, "padding": "none", "budget": 10000000,
///    "oracle_cap": 24, "planted": false, "output": "bench.csv"}
/// "r" is an integer or "log2"; "padding" is "none", "default" or an integer.
/// Throws std::invalid_argument on bad values.
SweepConfig ParseSweepConfig(const std::string& json_text);

/// Smallest r with 2^r >= n.
int CeilLog2(int n);
int SweepR(const SweepConfig& config, int n);

struct SweepRow {
  int n = 0;
  std::size_t m = 0;
  int r = 0;
  std::size_t universe_size = 0;
  std::size_t set_count = 0;
  double log2_set_count = 0.0;
  double reduce_time = 0.0;
  double solve_time = 0.0;
  std::uint64_t solver_nodes = 0;
  Verdict verdict = Verdict::kNo;
  /// "yes", "no", or "skip" when n exceeds the oracle cap.
  std::string oracle_verdict;
  /// "agree", "inconclusive" (solver budget) or "unchecked" (oracle skipped).
  std::string agreement;
};

/// The formula for one sweep point; independent of r so that fixed-r sweeps
/// with the same seed share formulas.
CnfFormula SweepFormula(const SweepConfig& config, int n, int instance);

class SweepDisagreement : public std::runtime_error {
 public:
  SweepDisagreement(SweepRow row, const std::string& what)
      : std::runtime_error(what), row_(std::move(row)) {}
  const SweepRow& row() const { return row_; }

 private:
  SweepRow row_;
};

/// Runs every (n, instance) point in config order. `on_row` sees each row as
/// it completes. Throws SweepDisagreement as soon as a conclusive verdict
/// contradicts the oracle.
std::vector<SweepRow> RunSweep(
    const SweepConfig& config,
    const std::function<void(const SweepRow&)>& on_row = {});

void WriteCsvHeader(std::ostream& out);
void WriteCsvRow(const SweepRow& row, std::ostream& out);

}  // namespace cspack
