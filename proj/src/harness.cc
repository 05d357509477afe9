#include "cspack/harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "cspack/rng.h"
#include "json.hpp"

namespace cspack {

std::string_view AgreementName(Agreement a) {
  switch (a) {
    case Agreement::kAgree:
      return "AGREE";
    case Agreement::kDisagree:
      return "DISAGREE";
    case Agreement::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RoundtripReport Roundtrip(const CnfFormula& formula,
                          const RoundtripOptions& options) {
  RoundtripReport rep;
  auto t0 = Clock::now();
  Reduction red = Reduce(formula, options.r, options.reduce);
  rep.reduce_seconds = SecondsSince(t0);
  rep.universe_size = red.instance.universe_size();
  rep.set_count = red.instance.set_count();
  rep.core_sets = red.witness.core_count();

  t0 = Clock::now();
  rep.solve = SolveExact(red.instance, options.budget);
  rep.solve_seconds = SecondsSince(t0);
  rep.oracle = BruteForceSat(formula, options.oracle_cap);

  auto disagree = [&rep](std::string why) {
    rep.agreement = Agreement::kDisagree;
    rep.detail = std::move(why);
    return rep;
  };

  if (rep.oracle) {
    try {
      rep.lowered = LowerAssignmentToPacking(red.witness, *rep.oracle);
    } catch (const WitnessError& e) {
      return disagree(std::string("oracle assignment does not lower: ") +
                      e.what());
    }
    if (auto v = VerifyPacking(red.instance, rep.lowered); !v) {
      return disagree("lowered packing rejected: " + v.reason);
    }
  }

  switch (rep.solve.verdict) {
    case Verdict::kBudgetExhausted:
      rep.agreement = Agreement::kInconclusive;
      rep.detail = "solver budget exhausted";
      return rep;
    case Verdict::kNo:
      if (rep.oracle) return disagree("solver found no packing, formula is SAT");
      break;
    case Verdict::kYes: {
      if (auto v = VerifyPacking(red.instance, rep.solve.packing); !v) {
        return disagree("solver packing rejected: " + v.reason);
      }
      try {
        rep.lifted = LiftPackingToAssignment(red.witness, rep.solve.packing);
      } catch (const WitnessError& e) {
        return disagree(std::string("corrupted witness: ") + e.what());
      }
      if (!Evaluate(formula, *rep.lifted)) {
        return disagree("lifted assignment does not satisfy the formula");
      }
      if (!rep.oracle) return disagree("packing found, oracle says UNSAT");
      break;
    }
  }
  rep.agreement = Agreement::kAgree;
  return rep;
}

SweepConfig ParseSweepConfig(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  SweepConfig c;
  try {
    c.n_values = j.at("n_values").get<std::vector<int>>();
    const json& r = j.value("r", json("log2"));
    if (r.is_string()) {
      if (r.get<std::string>() != "log2") {
        throw std::invalid_argument("sweep config: \"r\" must be an integer or \"log2\"");
      }
    } else {
      c.fixed_r = r.get<int>();
    }
    c.instances = j.value("instances", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.density = j.value("density", 4.0);
    const json& pad = j.value("padding", json("none"));
    if (pad.is_string()) {
      const auto s = pad.get<std::string>();
      if (s == "none") {
        c.padding = PaddingMode::kNone;
      } else if (s == "default") {
        c.padding = PaddingMode::kDefault;
      } else {
        throw std::invalid_argument("sweep config: unknown padding \"" + s + "\"");
      }
    } else {
      c.padding = PaddingMode::kFixed;
      c.padding_width = pad.get<int>();
    }
    c.budget = j.value("budget", kDefaultNodeBudget);
    c.oracle_cap = j.value("oracle_cap", kDefaultOracleCap);
    c.planted = j.value("planted", false);
    c.output = j.value("output", std::string());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }

  if (c.n_values.empty()) throw std::invalid_argument("sweep config: no n values");
  if (c.instances < 1) throw std::invalid_argument("sweep config: instances must be positive");
  if (c.density < 0) throw std::invalid_argument("sweep config: negative density");
  if (c.budget == 0) throw std::invalid_argument("sweep config: budget must be positive");
  if (c.padding == PaddingMode::kFixed && c.padding_width < 0) {
    throw std::invalid_argument("sweep config: negative padding width");
  }
  for (int n : c.n_values) {
    if (n < 3) throw std::invalid_argument("sweep config: n must be at least 3");
    const int r = SweepR(c, n);
    if (r < 1) throw std::invalid_argument("sweep config: r must be positive");
    const bool pads = c.padding == PaddingMode::kDefault ||
                      (c.padding == PaddingMode::kFixed && c.padding_width > 0);
    if (pads && r < 2) {
      throw std::invalid_argument("sweep config: padding needs r >= 2 (n = " +
                                  std::to_string(n) + ")");
    }
  }
  return c;
}

int CeilLog2(int n) {
  int r = 0;
  while ((std::int64_t{1} << r) < n) ++r;
  return r;
}

int SweepR(const SweepConfig& config, int n) {
  return config.fixed_r ? *config.fixed_r : CeilLog2(n);
}

CnfFormula SweepFormula(const SweepConfig& config, int n, int instance) {
  const std::uint64_t seed =
      MixSeed(MixSeed(config.seed, static_cast<std::uint64_t>(n)),
              static_cast<std::uint64_t>(instance));
  const auto m = static_cast<std::size_t>(std::llround(config.density * n));
  std::optional<Assignment> planted;
  if (config.planted) planted = RandomAssignment(n, MixSeed(seed, 1));
  return GenRandom3Cnf(n, m, seed, planted);
}

std::vector<SweepRow> RunSweep(
    const SweepConfig& config,
    const std::function<void(const SweepRow&)>& on_row) {
  std::vector<SweepRow> rows;
  for (int n : config.n_values) {
    const int r = SweepR(config, n);
    for (int k = 0; k < config.instances; ++k) {
      const CnfFormula formula = SweepFormula(config, n, k);
      ReduceOptions ro;
      switch (config.padding) {
        case PaddingMode::kNone:
          ro.padding_width = 0;
          break;
        case PaddingMode::kDefault:
          break;
        case PaddingMode::kFixed:
          ro.padding_width = config.padding_width;
          break;
      }
      SweepRow row;
      row.n = n;
      row.m = formula.num_clauses();
      row.r = r;

      auto t0 = Clock::now();
      const Reduction red = Reduce(formula, r, ro);
      row.reduce_time = SecondsSince(t0);
      row.universe_size = red.instance.universe_size();
      row.set_count = red.instance.set_count();
      row.log2_set_count =
          row.set_count > 0 ? std::log2(static_cast<double>(row.set_count)) : 0.0;

      t0 = Clock::now();
      const SolveResult sol = SolveExact(red.instance, config.budget);
      row.solve_time = SecondsSince(t0);
      row.solver_nodes = sol.nodes;
      row.verdict = sol.verdict;

      std::optional<bool> oracle_sat;
      if (n <= config.oracle_cap) {
        oracle_sat = BruteForceSat(formula, config.oracle_cap).has_value();
        row.oracle_verdict = *oracle_sat ? "yes" : "no";
      } else {
        row.oracle_verdict = "skip";
      }

      std::string problem;
      if (sol.verdict == Verdict::kYes) {
        if (auto v = VerifyPacking(red.instance, sol.packing); !v) {
          problem = "solver packing rejected: " + v.reason;
        } else {
          try {
            const Assignment lifted =
                LiftPackingToAssignment(red.witness, sol.packing);
            if (!Evaluate(formula, lifted)) {
              problem = "lifted assignment does not satisfy the formula";
            }
          } catch (const WitnessError& e) {
            problem = std::string("corrupted witness: ") + e.what();
          }
        }
      }
      if (sol.verdict == Verdict::kBudgetExhausted) {
        row.agreement = "inconclusive";
      } else if (!oracle_sat) {
        row.agreement = "unchecked";
      } else if (*oracle_sat != (sol.verdict == Verdict::kYes)) {
        problem = "solver says " + std::string(VerdictName(sol.verdict)) +
                  ", oracle says " + row.oracle_verdict;
      } else {
        row.agreement = "agree";
      }
      if (!problem.empty()) {
        row.agreement = "disagree";
        throw SweepDisagreement(row, "n=" + std::to_string(n) + " instance " +
                                         std::to_string(k) + ": " + problem);
      }
      if (on_row) on_row(row);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void WriteCsvHeader(std::ostream& out) {
  out << "n,m,r,universe_size,set_count,log2_set_count,reduce_time,"
         "solve_time,solver_nodes,verdict,oracle_verdict,agreement\n";
}

void WriteCsvRow(const SweepRow& row, std::ostream& out) {
  char log2buf[32], rbuf[32], sbuf[32];
  std::snprintf(log2buf, sizeof log2buf, "%.6f", row.log2_set_count);
  std::snprintf(rbuf, sizeof rbuf, "%.6f", row.reduce_time);
  std::snprintf(sbuf, sizeof sbuf, "%.6f", row.solve_time);
  out << row.n << ',' << row.m << ',' << row.r << ',' << row.universe_size
      << ',' << row.set_count << ',' << log2buf << ',' << rbuf << ',' << sbuf
      << ',' << row.solver_nodes << ',' << VerdictName(row.verdict) << ','
      << row.oracle_verdict << ',' << row.agreement << '\n';
}

}  // namespace cspack
