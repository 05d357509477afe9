// cspack: reduce CNF formulas to compact set packing, solve, verify, audit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cspack/cnf.h"
#include "cspack/harness.h"
#include "cspack/packing.h"
#include "cspack/reduction.h"
#include "cspack/rng.h"

namespace {

using namespace cspack;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("error writing " + path);
}

struct PadFlags {
  int pad = -1;  // -1: default width
  bool no_pad = false;
  bool no_iss = false;

  void Add(CLI::App* cmd) {
    auto* p = cmd->add_option("--pad", pad, "Number of dull padding elements d");
    auto* np = cmd->add_flag("--no-pad", no_pad, "Disable padding (d = 0)");
    p->excludes(np);
    cmd->add_flag("--no-iss", no_iss, "Omit intersecting-set tags");
  }

  ReduceOptions Options() const {
    ReduceOptions o;
    if (no_pad) {
      o.padding_width = 0;
    } else if (pad >= 0) {
      o.padding_width = pad;
    }
    o.use_iss = !no_iss;
    return o;
  }
};

void PrintPacking(const std::vector<std::size_t>& packing) {
  for (std::size_t k = 0; k < packing.size(); ++k) {
    std::cout << (k ? " " : "") << packing[k];
  }
  std::cout << '\n';
}

int RunReduce(const std::string& cnf_path, int r, const PadFlags& pad,
              std::string output, std::string witness_path) {
  const CnfFormula formula = ParseDimacs(ReadFile(cnf_path));
  const auto sparsity = CheckSparsity(formula);
  if (!sparsity.pass) {
    std::cerr << "warning: m/n = " << sparsity.ratio
              << " exceeds density bound " << kDefaultDensityBound << '\n';
  }
  const Reduction red = Reduce(formula, r, pad.Options());
  if (output.empty()) output = cnf_path + ".sp";
  if (witness_path.empty()) witness_path = output + ".wit";
  WriteFile(output, SerializeInstance(red.instance));
  WriteFile(witness_path, SerializeWitness(red.witness));

  const auto& lay = red.witness.layout();
  std::cout << "p sp " << red.instance.universe_size() << ' '
            << red.instance.set_count() << ' ' << red.instance.r() << '\n';
  std::cout << "universe = n*r^2 + sum(u_g) + d = " << lay.n() << '*' << r
            << "^2 + " << lay.iss_total() << " + " << lay.dull_width() << " = "
            << lay.universe_size() << '\n';
  std::cout << "sets = core + padding = " << red.witness.core_count() << " + "
            << red.witness.padding_count() << " = " << red.instance.set_count()
            << '\n';
  for (std::size_t g = 0; g < red.witness.groups().size(); ++g) {
    const auto& grp = red.witness.groups()[g];
    std::cout << "group " << g + 1 << ": |v(C)| = " << grp.domain.size()
              << ", |A| = " << grp.codes.size() << ", u = "
              << lay.iss_widths()[g] << '\n';
  }
  std::cout << "wrote " << output << " and " << witness_path << '\n';
  return kExitOk;
}

int RunSolve(const std::string& path, std::uint64_t budget) {
  const SetPackingInstance inst = ParseInstance(ReadFile(path));
  const SolveResult res = SolveExact(inst, budget);
  switch (res.verdict) {
    case Verdict::kYes:
      std::cout << "YES ";
      PrintPacking(res.packing);
      break;
    case Verdict::kNo:
      std::cout << "NO\n";
      break;
    case Verdict::kBudgetExhausted:
      std::cout << "INCONCLUSIVE\n";
      break;
  }
  std::cout << "nodes " << res.nodes << '\n';
  return res.verdict == Verdict::kBudgetExhausted ? kExitInconclusive : kExitOk;
}

int RunVerify(const std::string& path, const std::vector<std::size_t>& indices,
              const std::string& witness_path, const std::string& cnf_path) {
  const SetPackingInstance inst = ParseInstance(ReadFile(path));
  const VerifyResult v = VerifyPacking(inst, indices);
  std::cout << (v.ok ? "VALID" : "INVALID") << ": " << v.reason << '\n';
  if (!v.ok) return kExitDisagree;
  if (!witness_path.empty()) {
    const WitnessMap w = ParseWitness(ReadFile(witness_path));
    const Assignment a = LiftPackingToAssignment(w, indices);
    std::cout << "lifted " << a.ToString() << '\n';
    if (!cnf_path.empty()) {
      const bool ok = Evaluate(ParseDimacs(ReadFile(cnf_path)), a);
      std::cout << (ok ? "satisfies" : "does not satisfy") << ' ' << cnf_path
                << '\n';
      if (!ok) return kExitDisagree;
    }
  }
  return kExitOk;
}

int RunRoundtrip(const std::string& cnf_path, const RoundtripOptions& opts) {
  const CnfFormula formula = ParseDimacs(ReadFile(cnf_path));
  const RoundtripReport rep = Roundtrip(formula, opts);
  std::cout << "instance: universe " << rep.universe_size << ", sets "
            << rep.set_count << " (" << rep.core_sets << " core), r = "
            << opts.r << '\n';
  std::cout << "packing: ";
  switch (rep.solve.verdict) {
    case Verdict::kYes:
      PrintPacking(rep.solve.packing);
      break;
    case Verdict::kNo:
      std::cout << "none\n";
      break;
    case Verdict::kBudgetExhausted:
      std::cout << "budget exhausted after " << rep.solve.nodes << " nodes\n";
      break;
  }
  if (rep.lifted) std::cout << "lifted: " << rep.lifted->ToString() << '\n';
  std::cout << "oracle: " << (rep.oracle ? rep.oracle->ToString() : "none")
            << '\n';
  std::cout << AgreementName(rep.agreement);
  if (!rep.detail.empty()) std::cout << " (" << rep.detail << ')';
  std::cout << '\n';
  switch (rep.agreement) {
    case Agreement::kAgree:
      return kExitOk;
    case Agreement::kDisagree:
      return kExitDisagree;
    case Agreement::kInconclusive:
      return kExitInconclusive;
  }
  return kExitDisagree;
}

int RunAudit(const std::string& path, const std::string& witness_path) {
  const SetPackingInstance inst = ParseInstance(ReadFile(path));
  std::optional<WitnessMap> w;
  if (!witness_path.empty()) w = ParseWitness(ReadFile(witness_path));
  const CompactnessReport rep =
      w ? AuditCompactness(inst, *w) : AuditCompactness(inst);
  std::printf("universe_size %zu\nset_count %zu\nr %d\nlog2_sets %.6f\n"
              "rho %.6f\n",
              rep.universe_size, rep.set_count, rep.r, rep.log2_sets, rep.rho);
  if (rep.breakdown) {
    const auto& b = *rep.breakdown;
    std::printf("grid %zu\niss %zu\ndull %zu\ncore_sets %zu\npadding_sets %zu\n",
                b.grid, b.iss, b.dull, b.core_sets, b.padding_sets);
  }
  return kExitOk;
}

int RunBench(const std::string& config_path, const std::string& output_flag) {
  SweepConfig cfg = ParseSweepConfig(ReadFile(config_path));
  if (!output_flag.empty()) cfg.output = output_flag;
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + cfg.output);
    out = &file;
  }
  WriteCsvHeader(*out);
  bool inconclusive = false;
  try {
    RunSweep(cfg, [&](const SweepRow& row) {
      WriteCsvRow(row, *out);
      out->flush();
      if (row.verdict == Verdict::kBudgetExhausted) inconclusive = true;
    });
  } catch (const SweepDisagreement& e) {
    std::cerr << "DISAGREE: " << e.what() << '\n';
    return kExitDisagree;
  }
  if (inconclusive) {
    std::cerr << "INCONCLUSIVE: some rows exhausted the solver budget\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

int RunGenCnf(int n, std::size_t m, std::optional<double> density,
              std::uint64_t seed, bool planted, const std::string& output) {
  if (density) m = static_cast<std::size_t>(std::llround(*density * n));
  std::optional<Assignment> plant;
  if (planted) plant = RandomAssignment(n, MixSeed(seed, 1));
  const CnfFormula f = GenRandom3Cnf(n, m, seed, plant);
  std::ostringstream text;
  text << "c random 3-CNF n=" << n << " m=" << m << " seed=" << seed
       << (planted ? " planted" : "") << '\n';
  if (plant) text << "c planted " << plant->ToString() << '\n';
  WriteDimacs(f, text);
  if (output.empty()) {
    std::cout << text.str();
  } else {
    WriteFile(output, text.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact set packing reduction toolkit"};
  app.require_subcommand(1);

  std::string cnf_path, inst_path, witness_path, output, config_path;
  int r = 2;
  PadFlags pad;
  std::uint64_t budget = kDefaultNodeBudget;
  int oracle_cap = kDefaultOracleCap;

  auto* reduce = app.add_subcommand("reduce", "Reduce a DIMACS CNF to set packing");
  reduce->add_option("cnf", cnf_path, "DIMACS CNF file")->required();
  reduce->add_option("--r", r, "Packing parameter (number of clause groups)")
      ->check(CLI::PositiveNumber);
  pad.Add(reduce);
  reduce->add_option("--output,-o", output, "Instance file (default <cnf>.sp)");
  reduce->add_option("--witness", witness_path,
                     "Witness file (default <output>.wit)");

  auto* solve = app.add_subcommand("solve", "Decide an r-packing exactly");
  solve->add_option("instance", inst_path)->required();
  solve->add_option("--budget", budget, "Search node limit");

  std::vector<std::size_t> indices;
  auto* verify = app.add_subcommand("verify", "Check a packing, optionally lift it");
  verify->add_option("instance", inst_path)->required();
  verify->add_option("indices", indices, "Set indices")->required();
  verify->add_option("--witness", witness_path, "Lift through this witness map");
  verify->add_option("--cnf", cnf_path, "Evaluate the lifted assignment");

  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Reduce, solve, lift and compare with the SAT oracle");
  roundtrip->add_option("cnf", cnf_path)->required();
  roundtrip->add_option("--r", r)->check(CLI::PositiveNumber);
  pad.Add(roundtrip);
  roundtrip->add_option("--budget", budget);
  roundtrip->add_option("--oracle-cap", oracle_cap);

  auto* audit = app.add_subcommand("audit", "Report |U| / (r^3 log2 |S|)");
  audit->add_option("instance", inst_path)->required();
  audit->add_option("--witness", witness_path, "Add the block breakdown");

  auto* bench = app.add_subcommand("bench", "Run a sweep and write CSV");
  bench->add_option("config", config_path, "JSON sweep config")->required();
  bench->add_option("--output,-o", output, "CSV path (overrides config)");

  int gen_n = 0;
  std::size_t gen_m = 0;
  std::optional<double> density;
  std::uint64_t seed = 0;
  bool planted = false;
  auto* gen = app.add_subcommand("gen-cnf", "Generate a random 3-CNF");
  gen->add_option("--n", gen_n, "Variables")->required();
  auto* m_opt = gen->add_option("--m", gen_m, "Clauses");
  gen->add_option("--density", density, "Clauses per variable")->excludes(m_opt);
  gen->add_option("--seed", seed);
  gen->add_flag("--planted", planted, "Plant a random satisfying assignment");
  gen->add_option("--output,-o", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*reduce) return RunReduce(cnf_path, r, pad, output, witness_path);
    if (*solve) return RunSolve(inst_path, budget);
    if (*verify) return RunVerify(inst_path, indices, witness_path, cnf_path);
    if (*roundtrip) {
      RoundtripOptions o;
      o.r = r;
      o.reduce = pad.Options();
      o.budget = budget;
      o.oracle_cap = oracle_cap;
      return RunRoundtrip(cnf_path, o);
    }
    if (*audit) return RunAudit(inst_path, witness_path);
    if (*bench) return RunBench(config_path, output);
    if (*gen) return RunGenCnf(gen_n, gen_m, density, seed, planted, output);
  } catch (const WitnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDisagree;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
