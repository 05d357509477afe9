#include "cspack/cnf.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "cspack/rng.h"

namespace cspack {

CnfFormula::CnfFormula(int num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ < 1) throw FormatError("num_vars must be positive");
  for (std::size_t k = 0; k < clauses_.size(); ++k) {
    const Clause& c = clauses_[k];
    if (c.empty() || c.size() > 3) {
      throw FormatError("clause " + std::to_string(k + 1) + " has " +
                        std::to_string(c.size()) +
                        " literals; expected 1 to 3");
    }
    for (Literal lit : c) {
      if (lit == 0 || std::abs(lit) > num_vars_) {
        throw FormatError("variable index " + std::to_string(std::abs(lit)) +
                          " out of range [1, " + std::to_string(num_vars_) +
                          "]");
      }
    }
  }
}

Assignment Assignment::FromCode(int n, std::uint64_t code) {
  Assignment a;
  for (int v = 1; v <= n; ++v) a.values_[v] = ((code >> (n - v)) & 1) != 0;
  return a;
}

std::optional<bool> Assignment::Get(int var) const {
  auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool Assignment::IsTotal(int n) const {
  if (values_.size() != static_cast<std::size_t>(n)) return false;
  return values_.empty() ||
         (values_.begin()->first == 1 && values_.rbegin()->first == n);
}

Assignment Assignment::Restrict(const std::vector<int>& vars) const {
  Assignment out;
  for (int v : vars) {
    auto value = Get(v);
    if (!value) {
      throw std::invalid_argument("variable " + std::to_string(v) +
                                  " is unassigned");
    }
    out.Set(v, *value);
  }
  return out;
}

std::string Assignment::ToString() const {
  std::string s;
  for (const auto& [v, b] : values_) {
    if (!s.empty()) s += ' ';
    s += 'x' + std::to_string(v) + '=' + (b ? '1' : '0');
  }
  return s;
}

CnfFormula ParseDimacs(std::istream& in) {
  std::string line;
  bool have_header = false;
  long long declared_vars = 0, declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "%") break;  // SATLIB end marker
    if (first == "p") {
      if (have_header) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": duplicate header");
      }
      std::string fmt, extra;
      if (!(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" ||
          (ls >> extra) || declared_vars < 1 || declared_clauses < 0) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": malformed header, expected \"p cnf <n> <m>\"");
      }
      have_header = true;
      continue;
    }
    if (!have_header) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": clause data before \"p cnf\" header");
    }
    ls.clear();
    ls.seekg(0);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long lit = 0;
      try {
        lit = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": bad literal \"" + tok + "\"");
      }
      if (lit == 0) {
        if (current.empty()) {
          throw FormatError("line " + std::to_string(line_no) +
                            ": empty clause");
        }
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::llabs(lit) > declared_vars) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": variable index " + std::to_string(std::llabs(lit)) +
                          " out of range");
      }
      if (current.size() == 3) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": clause with more than 3 literals");
      }
      current.push_back(static_cast<Literal>(lit));
    }
  }
  if (!have_header) throw FormatError("missing \"p cnf\" header");
  if (!current.empty()) throw FormatError("last clause is not 0-terminated");
  if (static_cast<long long>(clauses.size()) != declared_clauses) {
    throw FormatError("header declares " + std::to_string(declared_clauses) +
                      " clauses but " + std::to_string(clauses.size()) +
                      " were read");
  }
  return CnfFormula(static_cast<int>(declared_vars), std::move(clauses));
}

CnfFormula ParseDimacs(const std::string& text) {
  std::istringstream in(text);
  return ParseDimacs(in);
}

void WriteDimacs(const CnfFormula& formula, std::ostream& out) {
  out << "p cnf " << formula.num_vars() << ' ' << formula.num_clauses()
      << '\n';
  for (const Clause& c : formula.clauses()) {
    for (Literal lit : c) out << lit << ' ';
    out << "0\n";
  }
}

std::string ToDimacs(const CnfFormula& formula) {
  std::ostringstream out;
  WriteDimacs(formula, out);
  return out.str();
}

bool ClauseSatisfied(const Clause& clause, const Assignment& alpha) {
  bool sat = false;
  for (Literal lit : clause) {
    auto value = alpha.Get(std::abs(lit));
    if (!value) {
      throw std::invalid_argument("variable " + std::to_string(std::abs(lit)) +
                                  " occurs in a clause but is unassigned");
    }
    if (*value == (lit > 0)) sat = true;
  }
  return sat;
}

bool Evaluate(const CnfFormula& formula, const Assignment& alpha) {
  // Every clause is checked so that unassigned variables are always reported.
  bool all = true;
  for (const Clause& c : formula.clauses()) {
    if (!ClauseSatisfied(c, alpha)) all = false;
  }
  return all;
}

std::optional<Assignment> BruteForceSat(const CnfFormula& formula, int cap) {
  const int n = formula.num_vars();
  if (n > cap || n > 62) {
    throw std::invalid_argument("brute-force oracle: " + std::to_string(n) +
                                " variables exceed cap " +
                                std::to_string(std::min(cap, 62)));
  }
  // Clause as (positive mask, negative mask) under the code convention.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
  masks.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) {
    std::uint64_t pos = 0, neg = 0;
    for (Literal lit : c) {
      const std::uint64_t bit = std::uint64_t{1} << (n - std::abs(lit));
      (lit > 0 ? pos : neg) |= bit;
    }
    masks.emplace_back(pos, neg);
  }
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < end; ++code) {
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if (((code & pos) | (~code & neg)) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return Assignment::FromCode(n, code);
  }
  return std::nullopt;
}

SparsityReport CheckSparsity(const CnfFormula& formula, double density_bound) {
  SparsityReport rep;
  rep.num_clauses = formula.num_clauses();
  rep.num_vars = formula.num_vars();
  rep.ratio = static_cast<double>(rep.num_clauses) / rep.num_vars;
  rep.pass = static_cast<double>(rep.num_clauses) <= density_bound * rep.num_vars;
  return rep;
}

CnfFormula GenRandomCnf(int n, std::size_t m, int k, std::uint64_t seed,
                        const std::optional<Assignment>& planted) {
  if (k < 1 || k > 3) throw std::invalid_argument("clause width must be 1..3");
  if (n < k) {
    throw std::invalid_argument("need at least " + std::to_string(k) +
                                " variables for " + std::to_string(k) +
                                " distinct variables per clause, got " +
                                std::to_string(n));
  }
  if (planted && !planted->IsTotal(n)) {
    throw std::invalid_argument("planted assignment must be total over n");
  }
  Rng rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  while (clauses.size() < m) {
    Clause c;
    while (static_cast<int>(c.size()) < k) {
      const int v = static_cast<int>(rng.Below(n)) + 1;
      if (std::any_of(c.begin(), c.end(),
                      [v](Literal l) { return std::abs(l) == v; })) {
        continue;
      }
      c.push_back(rng.Coin() ? v : -v);
    }
    if (planted && !ClauseSatisfied(c, *planted)) continue;
    clauses.push_back(std::move(c));
  }
  return CnfFormula(n, std::move(clauses));
}

Assignment RandomAssignment(int n, std::uint64_t seed) {
  Rng rng(seed);
  Assignment a;
  for (int v = 1; v <= n; ++v) a.Set(v, rng.Coin());
  return a;
}

}  // namespace cspack
