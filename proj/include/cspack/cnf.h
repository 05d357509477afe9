#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspack/error.h"

namespace cspack {

/// Signed variable index: +v is the variable, -v its negation.
using Literal = int;
using Clause = std::vector<Literal>;

/// A CNF formula over variables 1..num_vars with clauses of 1 to 3 literals.
class CnfFormula {
 public:
  CnfFormula() = default;
  /// Validates the invariants and throws FormatError on violation.
  CnfFormula(int num_vars, std::vector<Clause> clauses);

  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(std::size_t k) const { return clauses_[k]; }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// Truth values keyed by variable index. Partial unless every variable of the
/// formula it is evaluated against has a key.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::map<int, bool> values) : values_(std::move(values)) {}

  /// Total assignment over 1..n from a code where variable 1 is the most
  /// significant of n bits.
  static Assignment FromCode(int n, std::uint64_t code);
  static Assignment AllFalse(int n) { return FromCode(n, 0); }

  void Set(int var, bool value) { values_[var] = value; }
  std::optional<bool> Get(int var) const;
  bool Has(int var) const { return values_.count(var) != 0; }
  std::size_t size() const { return values_.size(); }
  const std::map<int, bool>& values() const { return values_; }

  /// True iff the keys are exactly 1..n.
  bool IsTotal(int n) const;

  /// Restriction to the given variables (which must all be assigned).
  Assignment Restrict(const std::vector<int>& vars) const;

  /// "x1=0 x2=1 ..." in variable order.
  std::string ToString() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<int, bool> values_;
};

CnfFormula ParseDimacs(std::istream& in);
CnfFormula ParseDimacs(const std::string& text);
void WriteDimacs(const CnfFormula& formula, std::ostream& out);
std::string ToDimacs(const CnfFormula& formula);

bool ClauseSatisfied(const Clause& clause, const Assignment& alpha);

/// Throws std::invalid_argument if a variable occurring in some clause is
/// unassigned.
bool Evaluate(const CnfFormula& formula, const Assignment& alpha);

inline constexpr int kDefaultOracleCap = 24;

/// Exhaustive satisfiability oracle. Returns the satisfying total assignment
/// with the smallest code (variable 1 most significant), or nullopt.
/// Throws std::invalid_argument if num_vars exceeds `cap` (hard limit 62).
std::optional<Assignment> BruteForceSat(const CnfFormula& formula,
                                        int cap = kDefaultOracleCap);

struct SparsityReport {
  std::size_t num_clauses = 0;
  int num_vars = 0;
  double ratio = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultDensityBound = 8.0;

SparsityReport CheckSparsity(const CnfFormula& formula,
                             double density_bound = kDefaultDensityBound);

/// Random k-CNF with k distinct variables per clause and uniform signs. With a
/// planted assignment, each clause is redrawn until the assignment satisfies
/// it. Deterministic in all arguments across platforms.
CnfFormula GenRandomCnf(int n, std::size_t m, int k, std::uint64_t seed,
                        const std::optional<Assignment>& planted = std::nullopt);

inline CnfFormula GenRandom3Cnf(
    int n, std::size_t m, std::uint64_t seed,
    const std::optional<Assignment>& planted = std::nullopt) {
  return GenRandomCnf(n, m, 3, seed, planted);
}

/// Uniform random total assignment over 1..n.
Assignment RandomAssignment(int n, std::uint64_t seed);

}  // namespace cspack
