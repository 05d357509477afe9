#pragma once

// Reduction from CNF satisfiability to compact r-set packing.
//
// Clauses are split round-robin into r groups. For each group, every partial
// assignment over the group's variables that satisfies all of its clauses
// becomes one set. Each variable x owns an r-by-r grid of elements (the edges
// of a complete bipartite graph between U_x and V_x); group g setting x to
// false claims row g, setting it to true claims column g. Two groups disagree
// on x exactly when a row meets a column, so sets from different groups are
// disjoint iff their assignments agree. Sets of one group are additionally
// tagged with members of an intersecting family over a private block, which
// forces at most one chosen set per group. Optional padding adds 2^d sets,
// each containing the whole core universe plus a subset of d dull elements.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cspack/cnf.h"
#include "cspack/packing.h"

namespace cspack {

/// Clause indices split into r groups; clause k goes to group k mod r.
struct ClausePartition {
  int r = 1;
  std::vector<std::vector<std::size_t>> groups;
};

ClausePartition PartitionClauses(std::size_t m, int r);

/// The satisfying partial assignments of one clause group.
///
/// `codes` hold assignments over `domain` (sorted, distinct), with domain[0]
/// as the most significant bit, in increasing order.
struct GroupAssignments {
  int group_index = 0;
  std::vector<int> domain;
  std::vector<std::uint64_t> codes;

  std::size_t size() const { return codes.size(); }
  Assignment At(std::size_t k) const;
  /// Code of `alpha` restricted to the domain; alpha must cover the domain.
  std::uint64_t Encode(const Assignment& alpha) const;
};

/// Largest group domain the enumerator accepts (2^k assignments are scanned).
inline constexpr int kMaxGroupDomain = 30;

GroupAssignments EnumerateGroupAssignments(const CnfFormula& formula,
                                           const ClausePartition& partition,
                                           int group);

/// Element ID layout: the variable grids, then one ISS block per group in
/// group order, then the dull block.
class ElementLayout {
 public:
  ElementLayout() = default;
  ElementLayout(int n, int r, std::vector<std::size_t> iss_widths,
                std::size_t dull_width);

  int n() const { return n_; }
  int r() const { return r_; }
  const std::vector<std::size_t>& iss_widths() const { return iss_widths_; }
  std::size_t dull_width() const { return dull_width_; }

  /// Edge (u_{i+1}, v_{j+1}) of variable block x (variable x + 1).
  ElementId GridId(int x, int i, int j) const {
    return static_cast<ElementId>((static_cast<std::size_t>(x) * r_ + i) * r_ +
                                  j);
  }
  std::size_t grid_size() const {
    return static_cast<std::size_t>(n_) * r_ * r_;
  }
  std::size_t iss_offset(int g) const { return iss_offsets_[g]; }
  std::size_t iss_total() const { return dull_offset() - grid_size(); }
  /// Grid plus ISS blocks.
  std::size_t core_size() const { return iss_offsets_.back(); }
  std::size_t dull_offset() const { return core_size(); }
  std::size_t universe_size() const { return core_size() + dull_width_; }

  friend bool operator==(const ElementLayout&, const ElementLayout&) = default;

 private:
  int n_ = 0;
  int r_ = 1;
  std::vector<std::size_t> iss_widths_;
  std::size_t dull_width_ = 0;
  std::vector<std::size_t> iss_offsets_{0};  // r + 1 prefix offsets
};

/// Grid elements claimed by group g when variable block x takes `value`:
/// row g for false, column g for true. Always r IDs, ascending.
ElementSet GridEdges(int x, int g, bool value, const ElementLayout& layout);

/// Intersecting set system: the first `count` subsets of size floor(u/2)+1
/// of [0, u) in lexicographic order, for the least u that has enough.
struct IssFamily {
  std::size_t universe_width = 0;
  std::vector<ElementSet> sets;

  std::size_t count() const { return sets.size(); }
};

/// Least u >= 1 with C(u, floor(u/2)+1) >= max(count, 1).
std::size_t IssWidth(std::size_t count);
IssFamily BuildIss(std::size_t count);

inline constexpr int kDefaultPaddingCap = 16;

/// ceil(n * log2(max(r, 2)) / r), clamped to `cap`; 0 when r == 1.
int DefaultPaddingWidth(int n, int r, int cap = kDefaultPaddingCap);

struct ReduceOptions {
  /// nullopt selects DefaultPaddingWidth.
  std::optional<int> padding_width;
  bool use_iss = true;
  int padding_cap = kDefaultPaddingCap;
};

/// Bookkeeping linking produced sets back to (group, partial assignment).
///
/// Core sets of group g occupy indices [first_set, first_set + codes.size())
/// in assignment order; padding sets follow all core sets.
class WitnessMap {
 public:
  struct Group {
    std::vector<int> domain;
    std::size_t first_set = 0;
    std::vector<std::uint64_t> codes;

    friend bool operator==(const Group&, const Group&) = default;
  };

  WitnessMap() = default;
  /// Validates contiguity and ordering; throws FormatError on violation.
  WitnessMap(ElementLayout layout, std::vector<Group> groups,
             std::size_t padding_first, std::size_t padding_count);

  const ElementLayout& layout() const { return layout_; }
  int r() const { return layout_.r(); }
  int n() const { return layout_.n(); }
  const std::vector<Group>& groups() const { return groups_; }
  std::size_t core_count() const { return core_count_; }
  std::size_t padding_first() const { return padding_first_; }
  std::size_t padding_count() const { return padding_count_; }
  std::size_t total_sets() const { return core_count_ + padding_count_; }

  bool IsPadding(std::size_t set_index) const {
    return set_index >= padding_first_ &&
           set_index < padding_first_ + padding_count_;
  }

  struct Owner {
    int group;
    Assignment assignment;
  };
  /// Group and partial assignment of a core set; throws std::out_of_range
  /// for padding or invalid indices.
  Owner OwnerOf(std::size_t set_index) const;

  friend bool operator==(const WitnessMap&, const WitnessMap&) = default;

 private:
  ElementLayout layout_;
  std::vector<Group> groups_;
  std::size_t core_count_ = 0;
  std::size_t padding_first_ = 0;
  std::size_t padding_count_ = 0;
};

struct Reduction {
  SetPackingInstance instance;
  WitnessMap witness;
};

/// Builds the packing instance with parameter r. Throws std::invalid_argument
/// for r < 1, padding with r == 1, padding wider than the cap, and ISS tags
/// disabled while two groups are empty (their sets would coincide).
Reduction Reduce(const CnfFormula& formula, int r,
                 const ReduceOptions& options = {});

/// Raised when a packing or assignment cannot be translated through the map.
class WitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One core set per group, selected by restricting the satisfying total
/// assignment `alpha` to each group's domain. Ascending indices.
std::vector<std::size_t> LowerAssignmentToPacking(const WitnessMap& witness,
                                                  const Assignment& alpha);

/// Merges the partial assignments behind an r-packing of core sets into a
/// total assignment; unconstrained variables are false.
Assignment LiftPackingToAssignment(const WitnessMap& witness,
                                   std::span<const std::size_t> packing);

/// Witness sidecar format:
///   w <n> <r> <d> <u_0> ... <u_{r-1}>
///   g <group> <first_set> <count> <vars>          (one per group)
///   <set_index> <group> <vars> <bits>             (one per core set)
///   pad <first> <count>
/// <vars> is a comma-separated ascending variable list and <bits> one 0/1
/// character per variable; both are "-" for an empty domain.
void WriteWitness(const WitnessMap& witness, std::ostream& out);
std::string SerializeWitness(const WitnessMap& witness);
WitnessMap ParseWitness(std::istream& in);
WitnessMap ParseWitness(const std::string& text);

BlockBreakdown Breakdown(const WitnessMap& witness);

inline CompactnessReport AuditCompactness(const SetPackingInstance& instance,
                                          const WitnessMap& witness) {
  return AuditCompactness(instance, Breakdown(witness));
}

}  // namespace cspack
