#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace cspack {

using ElementId = std::uint32_t;
using ElementSet = std::vector<ElementId>;

/// A set packing instance: does the family contain r pairwise disjoint sets?
///
/// Every element ID lies in [0, universe_size), each set is strictly
/// increasing, and no two sets are equal. The constructor enforces all three
/// and throws FormatError otherwise.
class SetPackingInstance {
 public:
  SetPackingInstance() = default;
  SetPackingInstance(std::size_t universe_size, std::vector<ElementSet> sets,
                     int r);

  std::size_t universe_size() const { return universe_size_; }
  std::size_t set_count() const { return sets_.size(); }
  int r() const { return r_; }
  const std::vector<ElementSet>& sets() const { return sets_; }
  const ElementSet& set(std::size_t k) const { return sets_[k]; }

  friend bool operator==(const SetPackingInstance&,
                         const SetPackingInstance&) = default;

 private:
  std::size_t universe_size_ = 0;
  std::vector<ElementSet> sets_;
  int r_ = 1;
};

/// Text format, one record per line, LF endings:
///   p sp <universe_size> <set_count> <r>
///   s <k> <id_1> ... <id_k>        (set_count times, ids strictly increasing)
SetPackingInstance ParseInstance(std::istream& in);
SetPackingInstance ParseInstance(const std::string& text);
void WriteInstance(const SetPackingInstance& instance, std::ostream& out);
std::string SerializeInstance(const SetPackingInstance& instance);

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

enum class Verdict { kYes, kNo, kBudgetExhausted };

std::string_view VerdictName(Verdict v);

struct SolveResult {
  Verdict verdict = Verdict::kNo;
  /// Set indices in ascending order; empty unless verdict is kYes.
  std::vector<std::size_t> packing;
  /// Search nodes spent. A node is one candidate set examined as a possible
  /// extension of the current partial packing.
  std::uint64_t nodes = 0;
};

/// Exact depth-first decision procedure for r-set packing.
///
/// Branches on set indices in ascending order, so the first packing found is
/// the lexicographically least one. Candidates intersecting the union of the
/// chosen sets are filtered out, and a branch is abandoned as soon as fewer
/// candidates remain than sets still needed. Exceeding `budget` nodes yields
/// kBudgetExhausted, which is never reported as kNo.
SolveResult SolveExact(const SetPackingInstance& instance,
                       std::uint64_t budget = kDefaultNodeBudget);

struct VerifyResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Checks, in order: indices in range, indices distinct, count equals r, and
/// pairwise disjointness. `reason` names the first failed check (with the
/// shared element for overlapping sets). Never throws.
VerifyResult VerifyPacking(const SetPackingInstance& instance,
                           std::span<const std::size_t> indices);

/// Widths of the element blocks of an instance produced by the reduction.
struct BlockBreakdown {
  std::size_t grid = 0;
  std::size_t iss = 0;
  std::size_t dull = 0;
  std::size_t core_sets = 0;
  std::size_t padding_sets = 0;
};

struct CompactnessReport {
  std::size_t universe_size = 0;
  std::size_t set_count = 0;
  int r = 0;
  double log2_sets = 0.0;
  /// universe_size / (r^3 * log2(set_count)).
  double rho = 0.0;
  std::optional<BlockBreakdown> breakdown;
};

/// Throws std::invalid_argument when the instance has fewer than two sets.
CompactnessReport AuditCompactness(
    const SetPackingInstance& instance,
    std::optional<BlockBreakdown> breakdown = std::nullopt);

}  // namespace cspack
