#include "cspack/packing.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cspack/bitset.h"
#include "cspack/error.h"

namespace cspack {

SetPackingInstance::SetPackingInstance(std::size_t universe_size,
                                       std::vector<ElementSet> sets, int r)
    : universe_size_(universe_size), sets_(std::move(sets)), r_(r) {
  if (r_ < 1) throw FormatError("parameter r must be positive");
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    const ElementSet& s = sets_[k];
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (s[t] >= universe_size_) {
        throw FormatError("set " + std::to_string(k) + ": element " +
                          std::to_string(s[t]) + " out of range [0, " +
                          std::to_string(universe_size_) + ")");
      }
      if (t > 0 && s[t] <= s[t - 1]) {
        throw FormatError("set " + std::to_string(k) +
                          ": element IDs unsorted or repeated");
      }
    }
  }
  std::vector<std::size_t> order(sets_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return sets_[a] < sets_[b];
  });
  for (std::size_t t = 1; t < order.size(); ++t) {
    if (sets_[order[t]] == sets_[order[t - 1]]) {
      const auto [a, b] = std::minmax(order[t - 1], order[t]);
      throw FormatError("sets " + std::to_string(a) + " and " +
                        std::to_string(b) + " are equal");
    }
  }
}

namespace {

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string t; ls >> t;) out.push_back(std::move(t));
  return out;
}

unsigned long long ToUnsigned(const std::string& tok, int line_no) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!tok.empty() && tok[0] != '-') v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad integer \"" +
                      tok + "\"");
  }
  return v;
}

}  // namespace

SetPackingInstance ParseInstance(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::size_t universe = 0, count = 0;
  int r = 0;
  bool have_header = false;
  std::vector<ElementSet> sets;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = Tokens(line);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 5 || tok[0] != "p" || tok[1] != "sp") {
        throw FormatError("line " + std::to_string(line_no) +
                          ": expected \"p sp <universe_size> <set_count> <r>\"");
      }
      universe = ToUnsigned(tok[2], line_no);
      count = ToUnsigned(tok[3], line_no);
      r = static_cast<int>(ToUnsigned(tok[4], line_no));
      have_header = true;
      sets.reserve(count);
      continue;
    }
    if (tok[0] != "s" || tok.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected \"s <k> <ids...>\"");
    }
    const std::size_t k = ToUnsigned(tok[1], line_no);
    if (tok.size() != k + 2) {
      throw FormatError("line " + std::to_string(line_no) + ": set declares " +
                        std::to_string(k) + " elements but lists " +
                        std::to_string(tok.size() - 2));
    }
    ElementSet s;
    s.reserve(k);
    for (std::size_t t = 2; t < tok.size(); ++t) {
      const auto id = ToUnsigned(tok[t], line_no);
      if (id >= universe) {
        throw FormatError("line " + std::to_string(line_no) + ": element " +
                          tok[t] + " out of range [0, " +
                          std::to_string(universe) + ")");
      }
      if (!s.empty() && id <= s.back()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": element IDs unsorted or repeated");
      }
      s.push_back(static_cast<ElementId>(id));
    }
    sets.push_back(std::move(s));
  }
  if (!have_header) throw FormatError("missing \"p sp\" header");
  if (sets.size() != count) {
    throw FormatError("header declares " + std::to_string(count) +
                      " sets but " + std::to_string(sets.size()) +
                      " were read");
  }
  return SetPackingInstance(universe, std::move(sets), r);
}

SetPackingInstance ParseInstance(const std::string& text) {
  std::istringstream in(text);
  return ParseInstance(in);
}

void WriteInstance(const SetPackingInstance& instance, std::ostream& out) {
  out << "p sp " << instance.universe_size() << ' ' << instance.set_count()
      << ' ' << instance.r() << '\n';
  for (const ElementSet& s : instance.sets()) {
    out << "s " << s.size();
    for (ElementId id : s) out << ' ' << id;
    out << '\n';
  }
}

std::string SerializeInstance(const SetPackingInstance& instance) {
  std::ostringstream out;
  WriteInstance(instance, out);
  return out.str();
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kYes:
      return "yes";
    case Verdict::kNo:
      return "no";
    case Verdict::kBudgetExhausted:
      return "budget";
  }
  return "?";
}

namespace {

class Search {
 public:
  Search(const SetPackingInstance& instance, std::uint64_t budget)
      : r_(static_cast<std::size_t>(instance.r())), budget_(budget) {
    bits_.reserve(instance.set_count());
    for (const ElementSet& s : instance.sets()) {
      bits_.push_back(Bitset::FromIds(instance.universe_size(), s));
    }
  }

  SolveResult Run() {
    SolveResult res;
    if (r_ > bits_.size()) return res;
    std::vector<std::size_t> all(bits_.size());
    std::iota(all.begin(), all.end(), 0);
    const bool found = Extend(all);
    res.nodes = nodes_;
    if (found) {
      res.verdict = Verdict::kYes;
      res.packing = chosen_;
    } else {
      res.verdict = exhausted_ ? Verdict::kBudgetExhausted : Verdict::kNo;
    }
    return res;
  }

 private:
  // `cands` are ascending indices, all disjoint from every chosen set and
  // greater than the last chosen index.
  bool Extend(const std::vector<std::size_t>& cands) {
    const std::size_t need = r_ - chosen_.size();
    if (need == 0) return true;
    std::vector<std::size_t> next;
    for (std::size_t p = 0; p + need <= cands.size(); ++p) {
      const std::size_t c = cands[p];
      if (need == 1) {
        if (!Charge()) return false;
        chosen_.push_back(c);
        return true;
      }
      next.clear();
      for (std::size_t q = p + 1; q < cands.size(); ++q) {
        if (!Charge()) return false;
        if (!bits_[c].Intersects(bits_[cands[q]])) next.push_back(cands[q]);
      }
      if (next.size() + 1 < need) continue;
      chosen_.push_back(c);
      if (Extend(next)) return true;
      chosen_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  bool Charge() {
    if (nodes_ >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++nodes_;
    return true;
  }

  std::size_t r_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  std::vector<Bitset> bits_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

SolveResult SolveExact(const SetPackingInstance& instance,
                       std::uint64_t budget) {
  return Search(instance, budget).Run();
}

VerifyResult VerifyPacking(const SetPackingInstance& instance,
                           std::span<const std::size_t> indices) {
  for (std::size_t idx : indices) {
    if (idx >= instance.set_count()) {
      return {false, "index " + std::to_string(idx) + " out of range [0, " +
                         std::to_string(instance.set_count()) + ")"};
    }
  }
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end());
      it != sorted.end()) {
    return {false, "duplicate index " + std::to_string(*it)};
  }
  if (indices.size() != static_cast<std::size_t>(instance.r())) {
    return {false, "packing has " + std::to_string(indices.size()) +
                       " sets, parameter r is " + std::to_string(instance.r())};
  }
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      const ElementSet& x = instance.set(indices[a]);
      const ElementSet& y = instance.set(indices[b]);
      ElementSet common;
      std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        return {false, "sets " + std::to_string(indices[a]) + " and " +
                           std::to_string(indices[b]) +
                           " intersect at element " +
                           std::to_string(common.front())};
      }
    }
  }
  return {true, "ok"};
}

CompactnessReport AuditCompactness(const SetPackingInstance& instance,
                                   std::optional<BlockBreakdown> breakdown) {
  if (instance.set_count() < 2) {
    throw std::invalid_argument(
        "compactness audit needs at least 2 sets (log2 of set count is 0)");
  }
  CompactnessReport rep;
  rep.universe_size = instance.universe_size();
  rep.set_count = instance.set_count();
  rep.r = instance.r();
  rep.log2_sets = std::log2(static_cast<double>(rep.set_count));
  const double r3 = std::pow(static_cast<double>(rep.r), 3);
  rep.rho = static_cast<double>(rep.universe_size) / (r3 * rep.log2_sets);
  rep.breakdown = breakdown;
  return rep;
}

}  // namespace cspack
