#include "cspack/reduction.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace cspack {

ClausePartition PartitionClauses(std::size_t m, int r) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  ClausePartition p;
  p.r = r;
  p.groups.resize(r);
  for (std::size_t k = 0; k < m; ++k) p.groups[k % r].push_back(k);
  return p;
}

Assignment GroupAssignments::At(std::size_t k) const {
  const std::uint64_t code = codes.at(k);
  const std::size_t w = domain.size();
  Assignment a;
  for (std::size_t t = 0; t < w; ++t) {
    a.Set(domain[t], ((code >> (w - 1 - t)) & 1) != 0);
  }
  return a;
}

std::uint64_t GroupAssignments::Encode(const Assignment& alpha) const {
  std::uint64_t code = 0;
  for (int v : domain) {
    auto value = alpha.Get(v);
    if (!value) {
      throw std::invalid_argument("variable " + std::to_string(v) +
                                  " is unassigned");
    }
    code = (code << 1) | (*value ? 1 : 0);
  }
  return code;
}

GroupAssignments EnumerateGroupAssignments(const CnfFormula& formula,
                                           const ClausePartition& partition,
                                           int group) {
  if (group < 0 || group >= partition.r) {
    throw std::out_of_range("group index " + std::to_string(group) +
                            " outside [0, " + std::to_string(partition.r) +
                            ")");
  }
  const auto& clause_ids = partition.groups[group];
  GroupAssignments out;
  out.group_index = group;
  for (std::size_t k : clause_ids) {
    for (Literal lit : formula.clause(k)) out.domain.push_back(std::abs(lit));
  }
  std::sort(out.domain.begin(), out.domain.end());
  out.domain.erase(std::unique(out.domain.begin(), out.domain.end()),
                   out.domain.end());
  const int w = static_cast<int>(out.domain.size());
  if (w > kMaxGroupDomain) {
    throw std::invalid_argument("group " + std::to_string(group) + " has " +
                                std::to_string(w) + " variables; limit is " +
                                std::to_string(kMaxGroupDomain));
  }

  auto bit_of = [&](int var) {
    const auto pos = std::lower_bound(out.domain.begin(), out.domain.end(), var) -
                     out.domain.begin();
    return std::uint64_t{1} << (w - 1 - pos);
  };
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
  for (std::size_t k : clause_ids) {
    std::uint64_t pos = 0, neg = 0;
    for (Literal lit : formula.clause(k)) {
      (lit > 0 ? pos : neg) |= bit_of(std::abs(lit));
    }
    masks.emplace_back(pos, neg);
  }
  const std::uint64_t end = std::uint64_t{1} << w;
  for (std::uint64_t code = 0; code < end; ++code) {
    const bool ok = std::all_of(masks.begin(), masks.end(), [code](auto pn) {
      return ((code & pn.first) | (~code & pn.second)) != 0;
    });
    if (ok) out.codes.push_back(code);
  }
  return out;
}

ElementLayout::ElementLayout(int n, int r, std::vector<std::size_t> iss_widths,
                             std::size_t dull_width)
    : n_(n), r_(r), iss_widths_(std::move(iss_widths)), dull_width_(dull_width) {
  if (n_ < 1 || r_ < 1) throw FormatError("layout needs n >= 1 and r >= 1");
  if (iss_widths_.size() != static_cast<std::size_t>(r_)) {
    throw FormatError("layout needs one ISS width per group");
  }
  iss_offsets_.assign(1, grid_size());
  for (std::size_t w : iss_widths_) {
    iss_offsets_.push_back(iss_offsets_.back() + w);
  }
  if (universe_size() > UINT32_MAX) {
    throw FormatError("universe exceeds 32-bit element IDs");
  }
}

ElementSet GridEdges(int x, int g, bool value, const ElementLayout& layout) {
  ElementSet out;
  out.reserve(layout.r());
  for (int j = 0; j < layout.r(); ++j) {
    out.push_back(value ? layout.GridId(x, j, g) : layout.GridId(x, g, j));
  }
  return out;
}

namespace {

// C(n, k), saturating at UINT64_MAX.
std::uint64_t BinomialSat(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace

std::size_t IssWidth(std::size_t count) {
  const std::uint64_t need = std::max<std::size_t>(count, 1);
  std::size_t u = 1;
  while (BinomialSat(u, u / 2 + 1) < need) ++u;
  return u;
}

IssFamily BuildIss(std::size_t count) {
  IssFamily fam;
  const std::size_t u = IssWidth(count);
  const std::size_t k = u / 2 + 1;
  fam.universe_width = u;
  fam.sets.reserve(count);
  ElementSet comb(k);
  for (std::size_t t = 0; t < k; ++t) comb[t] = static_cast<ElementId>(t);
  for (std::size_t made = 0; made < count; ++made) {
    fam.sets.push_back(comb);
    // Advance to the next k-subset in lexicographic order.
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == u - k + (i - 1)) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t t = i; t < k; ++t) comb[t] = comb[t - 1] + 1;
  }
  return fam;
}

int DefaultPaddingWidth(int n, int r, int cap) {
  if (r <= 1) return 0;
  const double d = std::ceil(n * std::log2(static_cast<double>(std::max(r, 2))) /
                             r);
  return static_cast<int>(std::min<double>(d, cap));
}

WitnessMap::WitnessMap(ElementLayout layout, std::vector<Group> groups,
                       std::size_t padding_first, std::size_t padding_count)
    : layout_(std::move(layout)),
      groups_(std::move(groups)),
      padding_first_(padding_first),
      padding_count_(padding_count) {
  if (groups_.size() != static_cast<std::size_t>(layout_.r())) {
    throw FormatError("witness needs exactly r groups");
  }
  std::size_t next = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const Group& grp = groups_[g];
    if (grp.first_set != next) {
      throw FormatError("group " + std::to_string(g) +
                        " sets are not contiguous in group order");
    }
    if (!std::is_sorted(grp.domain.begin(), grp.domain.end()) ||
        std::adjacent_find(grp.domain.begin(), grp.domain.end()) !=
            grp.domain.end()) {
      throw FormatError("group " + std::to_string(g) +
                        " domain is not strictly ascending");
    }
    if (grp.domain.size() > static_cast<std::size_t>(kMaxGroupDomain)) {
      throw FormatError("group " + std::to_string(g) + " domain too large");
    }
    for (int v : grp.domain) {
      if (v < 1 || v > layout_.n()) {
        throw FormatError("group " + std::to_string(g) + " variable " +
                          std::to_string(v) + " out of range");
      }
    }
    const std::uint64_t limit = std::uint64_t{1} << grp.domain.size();
    for (std::size_t k = 0; k < grp.codes.size(); ++k) {
      if (grp.codes[k] >= limit || (k > 0 && grp.codes[k] <= grp.codes[k - 1])) {
        throw FormatError("group " + std::to_string(g) +
                          " assignments out of encoding order");
      }
    }
    next += grp.codes.size();
  }
  core_count_ = next;
  if (padding_first_ != core_count_) {
    throw FormatError("padding range must start right after the core sets");
  }
}

WitnessMap::Owner WitnessMap::OwnerOf(std::size_t set_index) const {
  if (set_index >= core_count_) {
    throw std::out_of_range("set " + std::to_string(set_index) +
                            " is not a core set");
  }
  auto it = std::upper_bound(
      groups_.begin(), groups_.end(), set_index,
      [](std::size_t idx, const Group& g) { return idx < g.first_set; });
  // Skip back over groups with no sets that share the same first_set.
  while (true) {
    --it;
    if (set_index < it->first_set + it->codes.size()) break;
  }
  const int g = static_cast<int>(it - groups_.begin());
  GroupAssignments ga{g, it->domain, it->codes};
  return {g, ga.At(set_index - it->first_set)};
}

Reduction Reduce(const CnfFormula& formula, int r,
                 const ReduceOptions& options) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  const int n = formula.num_vars();
  const int d = options.padding_width.value_or(
      DefaultPaddingWidth(n, r, options.padding_cap));
  if (d < 0) throw std::invalid_argument("padding width must be nonnegative");
  if (d > options.padding_cap) {
    throw std::invalid_argument("padding width " + std::to_string(d) +
                                " exceeds cap " +
                                std::to_string(options.padding_cap) +
                                " (2^d padding sets are materialized)");
  }
  if (r == 1 && d > 0) {
    throw std::invalid_argument(
        "padding requires r >= 2: with r = 1 any single padding set is a "
        "packing");
  }

  const ClausePartition partition = PartitionClauses(formula.num_clauses(), r);
  if (!options.use_iss) {
    const auto empty = std::count_if(partition.groups.begin(),
                                     partition.groups.end(),
                                     [](const auto& g) { return g.empty(); });
    if (empty > 1) {
      throw std::invalid_argument(
          "without ISS tags at most one clause group may be empty (r <= m + 1)");
    }
  }

  std::vector<GroupAssignments> per_group;
  per_group.reserve(r);
  std::vector<std::size_t> widths;
  for (int g = 0; g < r; ++g) {
    per_group.push_back(EnumerateGroupAssignments(formula, partition, g));
    widths.push_back(options.use_iss ? IssWidth(per_group.back().size()) : 0);
  }
  ElementLayout layout(n, r, widths, static_cast<std::size_t>(d));

  std::vector<ElementSet> sets;
  std::vector<WitnessMap::Group> groups;
  for (int g = 0; g < r; ++g) {
    const GroupAssignments& ga = per_group[g];
    IssFamily iss;
    if (options.use_iss) iss = BuildIss(ga.size());
    groups.push_back({ga.domain, sets.size(), ga.codes});
    const std::size_t w = ga.domain.size();
    for (std::size_t k = 0; k < ga.size(); ++k) {
      ElementSet s;
      s.reserve(w * r + (options.use_iss ? iss.sets[k].size() : 0));
      // Blocks ascend with the variable, and each block's edges ascend.
      for (std::size_t t = 0; t < w; ++t) {
        const bool value = ((ga.codes[k] >> (w - 1 - t)) & 1) != 0;
        const ElementSet edges = GridEdges(ga.domain[t] - 1, g, value, layout);
        s.insert(s.end(), edges.begin(), edges.end());
      }
      if (options.use_iss) {
        for (ElementId e : iss.sets[k]) {
          s.push_back(static_cast<ElementId>(layout.iss_offset(g) + e));
        }
      }
      sets.push_back(std::move(s));
    }
  }

  const std::size_t core = sets.size();
  const std::size_t padding = d > 0 ? std::size_t{1} << d : 0;
  for (std::size_t mask = 0; mask < padding; ++mask) {
    ElementSet s;
    s.reserve(layout.core_size() + d);
    for (std::size_t e = 0; e < layout.core_size(); ++e) {
      s.push_back(static_cast<ElementId>(e));
    }
    for (int t = 0; t < d; ++t) {
      if ((mask >> t) & 1) {
        s.push_back(static_cast<ElementId>(layout.dull_offset() + t));
      }
    }
    sets.push_back(std::move(s));
  }

  SetPackingInstance instance;
  try {
    instance = SetPackingInstance(layout.universe_size(), std::move(sets), r);
  } catch (const FormatError& e) {
    // The construction never repeats a set; reaching this is a bug.
    throw std::logic_error(std::string("reduction produced an invalid family: ") +
                           e.what());
  }
  WitnessMap witness(std::move(layout), std::move(groups), core, padding);
  return {std::move(instance), std::move(witness)};
}

std::vector<std::size_t> LowerAssignmentToPacking(const WitnessMap& witness,
                                                  const Assignment& alpha) {
  if (!alpha.IsTotal(witness.n())) {
    throw WitnessError("assignment is not total over " +
                       std::to_string(witness.n()) + " variables");
  }
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < witness.groups().size(); ++g) {
    const auto& grp = witness.groups()[g];
    GroupAssignments ga{static_cast<int>(g), grp.domain, grp.codes};
    const std::uint64_t code = ga.Encode(alpha);
    auto it = std::lower_bound(grp.codes.begin(), grp.codes.end(), code);
    if (it == grp.codes.end() || *it != code) {
      throw WitnessError("assignment does not satisfy clause group " +
                         std::to_string(g));
    }
    out.push_back(grp.first_set +
                  static_cast<std::size_t>(it - grp.codes.begin()));
  }
  return out;
}

Assignment LiftPackingToAssignment(const WitnessMap& witness,
                                   std::span<const std::size_t> packing) {
  if (packing.size() != static_cast<std::size_t>(witness.r())) {
    throw WitnessError("packing has " + std::to_string(packing.size()) +
                       " sets, expected r = " + std::to_string(witness.r()));
  }
  std::vector<bool> seen(witness.r(), false);
  Assignment merged;
  for (std::size_t idx : packing) {
    if (witness.IsPadding(idx)) {
      throw WitnessError("set " + std::to_string(idx) + " is a padding set");
    }
    if (idx >= witness.core_count()) {
      throw WitnessError("set " + std::to_string(idx) + " out of range");
    }
    auto owner = witness.OwnerOf(idx);
    if (seen[owner.group]) {
      throw WitnessError("two sets from clause group " +
                         std::to_string(owner.group));
    }
    seen[owner.group] = true;
    for (const auto& [v, b] : owner.assignment.values()) {
      auto prev = merged.Get(v);
      if (prev && *prev != b) {
        throw WitnessError("inconsistent values for variable " +
                           std::to_string(v));
      }
      merged.Set(v, b);
    }
  }
  for (int v = 1; v <= witness.n(); ++v) {
    if (!merged.Has(v)) merged.Set(v, false);
  }
  return merged;
}

namespace {

std::string JoinVars(const std::vector<int>& vars) {
  if (vars.empty()) return "-";
  std::string s;
  for (int v : vars) {
    if (!s.empty()) s += ',';
    s += std::to_string(v);
  }
  return s;
}

std::string CodeBits(std::uint64_t code, std::size_t w) {
  if (w == 0) return "-";
  std::string s(w, '0');
  for (std::size_t t = 0; t < w; ++t) {
    if ((code >> (w - 1 - t)) & 1) s[t] = '1';
  }
  return s;
}

long long ParseInt(const std::string& tok, int line_no) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size()) {
    throw FormatError("witness line " + std::to_string(line_no) +
                      ": bad integer \"" + tok + "\"");
  }
  return v;
}

std::size_t ParseCount(const std::string& tok, int line_no) {
  const long long v = ParseInt(tok, line_no);
  if (v < 0) {
    throw FormatError("witness line " + std::to_string(line_no) +
                      ": negative value");
  }
  return static_cast<std::size_t>(v);
}

std::vector<int> ParseVars(const std::string& tok, int line_no) {
  std::vector<int> out;
  if (tok == "-") return out;
  std::istringstream in(tok);
  for (std::string part; std::getline(in, part, ',');) {
    out.push_back(static_cast<int>(ParseInt(part, line_no)));
  }
  return out;
}

std::uint64_t ParseBits(const std::string& tok, std::size_t w, int line_no) {
  if (w == 0 && tok == "-") return 0;
  if (tok.size() != w ||
      tok.find_first_not_of("01") != std::string::npos) {
    throw FormatError("witness line " + std::to_string(line_no) +
                      ": expected " + std::to_string(w) + " bits, got \"" +
                      tok + "\"");
  }
  std::uint64_t code = 0;
  for (char c : tok) code = (code << 1) | (c == '1' ? 1 : 0);
  return code;
}

}  // namespace

void WriteWitness(const WitnessMap& witness, std::ostream& out) {
  const ElementLayout& lay = witness.layout();
  out << "w " << lay.n() << ' ' << lay.r() << ' ' << lay.dull_width();
  for (std::size_t u : lay.iss_widths()) out << ' ' << u;
  out << '\n';
  const auto& groups = witness.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out << "g " << g << ' ' << groups[g].first_set << ' '
        << groups[g].codes.size() << ' ' << JoinVars(groups[g].domain) << '\n';
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    const std::string vars = JoinVars(grp.domain);
    for (std::size_t k = 0; k < grp.codes.size(); ++k) {
      out << grp.first_set + k << ' ' << g << ' ' << vars << ' '
          << CodeBits(grp.codes[k], grp.domain.size()) << '\n';
    }
  }
  out << "pad " << witness.padding_first() << ' ' << witness.padding_count()
      << '\n';
}

std::string SerializeWitness(const WitnessMap& witness) {
  std::ostringstream out;
  WriteWitness(witness, out);
  return out.str();
}

WitnessMap ParseWitness(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<ElementLayout> layout;
  std::vector<WitnessMap::Group> groups;
  std::vector<std::size_t> declared;
  std::size_t next_set = 0;
  std::optional<std::pair<std::size_t, std::size_t>> pad;
  auto fail = [&](const std::string& what) {
    throw FormatError("witness line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;
    if (pad) fail("content after \"pad\" line");
    if (!layout) {
      if (tok[0] != "w" || tok.size() < 4) fail("expected \"w <n> <r> <d> <u...>\"");
      const int n = static_cast<int>(ParseInt(tok[1], line_no));
      const int r = static_cast<int>(ParseInt(tok[2], line_no));
      if (r < 1 || tok.size() != static_cast<std::size_t>(4 + r)) {
        fail("header must list one ISS width per group");
      }
      std::vector<std::size_t> widths;
      for (int g = 0; g < r; ++g) widths.push_back(ParseCount(tok[4 + g], line_no));
      layout.emplace(n, r, std::move(widths), ParseCount(tok[3], line_no));
      continue;
    }
    if (tok[0] == "g") {
      if (tok.size() != 5) fail("expected \"g <group> <first> <count> <vars>\"");
      if (ParseCount(tok[1], line_no) != groups.size()) fail("group out of order");
      WitnessMap::Group grp;
      grp.first_set = ParseCount(tok[2], line_no);
      grp.domain = ParseVars(tok[4], line_no);
      declared.push_back(ParseCount(tok[3], line_no));
      groups.push_back(std::move(grp));
      continue;
    }
    if (tok[0] == "pad") {
      if (tok.size() != 3) fail("expected \"pad <first> <count>\"");
      pad.emplace(ParseCount(tok[1], line_no), ParseCount(tok[2], line_no));
      continue;
    }
    if (tok.size() != 4) fail("expected \"<set> <group> <vars> <bits>\"");
    const std::size_t idx = ParseCount(tok[0], line_no);
    const std::size_t g = ParseCount(tok[1], line_no);
    if (idx != next_set) fail("core sets must be listed in index order");
    if (g >= groups.size()) fail("unknown group " + tok[1]);
    auto& grp = groups[g];
    if (ParseVars(tok[2], line_no) != grp.domain) {
      fail("domain differs from group declaration");
    }
    if (idx != grp.first_set + grp.codes.size()) {
      fail("set index does not follow its group's range");
    }
    grp.codes.push_back(ParseBits(tok[3], grp.domain.size(), line_no));
    ++next_set;
  }
  if (!layout) throw FormatError("witness: missing \"w\" header");
  if (!pad) throw FormatError("witness: missing \"pad\" line");
  if (groups.size() != static_cast<std::size_t>(layout->r())) {
    throw FormatError("witness: expected " + std::to_string(layout->r()) +
                      " group lines");
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].codes.size() != declared[g]) {
      throw FormatError("witness: group " + std::to_string(g) + " declares " +
                        std::to_string(declared[g]) + " sets but lists " +
                        std::to_string(groups[g].codes.size()));
    }
  }
  const std::size_t expected_pad =
      layout->dull_width() > 0 ? std::size_t{1} << layout->dull_width() : 0;
  if (pad->second != expected_pad) {
    throw FormatError("witness: padding count does not match 2^d");
  }
  return WitnessMap(std::move(*layout), std::move(groups), pad->first,
                    pad->second);
}

WitnessMap ParseWitness(const std::string& text) {
  std::istringstream in(text);
  return ParseWitness(in);
}

BlockBreakdown Breakdown(const WitnessMap& witness) {
  const ElementLayout& lay = witness.layout();
  return {lay.grid_size(), lay.iss_total(), lay.dull_width(),
          witness.core_count(), witness.padding_count()};
}

}  // namespace cspack
