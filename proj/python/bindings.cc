#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cspack/cnf.h"
#include "cspack/harness.h"
#include "cspack/packing.h"
#include "cspack/reduction.h"

namespace py = pybind11;
using namespace cspack;

namespace {

Assignment ToAssignment(const std::map<int, bool>& values) {
  return Assignment(values);
}

std::optional<std::map<int, bool>> FromAssignment(
    const std::optional<Assignment>& a) {
  if (!a) return std::nullopt;
  return a->values();
}

py::dict SolveDict(const SolveResult& res) {
  py::dict d;
  d["verdict"] = std::string(VerdictName(res.verdict));
  d["packing"] = res.packing;
  d["nodes"] = res.nodes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cspack, m) {
  m.doc() = "Reduction from 3-SAT to compact set packing, with an exact solver";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<WitnessError>(m, "WitnessError", PyExc_ValueError);

  py::class_<CnfFormula>(m, "CnfFormula")
      .def(py::init<int, std::vector<Clause>>(), py::arg("num_vars"),
           py::arg("clauses"))
      .def_property_readonly("num_vars", &CnfFormula::num_vars)
      .def_property_readonly("num_clauses", &CnfFormula::num_clauses)
      .def_property_readonly("clauses", &CnfFormula::clauses)
      .def("to_dimacs", [](const CnfFormula& f) { return ToDimacs(f); })
      .def("__eq__", [](const CnfFormula& a, const CnfFormula& b) { return a == b; })
      .def("__repr__", [](const CnfFormula& f) {
        return "<CnfFormula n=" + std::to_string(f.num_vars()) +
               " m=" + std::to_string(f.num_clauses()) + ">";
      });

  m.def("parse_dimacs", py::overload_cast<const std::string&>(&ParseDimacs),
        py::arg("text"));
  m.def(
      "evaluate",
      [](const CnfFormula& f, const std::map<int, bool>& alpha) {
        return Evaluate(f, ToAssignment(alpha));
      },
      py::arg("formula"), py::arg("alpha"));
  m.def(
      "brute_force_sat",
      [](const CnfFormula& f, int cap) {
        return FromAssignment(BruteForceSat(f, cap));
      },
      py::arg("formula"), py::arg("cap") = kDefaultOracleCap);
  m.def(
      "gen_random_3cnf",
      [](int n, std::size_t m, std::uint64_t seed,
         std::optional<std::map<int, bool>> planted) {
        std::optional<Assignment> p;
        if (planted) p = ToAssignment(*planted);
        return GenRandom3Cnf(n, m, seed, p);
      },
      py::arg("n"), py::arg("m"), py::arg("seed"),
      py::arg("planted") = py::none());
  m.def(
      "check_sparsity",
      [](const CnfFormula& f, double bound) {
        const auto rep = CheckSparsity(f, bound);
        py::dict d;
        d["m"] = rep.num_clauses;
        d["n"] = rep.num_vars;
        d["ratio"] = rep.ratio;
        d["pass"] = rep.pass;
        return d;
      },
      py::arg("formula"), py::arg("density_bound") = kDefaultDensityBound);

  py::class_<SetPackingInstance>(m, "SetPackingInstance")
      .def(py::init<std::size_t, std::vector<ElementSet>, int>(),
           py::arg("universe_size"), py::arg("sets"), py::arg("r"))
      .def_property_readonly("universe_size", &SetPackingInstance::universe_size)
      .def_property_readonly("set_count", &SetPackingInstance::set_count)
      .def_property_readonly("r", &SetPackingInstance::r)
      .def_property_readonly("sets", &SetPackingInstance::sets)
      .def("serialize",
           [](const SetPackingInstance& i) { return SerializeInstance(i); })
      .def("__eq__", [](const SetPackingInstance& a,
                        const SetPackingInstance& b) { return a == b; });

  m.def("parse_instance",
        py::overload_cast<const std::string&>(&ParseInstance), py::arg("text"));
  m.def(
      "solve_exact",
      [](const SetPackingInstance& inst, std::uint64_t budget) {
        return SolveDict(SolveExact(inst, budget));
      },
      py::arg("instance"), py::arg("budget") = kDefaultNodeBudget);
  m.def(
      "verify_packing",
      [](const SetPackingInstance& inst, const std::vector<std::size_t>& idx) {
        const auto v = VerifyPacking(inst, idx);
        return py::make_tuple(v.ok, v.reason);
      },
      py::arg("instance"), py::arg("indices"));

  py::class_<WitnessMap>(m, "WitnessMap")
      .def_property_readonly("r", &WitnessMap::r)
      .def_property_readonly("n", &WitnessMap::n)
      .def_property_readonly("core_count", &WitnessMap::core_count)
      .def_property_readonly("padding_first", &WitnessMap::padding_first)
      .def_property_readonly("padding_count", &WitnessMap::padding_count)
      .def_property_readonly(
          "iss_widths",
          [](const WitnessMap& w) { return w.layout().iss_widths(); })
      .def("owner",
           [](const WitnessMap& w, std::size_t idx) {
             auto o = w.OwnerOf(idx);
             return py::make_tuple(o.group, o.assignment.values());
           })
      .def("serialize", [](const WitnessMap& w) { return SerializeWitness(w); })
      .def("__eq__",
           [](const WitnessMap& a, const WitnessMap& b) { return a == b; });

  m.def("parse_witness", py::overload_cast<const std::string&>(&ParseWitness),
        py::arg("text"));

  m.def(
      "reduce",
      [](const CnfFormula& f, int r, std::optional<int> padding, bool use_iss) {
        ReduceOptions o;
        o.padding_width = padding;
        o.use_iss = use_iss;
        Reduction red = Reduce(f, r, o);
        return py::make_tuple(std::move(red.instance), std::move(red.witness));
      },
      py::arg("formula"), py::arg("r"), py::arg("padding") = py::none(),
      py::arg("use_iss") = true,
      "Returns (instance, witness). padding=None selects the default width.");
  m.def(
      "lower_assignment_to_packing",
      [](const WitnessMap& w, const std::map<int, bool>& alpha) {
        return LowerAssignmentToPacking(w, ToAssignment(alpha));
      },
      py::arg("witness"), py::arg("alpha"));
  m.def(
      "lift_packing_to_assignment",
      [](const WitnessMap& w, const std::vector<std::size_t>& packing) {
        return LiftPackingToAssignment(w, packing).values();
      },
      py::arg("witness"), py::arg("packing"));
  m.def(
      "audit_compactness",
      [](const SetPackingInstance& inst, const WitnessMap* w) {
        const auto rep = w ? AuditCompactness(inst, *w) : AuditCompactness(inst);
        py::dict d;
        d["universe_size"] = rep.universe_size;
        d["set_count"] = rep.set_count;
        d["r"] = rep.r;
        d["log2_sets"] = rep.log2_sets;
        d["rho"] = rep.rho;
        if (rep.breakdown) {
          d["grid"] = rep.breakdown->grid;
          d["iss"] = rep.breakdown->iss;
          d["dull"] = rep.breakdown->dull;
          d["core_sets"] = rep.breakdown->core_sets;
          d["padding_sets"] = rep.breakdown->padding_sets;
        }
        return d;
      },
      py::arg("instance"), py::arg("witness") = nullptr);
  m.def(
      "roundtrip",
      [](const CnfFormula& f, int r, std::optional<int> padding,
         std::uint64_t budget, int oracle_cap) {
        RoundtripOptions o;
        o.r = r;
        o.reduce.padding_width = padding;
        o.budget = budget;
        o.oracle_cap = oracle_cap;
        const auto rep = Roundtrip(f, o);
        py::dict d;
        d["agreement"] = std::string(AgreementName(rep.agreement));
        d["detail"] = rep.detail;
        d["solve"] = SolveDict(rep.solve);
        d["lifted"] = FromAssignment(rep.lifted);
        d["oracle"] = FromAssignment(rep.oracle);
        d["universe_size"] = rep.universe_size;
        d["set_count"] = rep.set_count;
        return d;
      },
      py::arg("formula"), py::arg("r"), py::arg("padding") = 0,
      py::arg("budget") = kDefaultNodeBudget,
      py::arg("oracle_cap") = kDefaultOracleCap);
}
