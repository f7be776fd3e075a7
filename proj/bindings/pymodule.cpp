// Python bindings for the core operations: parsing, provability, uniform
// interpolation, unification, projectivity, approximation sets and
// relativised admissibility.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "parlog/admissibility.hpp"
#include "parlog/bank.hpp"
#include "parlog/classical.hpp"
#include "parlog/errors.hpp"
#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"
#include "parlog/projectivity.hpp"
#include "parlog/prover.hpp"

namespace py = pybind11;
using namespace parlog;

namespace {

Signature make_signature(const std::vector<std::string>& vars,
                         const std::vector<std::string>& pars) {
    Signature sig;
    for (const std::string& v : vars)
        sig.declare(v, Sort::Var);
    for (const std::string& p : pars)
        sig.declare(p, Sort::Par);
    return sig;
}

bool use_ipc(const std::string& logic) {
    if (logic == "ipc")
        return true;
    if (logic == "cpc")
        return false;
    throw ParseError("logic must be 'cpc' or 'ipc', got '" + logic + "'");
}

py::dict subst_dict(const Substitution& th) {
    py::dict d;
    for (const auto& [a, f] : th.bindings())
        d[py::str(atom_name(a))] = f;
    return d;
}

Substitution subst_from_dict(const py::dict& d) {
    Substitution th;
    for (auto item : d) {
        auto name = item.first.cast<std::string>();
        if (py::isinstance<py::str>(item.second))
            th.set(name, parse(item.second.cast<std::string>()));
        else
            th.set(name, item.second.cast<Formula>());
    }
    return th;
}

} // namespace

PYBIND11_MODULE(_parlog, m) {
    m.doc() = "two-sorted propositional toolkit: CPC/IPC provability, uniform "
              "interpolation, unification, projectivity, admissibility";

    py::register_exception<LimitError>(m, "LimitExceeded", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "FormulaParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ModelValidationError", PyExc_ValueError);

    py::class_<Formula>(m, "Formula")
        .def("__str__", [](Formula f) { return print(f); })
        .def("__repr__", [](Formula f) { return "Formula('" + print(f) + "')"; })
        .def("__eq__", [](Formula a, Formula b) { return a.id() == b.id(); })
        .def("__hash__", [](Formula f) { return static_cast<std::size_t>(f.id()); })
        .def("__and__", [](Formula a, Formula b) { return conj(a, b); })
        .def("__or__", [](Formula a, Formula b) { return disj(a, b); })
        .def("__invert__", [](Formula a) { return neg(a); })
        .def("__rshift__", [](Formula a, Formula b) { return imp(a, b); })
        .def_property_readonly("complexity", [](Formula f) { return complexity(f); })
        .def_property_readonly("atoms", [](Formula f) {
            std::vector<std::string> out;
            for (AtomId a : atoms_of(f))
                out.push_back(atom_name(a));
            return out;
        })
        .def_property_readonly("variables", [](Formula f) {
            std::vector<std::string> out;
            for (AtomId a : vars_of(f))
                out.push_back(atom_name(a));
            return out;
        });

    m.def("parse",
          [](const std::string& text, const std::vector<std::string>& vars,
             const std::vector<std::string>& pars) {
              return parse(text, make_signature(vars, pars));
          },
          py::arg("text"), py::arg("vars") = std::vector<std::string>{},
          py::arg("pars") = std::vector<std::string>{},
          "Parse a formula; names starting with x,y,z,u,v,w default to variables.");
    m.def("var", [](const std::string& n) { return var(n); });
    m.def("par", [](const std::string& n) { return par(n); });
    m.def("true_", [] { return top(); });
    m.def("false_", [] { return bot(); });
    m.def("simplify", &simplify);

    m.def("prove",
          [](Formula f, const std::string& logic) {
              return use_ipc(logic) ? prove_i(f) : taut_c(f);
          },
          py::arg("formula"), py::arg("logic") = "ipc");
    m.def("prove_from",
          [](const std::vector<Formula>& gamma, Formula f) {
              return prove_i(gamma, f);
          },
          py::arg("assumptions"), py::arg("formula"),
          "Intuitionistic derivability from finitely many assumptions.");
    m.def("countermodel",
          [](Formula f) -> std::optional<std::string> {
              auto k = countermodel_i(f);
              if (!k)
                  return std::nullopt;
              return model_to_json(*k);
          },
          py::arg("formula"),
          "JSON countermodel refuting the formula, or None when provable.");
    m.def("model_forces",
          [](const std::string& model_json, const std::string& text) {
              KripkeModel k = model_from_json(model_json);
              return k.forces(k.root(), parse(text));
          },
          py::arg("model_json"), py::arg("formula"));

    m.def("uap",
          [](Formula f, const std::string& logic, std::optional<int> bound) {
              return use_ipc(logic) ? uap_i(f, bound) : uap_c(f);
          },
          py::arg("formula"), py::arg("logic") = "ipc",
          py::arg("bound") = std::nullopt,
          "Strongest parameter-only consequence (uniform post-interpolant).");

    m.def("unify",
          [](Formula f, const std::string& logic) -> std::optional<py::dict> {
              if (!use_ipc(logic)) {
                  auto th = unifier_c(f);
                  if (!th)
                      return std::nullopt;
                  return subst_dict(*th);
              }
              auto set = complete_unifiers_ext(f, top());
              if (!set || set->empty())
                  return std::nullopt;
              return subst_dict(set->front());
          },
          py::arg("formula"), py::arg("logic") = "ipc",
          "A unifier as {variable: formula}, or None.");
    m.def("mgu",
          [](Formula f, Formula ext) -> std::optional<py::dict> {
              auto th = mgu_ext_c(f, ext);
              if (!th)
                  return std::nullopt;
              return subst_dict(*th);
          },
          py::arg("formula"), py::arg("ext"),
          "Classical most general unifier modulo a parameter-only axiom.");
    m.def("unifiers",
          [](Formula f, Formula ext) -> std::optional<std::vector<py::dict>> {
              auto set = complete_unifiers_ext(f, ext);
              if (!set)
                  return std::nullopt;
              std::vector<py::dict> out;
              for (const Substitution& th : *set)
                  out.push_back(subst_dict(th));
              return out;
          },
          py::arg("formula"), py::arg("ext"),
          "Complete set of unifiers modulo the axiom, or None when not unifiable.");

    m.def("project",
          [](Formula f, Formula target, const std::string& logic)
              -> std::optional<py::dict> {
              if (use_ipc(logic)) {
                  auto th = decide_E_projective(f, target);
                  if (!th)
                      return std::nullopt;
                  return subst_dict(*th);
              }
              ProjectiveC pr = par_projective_c(f);
              if (!equiv_c(pr.projection, target))
                  return std::nullopt;
              return subst_dict(pr.theta);
          },
          py::arg("formula"), py::arg("target"), py::arg("logic") = "ipc",
          "Witness substitution when the formula projects onto the target.");
    m.def("apply",
          [](const py::dict& th, Formula f) { return subst_from_dict(th)(f); },
          py::arg("substitution"), py::arg("formula"),
          "Apply {variable: formula} homomorphically.");

    m.def("approx",
          [](Formula f, const std::vector<Formula>& gamma) {
              ApproxResult r = projective_approx(f, gamma);
              py::list members;
              for (const ApproxEntry& e : r.pi) {
                  py::dict d;
                  d["member"] = e.b;
                  d["onto"] = e.projection;
                  d["theta"] = subst_dict(e.theta);
                  members.append(d);
              }
              py::dict out;
              out["n"] = r.config.n;
              out["members"] = members;
              return out;
          },
          py::arg("formula"), py::arg("gamma"),
          "Projective approximation set relative to gamma.");

    m.def("admissible",
          [](Formula premise, const std::vector<Formula>& conclusions,
             const std::vector<Formula>& gamma) {
              AdmissibleCert cert = admissible_gamma(Rule{premise, conclusions}, gamma);
              py::dict out;
              out["admissible"] = cert.admissible;
              if (cert.admissible) {
                  py::list js;
                  for (const auto& [e, d] : cert.justified) {
                      py::dict row;
                      row["member"] = e.b;
                      row["implies"] = d;
                      js.append(row);
                  }
                  out["justified"] = js;
              } else if (cert.refutation) {
                  py::dict row;
                  row["member"] = cert.refutation->b;
                  row["axiom"] = cert.refutation->projection;
                  row["theta"] = subst_dict(cert.refutation->theta);
                  out["refutation"] = row;
              }
              return out;
          },
          py::arg("premise"), py::arg("conclusions"), py::arg("gamma"),
          "Relativised multi-conclusion admissibility with certificates.");

    m.def("bank_info",
          [](const std::vector<std::string>& atoms, int depth) {
              Signature sig;
              std::vector<AtomId> ids;
              for (const std::string& n : atoms)
                  ids.push_back(intern_atom(n, sig.sort_of(n)));
              Limits lim;
              lim.max_bank_level = std::max(lim.max_bank_level, depth);
              lim.max_bank_atoms = std::max<int>(lim.max_bank_atoms,
                                                 static_cast<int>(ids.size()));
              Bank b = build_bank(ids, depth, lim);
              py::dict out;
              out["classes"] = b.classes();
              out["depth"] = b.depth();
              py::list per;
              for (std::size_t n : b.stats.classes_per_depth)
                  per.append(n);
              out["classes_per_depth"] = per;
              return out;
          },
          py::arg("atoms"), py::arg("depth"),
          "Size of the bounded-bisimulation class catalogue.");
}
