// Command-line surface: every library operation behind stable text formats
// and exit codes.
//   exit 0  positive verdict / success
//   exit 1  negative verdict (NO, NotProjective, NotUnifiable)
//   exit 2  usage, parse or validation error
//   exit 3  a configured resource cap was exceeded
//   exit 4  internal invariant violation (never expected)
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parlog/admissibility.hpp"
#include "parlog/bank.hpp"
#include "parlog/classical.hpp"
#include "parlog/errors.hpp"
#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"
#include "parlog/projectivity.hpp"
#include "parlog/prover.hpp"

using namespace parlog;
using ojson = nlohmann::ordered_json;

namespace {

struct Common {
    std::string logic = "ipc";
    std::string vars, pars;
    bool json = false;
    Limits lim;
    std::optional<int> bound;

    bool ipc() const { return logic == "ipc"; }

    Signature signature() const {
        Signature sig;
        auto add = [&sig](const std::string& csv, Sort sort) {
            std::stringstream ss(csv);
            std::string name;
            while (std::getline(ss, name, ','))
                if (!name.empty())
                    sig.declare(name, sort);
        };
        add(vars, Sort::Var);
        add(pars, Sort::Par);
        return sig;
    }
};

std::vector<std::string> split_on(const std::string& text, char sep) {
    // top-level split: separators inside parentheses do not count
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : text) {
        if (ch == '(')
            ++depth;
        if (ch == ')')
            --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    std::erase_if(out, [](const std::string& s) {
        return s.find_first_not_of(" \t") == std::string::npos;
    });
    return out;
}

std::vector<Formula> parse_list(const std::string& text, char sep, const Signature& sig) {
    std::vector<Formula> out;
    for (const std::string& part : split_on(text, sep))
        out.push_back(parse(part, sig));
    return out;
}

// Bindings as display lines, sorted by variable name.
std::vector<std::pair<std::string, std::string>> binding_rows(const Substitution& th) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [a, f] : th.bindings())
        rows.emplace_back(atom_name(a), print(f));
    std::sort(rows.begin(), rows.end());
    return rows;
}

void print_bindings(const Substitution& th) {
    for (const auto& [name, body] : binding_rows(th))
        std::cout << name << " := " << body << "\n";
}

ojson bindings_json(const Substitution& th) {
    ojson j = ojson::object();
    for (const auto& [name, body] : binding_rows(th))
        j[name] = body;
    return j;
}

ojson model_json(const KripkeModel& k) { return ojson::parse(model_to_json(k)); }

void emit(const Common& c, const ojson& j, const std::string& text) {
    if (c.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string atom_list(const std::vector<AtomId>& ats) {
    std::string s;
    for (AtomId a : ats) {
        if (!s.empty())
            s += " ";
        s += atom_name(a);
    }
    return s;
}

// ----------------------------------------------------------------- commands

int cmd_prove(const Common& c, const std::string& text) {
    Formula f = parse(text, c.signature());
    ojson j{{"command", "prove"}, {"logic", c.logic}, {"formula", print(f)}};
    if (!c.ipc()) {
        auto bad = falsify_c(f);
        j["verdict"] = bad ? "NO" : "YES";
        std::string out = bad ? "NO\n" : "YES\n";
        if (bad) {
            out += "falsifying assignment:\n";
            ojson cert = ojson::object();
            for (const auto& [a, v] : *bad) {
                out += atom_name(a) + std::string(" := ") + (v ? "true" : "false") + "\n";
                cert[atom_name(a)] = v;
            }
            j["falsifying_assignment"] = cert;
        }
        emit(c, j, out);
        return bad ? 1 : 0;
    }
    bool yes = prove_i(f);
    j["verdict"] = yes ? "YES" : "NO";
    std::string out = yes ? "YES\n" : "NO\n";
    if (!yes) {
        auto cm = countermodel_i(f);
        if (cm) {
            j["countermodel"] = model_json(*cm);
            out += "countermodel:\n" + model_to_json(*cm) + "\n";
        }
    }
    emit(c, j, out);
    return yes ? 0 : 1;
}

int cmd_uap(const Common& c, const std::string& text) {
    Formula f = parse(text, c.signature());
    Formula e = c.ipc() ? uap_i(f, c.bound, c.lim) : uap_c(f, c.lim);
    ojson j{{"command", "uap"},
            {"logic", c.logic},
            {"formula", print(f)},
            {"interpolant", print(e)}};
    emit(c, j, print(e) + "\n");
    return 0;
}

int cmd_unify(const Common& c, const std::string& text) {
    Formula f = parse(text, c.signature());
    std::optional<Substitution> th;
    if (c.ipc()) {
        // Most unifiable formulas admit a small parameter-only unifier, so a
        // seeded pool usually answers instantly; the complete-set walk that
        // backs the NO verdict can take minutes on projective inputs.
        for (const Substitution& cand :
             substitution_pool(pars_of(f), vars_of(f), 200, 11)) {
            if (prove_i(cand(f))) {
                th = cand;
                break;
            }
        }
        if (!th) {
            auto set = complete_unifiers_ext(f, top(), c.lim);
            if (set && !set->empty())
                th = set->front();
        }
    } else {
        th = unifier_c(f, c.lim);
    }
    ojson j{{"command", "unify"}, {"logic", c.logic}, {"formula", print(f)}};
    j["verdict"] = th ? "YES" : "NO";
    if (c.json) {
        if (th)
            j["unifier"] = bindings_json(*th);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (th ? "YES" : "NO") << "\n";
        if (th)
            print_bindings(*th);
    }
    return th ? 0 : 1;
}

int cmd_mgu(const Common& c, const std::string& text, const std::string& ext_text) {
    if (c.ipc())
        throw ParseError("mgu is a classical operation (intuitionistic unification "
                         "is finitary; use `unifiers`)");
    Signature sig = c.signature();
    Formula f = parse(text, sig);
    Formula e = parse(ext_text, sig);
    auto th = mgu_ext_c(f, e, c.lim);
    ojson j{{"command", "mgu"},
            {"logic", c.logic},
            {"formula", print(f)},
            {"ext", print(e)}};
    j["verdict"] = th ? "YES" : "NO";
    if (c.json) {
        if (th)
            j["mgu"] = bindings_json(*th);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (th ? "YES" : "NO") << "\n";
        if (th)
            print_bindings(*th);
    }
    return th ? 0 : 1;
}

int cmd_project(const Common& c, const std::string& text, const std::string& target) {
    Signature sig = c.signature();
    Formula f = parse(text, sig);
    Formula e = parse(target, sig);
    if (!is_par_only(e))
        throw ParseError("projection target must be parameter-only: " + print(e));
    std::optional<Substitution> th;
    if (c.ipc()) {
        th = decide_E_projective(f, e, c.lim);
    } else {
        ProjectiveC pr = par_projective_c(f, c.lim);
        if (equiv_c(pr.projection, e))
            th = pr.theta;
    }
    ojson j{{"command", "project"},
            {"logic", c.logic},
            {"formula", print(f)},
            {"target", print(e)}};
    j["verdict"] = th ? "YES" : "NO";
    if (c.json) {
        if (th)
            j["theta"] = bindings_json(*th);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (th ? "YES" : "NO") << "\n";
        if (th)
            print_bindings(*th);
    }
    return th ? 0 : 1;
}

int cmd_approx(const Common& c, const std::string& text, const std::string& gamma_text) {
    if (!c.ipc())
        throw ParseError("approx is an intuitionistic operation (--logic ipc)");
    Signature sig = c.signature();
    Formula f = parse(text, sig);
    std::vector<Formula> gamma = parse_list(gamma_text, ';', sig);
    ApproxResult r = projective_approx(f, gamma, c.lim);
    ojson j{{"command", "approx"}, {"logic", c.logic}, {"formula", print(f)}};
    ojson jg = ojson::array();
    for (Formula g : r.config.gamma_par)
        jg.push_back(print(g));
    j["gamma_par"] = jg;
    j["n"] = r.config.n;
    j["atoms"] = atom_list(r.config.working_atoms);
    ojson jm = ojson::array();
    std::string out;
    out += "n: " + std::to_string(r.config.n) + "\n";
    out += "atoms: " + atom_list(r.config.working_atoms) + "\n";
    out += "members: " + std::to_string(r.pi.size()) + "\n";
    int i = 0;
    for (const ApproxEntry& ent : r.pi) {
        ++i;
        out += "[" + std::to_string(i) + "] " + print(ent.b) + "\n";
        out += "    onto: " + print(ent.projection) + "\n";
        for (const auto& [name, body] : binding_rows(ent.theta))
            out += "    " + name + " := " + body + "\n";
        jm.push_back(ojson{{"member", print(ent.b)},
                           {"onto", print(ent.projection)},
                           {"theta", bindings_json(ent.theta)}});
    }
    j["members"] = jm;
    emit(c, j, out);
    return 0;
}

int cmd_admissible(const Common& c, const std::string& premise_text,
                   const std::string& conclusions_text, const std::string& gamma_text) {
    if (!c.ipc())
        throw ParseError("admissible is an intuitionistic operation (--logic ipc)");
    Signature sig = c.signature();
    Rule rule;
    rule.premise = parse(premise_text, sig);
    for (const std::string& part : split_on(conclusions_text, '|'))
        rule.conclusions.push_back(parse(part, sig));
    if (rule.conclusions.empty())
        throw ParseError("no conclusions given");
    std::vector<Formula> gamma = parse_list(gamma_text, ';', sig);
    AdmissibleCert cert = admissible_gamma(rule, gamma, c.lim);
    ojson j{{"command", "admissible"},
            {"logic", c.logic},
            {"premise", print(rule.premise)}};
    ojson jc = ojson::array();
    for (Formula d : rule.conclusions)
        jc.push_back(print(d));
    j["conclusions"] = jc;
    j["verdict"] = cert.admissible ? "YES" : "NO";
    std::string out = cert.admissible ? "YES\n" : "NO\n";
    if (cert.admissible) {
        ojson jj = ojson::array();
        out += "justified members: " + std::to_string(cert.justified.size()) + "\n";
        int i = 0;
        for (const auto& [ent, d] : cert.justified) {
            ++i;
            out += "[" + std::to_string(i) + "] " + print(ent.b) + "  ->  " + print(d) + "\n";
            jj.push_back(ojson{{"member", print(ent.b)}, {"implies", print(d)}});
        }
        j["justified"] = jj;
    } else if (cert.refutation) {
        out += "refuting member: " + print(cert.refutation->b) + "\n";
        out += "axiom: " + print(cert.refutation->projection) + "\n";
        out += "theta:\n";
        for (const auto& [name, body] : binding_rows(cert.refutation->theta))
            out += name + " := " + body + "\n";
        j["refutation"] = ojson{{"member", print(cert.refutation->b)},
                                {"axiom", print(cert.refutation->projection)},
                                {"theta", bindings_json(cert.refutation->theta)}};
    }
    emit(c, j, out);
    return cert.admissible ? 0 : 1;
}

int cmd_unifiers(const Common& c, const std::string& text, const std::string& ext_text) {
    if (!c.ipc())
        throw ParseError("unifiers is an intuitionistic operation; use `mgu` for "
                         "classical unification");
    Signature sig = c.signature();
    Formula f = parse(text, sig);
    Formula e = parse(ext_text, sig);
    auto set = complete_unifiers_ext(f, e, c.lim);
    ojson j{{"command", "unifiers"},
            {"logic", c.logic},
            {"formula", print(f)},
            {"ext", print(e)}};
    j["verdict"] = set ? "YES" : "NO";
    std::string out = set ? "YES\n" : "NO\n";
    if (set) {
        out += "count: " + std::to_string(set->size()) + "\n";
        ojson ju = ojson::array();
        int i = 0;
        for (const Substitution& th : *set) {
            ++i;
            out += "[" + std::to_string(i) + "]\n";
            for (const auto& [name, body] : binding_rows(th))
                out += name + " := " + body + "\n";
            ju.push_back(bindings_json(th));
        }
        j["unifiers"] = ju;
    }
    emit(c, j, out);
    return set ? 0 : 1;
}

int cmd_model_eval(const Common& c, const std::string& path, const std::string& text) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Signature sig = c.signature();
    KripkeModel k = model_from_json(buf.str(), sig);
    Formula f = parse(text, sig);
    bool yes = k.forces(k.root(), f);
    ojson j{{"command", "model eval"}, {"formula", print(f)}, {"model", path}};
    j["verdict"] = yes ? "YES" : "NO";
    ojson jw = ojson::object();
    std::string out = yes ? "YES\n" : "NO\n";
    for (int w = 0; w < k.size(); ++w) {
        bool fw = k.forces(w, f);
        out += k.name(w) + ": " + (fw ? "yes" : "no") + "\n";
        jw[k.name(w)] = fw;
    }
    j["forcing"] = jw;
    emit(c, j, out);
    return yes ? 0 : 1;
}

int cmd_bank(Common c, const std::string& atoms_text, int depth, bool stats, bool dump) {
    Signature sig = c.signature();
    std::vector<AtomId> atoms;
    std::stringstream ss(atoms_text);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty())
            atoms.push_back(intern_atom(name, sig.sort_of(name)));
    // An explicit request overrides the defensive defaults; the hard caps
    // (max_reps / max_states) still bound the enumeration.
    c.lim.max_bank_level = std::max(c.lim.max_bank_level, depth);
    c.lim.max_bank_atoms = std::max<int>(c.lim.max_bank_atoms,
                                         static_cast<int>(atoms.size()));
    Bank bank = build_bank(atoms, depth, c.lim);
    ojson j{{"command", "bank"},
            {"atoms", atom_list(bank.atoms())},
            {"depth", bank.depth()},
            {"classes", bank.classes()}};
    std::string out;
    out += "atoms: " + atom_list(bank.atoms()) + "\n";
    out += "depth: " + std::to_string(bank.depth()) + "\n";
    out += "classes: " + std::to_string(bank.classes()) + "\n";
    if (stats) {
        std::string per;
        ojson jp = ojson::array();
        for (std::size_t n : bank.stats.classes_per_depth) {
            per += (per.empty() ? "" : " ") + std::to_string(n);
            jp.push_back(n);
        }
        out += "classes per depth: " + per + "\n";
        out += "states: " + std::to_string(bank.stats.states) + "\n";
        out += "transitions: " + std::to_string(bank.stats.transitions) + "\n";
        out += "max rep nodes: " + std::to_string(bank.stats.max_rep_nodes) + "\n";
        j["stats"] = ojson{{"classes_per_depth", jp},
                           {"states", bank.stats.states},
                           {"transitions", bank.stats.transitions},
                           {"max_rep_nodes", bank.stats.max_rep_nodes}};
    }
    if (dump) {
        ojson jr = ojson::array();
        for (ClassId cid = 0; cid < static_cast<ClassId>(bank.classes()); ++cid) {
            KripkeModel canon = canonical_form(bank.reps()[cid]);
            out += "[" + std::to_string(cid) + "] " + model_to_json(canon) + "\n";
            jr.push_back(model_json(canon));
        }
        j["reps"] = jr;
    }
    emit(c, j, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sorted propositional toolkit: classical and intuitionistic "
                 "provability, uniform interpolation, unification, projectivity "
                 "and admissibility"};
    app.require_subcommand(1);

    Common c;
    app.add_option("--logic", c.logic, "logic: cpc or ipc")
        ->check(CLI::IsMember({"cpc", "ipc"}))
        ->capture_default_str();
    app.add_option("--vars", c.vars, "comma-separated variable names");
    app.add_option("--pars", c.pars, "comma-separated parameter names");
    app.add_flag("--json", c.json, "structured output with certificates");
    app.add_option("--bound", [&c](const CLI::results_t& r) {
        c.bound = std::stoi(r[0]);
        return true;
    }, "definability level for uap --logic ipc");
    app.add_option("--max-reps", c.lim.max_reps, "cap on catalogue representatives");
    app.add_option("--max-downsets", c.lim.max_downsets, "cap on enumerated downsets");

    std::string formula, target = "true", ext = "true", gamma = "true";
    std::string conclusions, model_path, bank_atoms;
    int bank_depth = 1;
    bool bank_stats = false, bank_dump = false;

    auto* prove = app.add_subcommand("prove", "decide provability");
    prove->add_option("formula", formula)->required();

    auto* uap = app.add_subcommand("uap", "strongest parameter-only consequence");
    uap->add_option("formula", formula)->required();

    auto* unify = app.add_subcommand("unify", "decide unifiability, print a unifier");
    unify->add_option("formula", formula)->required();

    auto* mgu = app.add_subcommand("mgu", "classical most general unifier modulo --ext");
    mgu->add_option("formula", formula)->required();
    mgu->add_option("--ext", ext, "parameter-only axiom")->capture_default_str();

    auto* project = app.add_subcommand("project", "decide projectivity onto --target");
    project->add_option("formula", formula)->required();
    project->add_option("--target", target, "parameter-only target")->required();

    auto* approx = app.add_subcommand("approx", "projective approximation for --gamma");
    approx->add_option("formula", formula)->required();
    approx->add_option("--gamma", gamma, "semicolon-separated context formulas")
        ->required();

    auto* adm = app.add_subcommand("admissible",
                                   "relativised multi-conclusion admissibility");
    adm->add_option("premise", formula)->required();
    adm->add_option("conclusions", conclusions,
                    "conclusions separated by top-level |")->required();
    adm->add_option("--gamma", gamma, "semicolon-separated context formulas")
        ->capture_default_str();

    auto* unifiers = app.add_subcommand("unifiers",
                                        "complete set of unifiers modulo --ext");
    unifiers->add_option("formula", formula)->required();
    unifiers->add_option("--ext", ext, "parameter-only axiom")->capture_default_str();

    auto* model = app.add_subcommand("model", "model-file operations");
    model->require_subcommand(1);
    auto* meval = model->add_subcommand("eval", "evaluate a formula in a model file");
    meval->add_option("formula", formula)->required();
    meval->add_option("--model", model_path, "model file (JSON)")->required();

    auto* bank = app.add_subcommand("bank", "bounded-bisimulation class catalogue");
    bank->add_option("--atoms", bank_atoms, "comma-separated atom names")->required();
    bank->add_option("--depth", bank_depth, "bisimulation depth")->capture_default_str();
    bank->add_flag("--stats", bank_stats, "print construction statistics");
    bank->add_flag("--dump", bank_dump, "print one canonical representative per class");

    for (CLI::App* sub : {prove, uap, unify, mgu, project, approx, adm, unifiers, bank})
        sub->fallthrough();
    model->fallthrough();
    meval->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*prove)
            return cmd_prove(c, formula);
        if (*uap)
            return cmd_uap(c, formula);
        if (*unify)
            return cmd_unify(c, formula);
        if (*mgu)
            return cmd_mgu(c, formula, ext);
        if (*project)
            return cmd_project(c, formula, target);
        if (*approx)
            return cmd_approx(c, formula, gamma);
        if (*adm)
            return cmd_admissible(c, formula, conclusions, gamma);
        if (*unifiers)
            return cmd_unifiers(c, formula, ext);
        if (*meval)
            return cmd_model_eval(c, model_path, formula);
        if (*bank)
            return cmd_bank(c, bank_atoms, bank_depth, bank_stats, bank_dump);
    } catch (const LimitError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const SignatureExhausted& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 2;
}
