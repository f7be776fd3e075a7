#include "parlog/admissibility.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "parlog/errors.hpp"
#include "parlog/prover.hpp"

namespace parlog {

AdmissibleCert admissible_gamma(const Rule& rule, const std::vector<Formula>& gamma,
                                const Limits& lim) {
    if (rule.conclusions.empty())
        throw ValidationError("admissibility query needs at least one conclusion");
    AdmissibleCert cert;
    cert.approx = projective_approx(rule.premise, gamma, lim);
    for (const ApproxEntry& entry : cert.approx.pi) {
        Formula hit = bot();
        bool found = false;
        for (Formula d : rule.conclusions)
            if (prove_i(imp(entry.b, d))) { hit = d; found = true; break; }
        if (found) {
            cert.justified.emplace_back(entry, hit);
            continue;
        }
        // The entry refutes the rule under its own projection; re-verify the
        // two prover facts the certificate claims.
        if (!prove_i({entry.projection}, entry.theta(rule.premise)))
            throw InternalError("refuting entry does not derive the premise under its axiom");
        for (Formula d : rule.conclusions)
            if (prove_i({entry.projection}, entry.theta(d)))
                throw InternalError("refuting entry derives a conclusion under its axiom");
        cert.admissible = false;
        cert.refutation = entry;
        cert.justified.clear();
        return cert;
    }
    cert.admissible = true;
    return cert;
}

bool admissible_L(Formula a, Formula b) { return prove_i(imp(a, b)); }

std::optional<WitnessContext> witness_context(Formula a, Formula b) {
    if (prove_i(imp(a, b))) return std::nullopt;
    std::vector<AtomId> vars = vars_of(a);
    std::set<std::string> used;
    for (AtomId at : atoms_of(a)) used.insert(atom_name(at));
    for (AtomId at : atoms_of(b)) used.insert(atom_name(at));
    std::vector<AtomId> fresh;
    for (std::size_t i = 1; fresh.size() < vars.size(); ++i) {
        if (i > vars.size() + 64)
            throw SignatureExhausted("no fresh parameter names for the witness context");
        std::string name = "p" + std::to_string(i);
        if (used.count(name)) continue;
        fresh.push_back(intern_atom(name, Sort::Par));
    }
    Substitution th;
    std::vector<Formula> conjuncts{a};
    for (std::size_t i = 0; i < vars.size(); ++i) {
        th.set(vars[i], atom(fresh[i]));
        conjuncts.push_back(iff(atom(vars[i]), atom(fresh[i])));
    }
    WitnessContext out{conj_all(conjuncts), th};

    // Re-verify the advertised guarantees.
    if (!prove_i(imp(out.e, a)))
        throw InternalError("witness context does not imply the premise");
    if (prove_i(imp(out.e, b)))
        throw InternalError("witness context proves the conclusion");
    Formula target = simplify(th(a));
    if (!is_par_only(target) || !prove_i(iff(simplify(th(out.e)), target)))
        throw InternalError("witness context is not projective onto theta(A)");
    for (AtomId at : atoms_of(out.e))
        if (!prove_i({out.e}, iff(th.get(at), atom(at))))
            throw InternalError("witness substitution is not an E-identity");
    return out;
}

bool preservative(Formula a, Formula b, const std::vector<Formula>& gamma) {
    for (Formula e : gamma)
        if (prove_i(imp(e, a)) && !prove_i(imp(e, b))) return false;
    return true;
}

std::vector<Substitution> substitution_pool(const std::vector<AtomId>& atoms,
                                            const std::vector<AtomId>& vars,
                                            std::size_t size, std::uint64_t seed) {
    std::vector<Formula> bindings{top(), bot()};
    for (AtomId a : atoms) {
        bindings.push_back(atom(a));
        bindings.push_back(neg(atom(a)));
    }
    for (AtomId a : atoms)
        for (AtomId b : atoms)
            if (a != b) {
                bindings.push_back(imp(atom(a), atom(b)));
                bindings.push_back(conj(atom(a), atom(b)));
                bindings.push_back(disj(atom(a), atom(b)));
            }
    std::vector<Substitution> pool;
    if (vars.empty()) {
        pool.emplace_back();
        return pool;
    }
    // All-constant corners first, then seeded samples over the full grid.
    for (Formula corner : {top(), bot()}) {
        Substitution th;
        for (AtomId v : vars) th.set(v, corner);
        pool.push_back(th);
    }
    std::mt19937_64 rng(seed);
    std::set<std::vector<std::size_t>> seen;
    std::uint64_t grid = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) grid *= bindings.size();
    while (pool.size() < size && seen.size() + 2 < grid) {
        std::vector<std::size_t> pick(vars.size());
        for (auto& entry : pick) entry = rng() % bindings.size();
        if (!seen.insert(pick).second) continue;
        Substitution th;
        for (std::size_t i = 0; i < vars.size(); ++i) th.set(vars[i], bindings[pick[i]]);
        pool.push_back(th);
    }
    return pool;
}

std::optional<std::pair<Substitution, Formula>> refuting_substitution(
    const Rule& rule, const std::vector<Formula>& gamma, std::size_t pool_size,
    std::uint64_t seed) {
    std::vector<Formula> gamma_par;
    for (Formula e : gamma)
        if (is_par_only(e)) gamma_par.push_back(e);
    std::vector<AtomId> atoms = atoms_of(rule.premise);
    for (Formula d : rule.conclusions)
        for (AtomId a : atoms_of(d)) atoms.push_back(a);
    for (Formula e : gamma_par)
        for (AtomId a : atoms_of(e)) atoms.push_back(a);
    atoms = sort_atoms(std::move(atoms));
    std::vector<AtomId> vars;
    for (AtomId a : atoms)
        if (atom_sort(a) == Sort::Var) vars.push_back(a);
    for (const Substitution& th : substitution_pool(atoms, vars, pool_size, seed))
        for (Formula e : gamma_par) {
            if (!prove_i({e}, th(rule.premise))) continue;
            bool some = false;
            for (Formula d : rule.conclusions)
                if (prove_i({e}, th(d))) { some = true; break; }
            if (!some) return std::make_pair(th, e);
        }
    return std::nullopt;
}

} // namespace parlog
