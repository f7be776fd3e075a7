#include "parlog/projectivity.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "parlog/errors.hpp"
#include "parlog/prover.hpp"

namespace parlog {

namespace {

// Deepest bank level known to stay desk-scale for the given atom count:
// measured class counts are 5 (1 atom, level 3), 718 (2 atoms, level 2),
// 159 (3 atoms, level 1); one level higher explodes past 3*10^4 classes.
int tractable_level(std::size_t atom_count) {
    if (atom_count <= 1) return 4;
    if (atom_count == 2) return 2;
    return 1;
}

Limits with_level(const Limits& lim, int level) {
    Limits out = lim;
    out.max_bank_level = std::max(out.max_bank_level, level);
    return out;
}

std::vector<AtomId> atoms_union(Formula a, Formula b) {
    std::vector<AtomId> u = atoms_of(a);
    for (AtomId x : atoms_of(b)) u.push_back(x);
    return sort_atoms(std::move(u));
}

std::vector<AtomId> pars_in(const std::vector<AtomId>& atoms) {
    std::vector<AtomId> out;
    for (AtomId a : atoms)
        if (atom_sort(a) == Sort::Par) out.push_back(a);
    return out;
}

// Same frame, valuation restricted to `universe` (sorted).
KripkeModel reduct_to(const KripkeModel& k, const std::vector<AtomId>& universe) {
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    nodes.reserve(static_cast<std::size_t>(k.size()));
    std::set<AtomId> keep(universe.begin(), universe.end());
    for (int w = 0; w < k.size(); ++w) {
        std::vector<AtomId> val;
        for (AtomId a : k.val_atoms(w))
            if (keep.count(a)) val.push_back(a);
        nodes.emplace_back(k.name(w), std::move(val));
    }
    std::vector<std::pair<int, int>> order;
    for (int w = 0; w < k.size(); ++w)
        for (int v : k.covers(w)) order.emplace_back(w, v);
    return KripkeModel(std::move(nodes), order, k.root(), universe);
}


} // namespace

// --- substitution ladder ------------------------------------------------------

Substitution ghilardi_step(Formula a, const std::vector<AtomId>& x) {
    std::vector<AtomId> vars = vars_of(a);
    for (AtomId v : x)
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw ValidationError("ghilardi_step: set member is not a variable of the formula");
    Substitution th;
    for (AtomId v : vars) {
        bool in_x = std::find(x.begin(), x.end(), v) != x.end();
        th.set(v, in_x ? imp(a, atom(v)) : conj(a, atom(v)));
    }
    return th;
}

GhilardiResult ghilardi_theta(Formula a, const Limits& lim) {
    std::vector<AtomId> vars = vars_of(a);
    if (vars.size() > static_cast<std::size_t>(lim.max_unifier_vars))
        throw LimitError("substitution ladder over " + std::to_string(vars.size()) +
                         " variables (cap " + std::to_string(lim.max_unifier_vars) + ")");
    std::size_t k = vars.size();
    std::vector<std::vector<AtomId>> subsets;
    subsets.reserve(1u << k);
    for (std::uint32_t m = 0; m < (1u << k); ++m) {
        std::vector<AtomId> s;
        for (std::size_t i = 0; i < k; ++i)
            if (m & (1u << i)) s.push_back(vars[i]);
        subsets.push_back(std::move(s));
    }
    // Larger sets first so X_i a subset of X_j always puts X_j earlier; ties
    // by the lexicographic order of the (already name-sorted) member lists.
    auto name_less = [](AtomId x, AtomId y) {
        if (atom_name(x) != atom_name(y)) return atom_name(x) < atom_name(y);
        return atom_sort(x) < atom_sort(y);
    };
    std::sort(subsets.begin(), subsets.end(),
              [&](const std::vector<AtomId>& l, const std::vector<AtomId>& r) {
                  if (l.size() != r.size()) return l.size() > r.size();
                  return std::lexicographical_compare(l.begin(), l.end(),
                                                      r.begin(), r.end(), name_less);
              });
    GhilardiResult out;
    for (const auto& s : subsets) {
        Substitution step = ghilardi_step(a, s);
        out.per_step.emplace_back(s, step);
        out.theta = out.per_step.size() == 1 ? step : compose(out.theta, step);
    }
    return out;
}

// --- projectivity -------------------------------------------------------------

std::optional<Substitution> decide_E_projective(Formula a, Formula e, const Limits& lim) {
    if (!is_par_only(e))
        throw ValidationError("projection target contains variables: " + print(e));
    Substitution th = ghilardi_theta(a, lim).theta;
    if (prove_i(iff(simplify(th(a)), e))) return th;
    return std::nullopt;
}

ExtendResult semantic_extendable(Formula a, Formula e, std::size_t bound, const Limits& lim) {
    if (!is_par_only(e))
        throw ValidationError("extendability target contains variables: " + print(e));
    if (!prove_i(imp(a, e))) return {false, std::nullopt};

    std::vector<AtomId> universe = atoms_union(a, e);
    std::vector<AtomId> fixed = pars_in(universe);
    int level = std::min(std::max(complexity(a), complexity(e)) + 1,
                         tractable_level(universe.size()));
    Bank bank = build_bank(universe, level, with_level(lim, level));

    std::optional<KripkeModel> counter;
    auto refuted_by = [&](const KripkeModel& k) {
        if (!k.weakly_forces(a)) return false;
        if (!k.forces(k.root(), e)) return false;
        for (std::uint32_t m : variant_masks(k, fixed))
            if (with_root_mask(k, m).forces(k.root(), a)) return false;
        // Re-check the counterexample from scratch before trusting it.
        KripkeModel w = canonical_form(k);
        if (!w.weakly_forces(a) || !w.forces(w.root(), e))
            throw InternalError("extendability counterexample did not re-verify");
        for (std::uint32_t m : variant_masks(w, fixed))
            if (with_root_mask(w, m).forces(w.root(), a))
                throw InternalError("extendability counterexample admits a variant");
        counter = w;
        return true;
    };

    // Point models and bank representatives.
    for (std::uint32_t m = 0; m < (1u << universe.size()); ++m) {
        std::vector<AtomId> val;
        for (std::size_t b = 0; b < universe.size(); ++b)
            if (m & (1u << b)) val.push_back(universe[b]);
        if (refuted_by(point_model(val, universe))) return {false, counter};
    }
    for (const KripkeModel& r : bank.reps())
        if (refuted_by(r)) return {false, counter};

    // Fresh-root sums over subsets of the representatives forcing A: every
    // model weakly forcing A has proper cones of exactly these classes, so
    // subsets of D with all root valuations sweep the candidate space.
    std::vector<ClassId> d;
    for (ClassId c = 0; c < static_cast<ClassId>(bank.classes()); ++c)
        if (bank.rep_forces(c, a)) d.push_back(c);
    auto check_sum = [&](const std::vector<ClassId>& s) {
        std::vector<KripkeModel> parts;
        parts.reserve(s.size());
        for (ClassId c : s) parts.push_back(bank.reps()[c]);
        KripkeModel base = sum_with_fresh_root(parts);
        for (std::uint32_t m : variant_masks(base, {}))
            if (refuted_by(with_root_mask(base, m))) return true;
        return false;
    };
    for (ClassId c : d)
        if (check_sum({c})) return {false, counter};
    std::mt19937_64 rng(0x5eedf00dULL);
    std::size_t pair_budget = 4000;
    if (d.size() * (d.size() - 1) / 2 <= pair_budget) {
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                if (check_sum({d[i], d[j]})) return {false, counter};
    } else {
        for (std::size_t t = 0; t < pair_budget; ++t) {
            std::size_t i = rng() % d.size(), j = rng() % d.size();
            if (i != j && check_sum({d[i], d[j]})) return {false, counter};
        }
    }
    if (!d.empty()) {
        for (std::size_t t = 0; t < 200 + 100 * universe.size(); ++t) {
            std::size_t sz = 3 + rng() % 4;
            std::set<ClassId> pick;
            while (pick.size() < std::min(sz, d.size()))
                pick.insert(d[rng() % d.size()]);
            if (check_sum(std::vector<ClassId>(pick.begin(), pick.end())))
                return {false, counter};
        }
        if (d.size() <= 24 && check_sum(d)) return {false, counter};
    }

    // Seeded random models as a safety net beyond the structured family.
    for (std::size_t t = 0; t < 100 + 50 * universe.size(); ++t)
        if (refuted_by(random_rooted_model(rng, universe, bound))) return {false, counter};

    return {true, std::nullopt};
}

// --- uniform post-interpolation -------------------------------------------------

Formula uap_i(Formula a, std::optional<int> bound, const Limits& lim) {
    int c = complexity(a);
    int bnd = bound.value_or(c + 1);
    if (bnd < 0) throw ValidationError("uap_i: negative bound");
    std::vector<AtomId> full_atoms = atoms_of(a);
    std::vector<AtomId> par_atoms = pars_in(full_atoms);
    int full_level = std::max(bnd, c);

    Bank full = build_bank(full_atoms, full_level,
                           full_atoms.size() <= 1 ? with_level(lim, full_level) : lim);
    Bank pars = build_bank(par_atoms, bnd,
                           par_atoms.size() <= 1 ? with_level(lim, bnd) : lim);

    std::set<ClassId> t;
    for (ClassId r = 0; r < static_cast<ClassId>(full.classes()); ++r)
        if (full.rep_forces(r, a))
            t.insert(pars.class_of(reduct_to(full.reps()[r], par_atoms)));

    std::vector<ClassId> closure =
        pars.down_closure(std::vector<ClassId>(t.begin(), t.end()));
    Formula res = simplify(pars.formula_for_downset(closure));
    if (!is_par_only(res))
        throw InternalError("uniform post-interpolant contains variables");
    if (!prove_i(imp(a, res)))
        throw InternalError("uniform post-interpolant does not follow from the formula");
    return res;
}

std::optional<ParProjResult> par_projective_i(Formula a, const Limits& lim) {
    Formula e = uap_i(a, std::nullopt, lim);
    std::optional<Substitution> th = decide_E_projective(a, e, lim);
    if (!th) return std::nullopt;
    return ParProjResult{*th, e};
}

// --- projective approximations --------------------------------------------------

ApproxConfig approx_config(Formula a, const std::vector<Formula>& gamma) {
    ApproxConfig cfg;
    cfg.gamma = gamma;
    for (Formula e : gamma)
        if (is_par_only(e)) cfg.gamma_par.push_back(e);
    if (cfg.gamma_par.empty())
        throw ValidationError("projective approximation needs a parameter-only member in gamma");
    cfg.n = complexity(a);
    std::vector<AtomId> atoms = atoms_of(a);
    for (Formula e : cfg.gamma_par) {
        cfg.n = std::max(cfg.n, 1 + complexity(e));
        for (AtomId x : atoms_of(e)) atoms.push_back(x);
    }
    cfg.working_atoms = sort_atoms(std::move(atoms));
    return cfg;
}

ApproxResult projective_approx(Formula a, const std::vector<Formula>& gamma,
                               const Limits& lim) {
    ApproxResult out;
    out.config = approx_config(a, gamma);
    Bank bank = build_bank(out.config.working_atoms, out.config.n,
                           out.config.working_atoms.size() <= 1
                               ? with_level(lim, out.config.n)
                               : lim);

    // Candidate sets live inside Mod(A):  |-i B -> A  for the witness of a
    // downset S holds exactly when S stays within the classes forcing A, so
    // restrict the walk to the classes whose whole downward closure forces A.
    std::vector<char> in_d(bank.classes(), 0);
    for (ClassId c = 0; c < static_cast<ClassId>(bank.classes()); ++c)
        if (bank.rep_forces(c, a)) in_d[c] = 1;
    std::vector<ClassId> core;
    for (ClassId c = 0; c < static_cast<ClassId>(bank.classes()); ++c) {
        if (!in_d[c]) continue;
        bool closed = true;
        for (ClassId b : bank.down_closure({c}))
            if (!in_d[b]) { closed = false; break; }
        if (closed) core.push_back(c);
    }

    // Each visited downset triggers witness synthesis, the substitution
    // ladder and prover re-verification, so count the walk first with cheap
    // steps: oversized enumerations fail fast instead of grinding through
    // expensive callbacks before hitting the same cap.
    bank.count_downsets(core, lim);

    bank.for_each_downset(core, [&](const std::vector<ClassId>& s) {
        Formula b = bank.formula_for_downset(s);
        for (Formula e : out.config.gamma_par) {
            std::optional<Substitution> th = decide_E_projective(b, e, lim);
            if (!th) continue;
            // Re-verify the three defining checks of a kept entry.
            if (!prove_i(imp(b, a)))
                throw InternalError("approximation member fails |- B -> A");
            for (AtomId at : atoms_of(b))
                if (!prove_i({b}, iff(th->get(at), atom(at))))
                    throw InternalError("approximation witness is not a B-identity");
            if (!prove_i(iff(simplify((*th)(b)), e)))
                throw InternalError("approximation witness lost its projection");
            out.pi.push_back({b, e, *th});
            break;
        }
        return true;
    }, lim);
    return out;
}

std::optional<std::vector<Substitution>> complete_unifiers_ext(Formula a, Formula e,
                                                               const Limits& lim) {
    if (!is_par_only(e))
        throw ValidationError("extension axiom contains variables: " + print(e));
    ApproxResult r = projective_approx(a, {e}, lim);
    if (!r.pi.empty()) {
        std::vector<Substitution> out;
        for (const ApproxEntry& entry : r.pi) {
            if (!prove_i({e}, entry.theta(a)))
                throw InternalError("approximation witness does not unify under the axiom");
            out.push_back(entry.theta);
        }
        return out;
    }
    // Empty Pi must mean no unifier at all; confirm against a pool of
    // parameter-only substitutions (if some unifier exists, a parameter-only
    // one does: substitute top for the leftover variables).
    std::vector<AtomId> pool_pars = pars_in(atoms_union(a, e));
    std::vector<Formula> bindings{top(), bot()};
    for (AtomId p : pool_pars) {
        bindings.push_back(atom(p));
        bindings.push_back(neg(atom(p)));
    }
    for (AtomId p : pool_pars)
        for (AtomId q : pool_pars)
            if (p != q) bindings.push_back(imp(atom(p), atom(q)));
    if (pool_pars.size() == 2) {
        bindings.push_back(conj(atom(pool_pars[0]), atom(pool_pars[1])));
        bindings.push_back(disj(atom(pool_pars[0]), atom(pool_pars[1])));
    }
    std::vector<AtomId> vars = vars_of(a);
    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
        Substitution th;
        for (std::size_t i = 0; i < vars.size(); ++i) th.set(vars[i], bindings[idx[i]]);
        if (prove_i({e}, th(a)))
            throw InternalError("empty approximation but a pooled unifier exists");
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (++idx[i] < bindings.size()) break;
            idx[i] = 0;
        }
        if (i == vars.size()) break;
    }
    return std::nullopt;
}

} // namespace parlog
