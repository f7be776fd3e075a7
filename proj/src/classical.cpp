#include "parlog/classical.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace parlog {

namespace {

// Assignment bit patterns for the first six atoms within a 64-assignment block.
constexpr std::uint64_t kPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

struct Evaluator {
    std::vector<std::uint32_t> post;               // distinct subformulas, children first
    std::unordered_map<std::uint32_t, std::uint32_t> slot;
    std::vector<int> atom_index;                   // per slot; -1 for non-atoms
    std::vector<AtomId> atoms;                     // sorted

    explicit Evaluator(Formula f) {
        atoms = atoms_of(f);
        if (atoms.size() > 25)
            throw LimitError("truth table over " + std::to_string(atoms.size()) + " atoms");
        std::unordered_map<AtomId, int> aidx;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            aidx[atoms[i]] = static_cast<int>(i);
        // Iterative postorder over the DAG.
        std::vector<std::pair<std::uint32_t, bool>> stack{{f.id(), false}};
        std::unordered_set<std::uint32_t> done;
        while (!stack.empty()) {
            auto [id, expanded] = stack.back();
            stack.pop_back();
            if (done.count(id))
                continue;
            Formula g(id);
            bool leaf = g.kind() == Kind::Bot || g.kind() == Kind::Atom;
            if (expanded || leaf) {
                done.insert(id);
                slot[id] = static_cast<std::uint32_t>(post.size());
                post.push_back(id);
                atom_index.push_back(g.kind() == Kind::Atom ? aidx[g.atom()] : -1);
            } else {
                stack.push_back({id, true});
                stack.push_back({g.rhs().id(), false});
                stack.push_back({g.lhs().id(), false});
            }
        }
    }

    // Evaluate one 64-assignment block; returns the root's value vector.
    std::uint64_t block(std::uint64_t hi_bits, std::vector<std::uint64_t>& val) const {
        for (std::size_t s = 0; s < post.size(); ++s) {
            Formula g(post[s]);
            switch (g.kind()) {
            case Kind::Bot:
                val[s] = 0;
                break;
            case Kind::Atom: {
                int j = atom_index[s];
                val[s] = j < 6 ? kPattern[j]
                               : ((hi_bits >> (j - 6)) & 1 ? ~0ull : 0ull);
                break;
            }
            case Kind::And:
                val[s] = val[slot.at(g.lhs().id())] & val[slot.at(g.rhs().id())];
                break;
            case Kind::Or:
                val[s] = val[slot.at(g.lhs().id())] | val[slot.at(g.rhs().id())];
                break;
            case Kind::Imp:
                val[s] = ~val[slot.at(g.lhs().id())] | val[slot.at(g.rhs().id())];
                break;
            }
        }
        return val.back();
    }

    std::uint64_t live_mask() const {
        std::size_t k = atoms.size();
        return k >= 6 ? ~0ull : ((1ull << (1u << k)) - 1);
    }

    std::uint64_t num_blocks() const {
        std::size_t k = atoms.size();
        return k > 6 ? (1ull << (k - 6)) : 1;
    }
};

} // namespace

bool taut_c(Formula f) {
    Evaluator ev(f);
    std::vector<std::uint64_t> val(ev.post.size());
    std::uint64_t mask = ev.live_mask();
    for (std::uint64_t b = 0; b < ev.num_blocks(); ++b)
        if ((ev.block(b, val) & mask) != mask)
            return false;
    return true;
}

std::optional<std::vector<std::pair<AtomId, bool>>> falsify_c(Formula f) {
    Evaluator ev(f);
    std::vector<std::uint64_t> val(ev.post.size());
    std::uint64_t mask = ev.live_mask();
    for (std::uint64_t b = 0; b < ev.num_blocks(); ++b) {
        std::uint64_t v = ev.block(b, val) & mask;
        if (v != mask) {
            int bit = 0;
            while ((v >> bit) & 1)
                ++bit;
            std::vector<std::pair<AtomId, bool>> out;
            for (std::size_t j = 0; j < ev.atoms.size(); ++j) {
                bool on = j < 6 ? ((static_cast<std::uint64_t>(bit) >> j) & 1)
                                : ((b >> (j - 6)) & 1);
                out.emplace_back(ev.atoms[j], on);
            }
            return out;
        }
    }
    return std::nullopt;
}

Formula uap_c(Formula f, const Limits&) {
    std::vector<AtomId> vars = vars_of(f);
    if (vars.size() > 12)
        throw LimitError("uap_c over " + std::to_string(vars.size()) + " variables");
    FormulaSet disjuncts;
    for (std::uint32_t m = 0; m < (1u << vars.size()); ++m) {
        Formula inst = f;
        for (std::size_t j = 0; j < vars.size(); ++j)
            inst = replace_atom(inst, vars[j], (m >> j) & 1 ? top() : bot());
        inst = simplify(inst);
        if (is_top(inst))
            return top();
        if (inst != bot())
            disjuncts.insert(inst);
    }
    return simplify(disj_all(disjuncts.items()));
}

bool is_positive_c(Formula f, AtomId a) {
    return taut_c(imp(f, replace_atom(f, a, top())));
}

Substitution theta_pos(Formula f, AtomId x) {
    Substitution s;
    s.set(x, conj(f, atom(x)));
    return s;
}

std::optional<Substitution> unifier_c(Formula f, const Limits& lim) {
    if (!taut_c(uap_c(f, lim)))
        return std::nullopt;
    std::vector<AtomId> vars = vars_of(f); // sorted by name
    Substitution acc;
    Formula b = f;
    for (std::size_t step = 0; step <= vars.size(); ++step) {
        AtomId next = 0;
        bool found = false;
        for (AtomId v : vars) {
            if (!is_positive_c(b, v)) {
                next = v;
                found = true;
                break;
            }
        }
        if (!found)
            break;
        if (step == vars.size())
            throw InternalError("positivity ladder failed to terminate");
        Substitution th = theta_pos(b, next);
        b = th(b);
        acc = compose(th, acc);
    }
    Substitution to_top;
    for (AtomId v : vars)
        to_top.set(v, top());
    acc = compose(to_top, acc);
    if (!taut_c(acc(f)))
        throw InternalError("positivity ladder produced a non-unifier");
    return acc;
}

Substitution epsilon_unifier(Formula f, const Substitution& tau) {
    Substitution eps;
    for (AtomId x : vars_of(f))
        eps.set(x, disj(conj(f, atom(x)), conj(neg(f), tau.get(x))));
    return eps;
}

ProjectiveC par_projective_c(Formula f, const Limits& lim) {
    Formula e = uap_c(f, lim);
    Formula b = imp(e, f);
    std::optional<Substitution> tau = unifier_c(b, lim);
    if (!tau)
        throw InternalError("uap(f) -> f must be classically unifiable");
    ProjectiveC out{epsilon_unifier(b, *tau), e};
    if (!equiv_c(out.theta(f), e))
        throw InternalError("projective witness is not an e-fier");
    for (AtomId a : vars_of(f))
        if (!taut_c(imp(f, iff(out.theta.get(a), atom(a)))))
            throw InternalError("projective witness is not an f-identity");
    return out;
}

std::optional<Substitution> mgu_ext_c(Formula f, Formula ext, const Limits& lim) {
    if (!is_par_only(ext))
        throw ParseError("extension axiom must be parameter-only");
    Formula b = imp(ext, f);
    std::optional<Substitution> tau = unifier_c(b, lim);
    if (!tau)
        return std::nullopt;
    Substitution theta = epsilon_unifier(b, *tau);
    if (!taut_c(imp(ext, theta(f))))
        throw InternalError("mgu candidate does not unify under the extension");
    return theta;
}

} // namespace parlog
