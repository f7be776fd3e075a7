#include "parlog/prover.hpp"

#include <random>

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "parlog/classical.hpp"
#include "parlog/errors.hpp"

namespace parlog {

namespace {

// Sorted-unique formula vectors as sequent sides.
using FVec = std::vector<Formula>;

bool member(const FVec& v, Formula f) {
    return std::binary_search(v.begin(), v.end(), f);
}

bool insert(FVec& v, Formula f) {
    auto it = std::lower_bound(v.begin(), v.end(), f);
    if (it != v.end() && *it == f)
        return false;
    v.insert(it, f);
    return true;
}

bool meets(const FVec& a, const FVec& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return true;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return false;
}

// Countermodel skeleton: tree of saturated nodes.
struct Tree {
    std::vector<AtomId> atoms;
    std::vector<std::shared_ptr<const Tree>> kids;
};
using TreeP = std::shared_ptr<const Tree>;

std::string seq_key(const FVec& g, const FVec& d) {
    std::string k;
    k.reserve((g.size() + d.size() + 1) * 4);
    auto put = [&](std::uint32_t x) {
        k.push_back(static_cast<char>(x));
        k.push_back(static_cast<char>(x >> 8));
        k.push_back(static_cast<char>(x >> 16));
        k.push_back(static_cast<char>(x >> 24));
    };
    for (Formula f : g)
        put(f.id());
    put(0xFFFFFFFFu);
    for (Formula f : d)
        put(f.id());
    return k;
}

struct Search {
    // Presence with a tree = refutable; presence with null = provable.
    std::unordered_map<std::string, TreeP> memo;
    std::uint64_t steps = 0;
    static constexpr std::uint64_t kMaxSteps = 50'000'000;

    TreeP refute(FVec g, FVec d);
};

thread_local Search g_search;

TreeP Search::refute(FVec g, FVec d) {
    if (++steps > kMaxSteps)
        throw LimitError("proof search exceeded its step budget");
    if (memo.size() > 1'500'000)
        memo.clear(); // hard memory ceiling; only costs recomputation

    // Giant sequents almost never recur; caching their keys is what hurts.
    bool do_memo = g.size() + d.size() <= 128;
    std::string key;
    if (do_memo) {
        key = seq_key(g, d);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
    }

    // Saturation with invertible rules.
    for (bool changed = true; changed;) {
        changed = false;
        FVec add_g, add_d;
        for (Formula f : g) {
            switch (f.kind()) {
            case Kind::Bot:
                if (do_memo)
                    memo.emplace(std::move(key), nullptr);
                return nullptr;
            case Kind::And:
                if (!member(g, f.lhs()))
                    insert(add_g, f.lhs());
                if (!member(g, f.rhs()))
                    insert(add_g, f.rhs());
                break;
            case Kind::Imp:
                if (member(g, f.lhs()) && !member(g, f.rhs()))
                    insert(add_g, f.rhs());
                break;
            default:
                break;
            }
        }
        for (Formula f : d) {
            switch (f.kind()) {
            case Kind::Or:
                if (!member(d, f.lhs()))
                    insert(add_d, f.lhs());
                if (!member(d, f.rhs()))
                    insert(add_d, f.rhs());
                break;
            case Kind::Imp:
                if (member(g, f.lhs()) && !member(d, f.rhs()))
                    insert(add_d, f.rhs());
                break;
            default:
                break;
            }
        }
        for (Formula f : add_g)
            changed |= insert(g, f);
        for (Formula f : add_d)
            changed |= insert(d, f);
        if (meets(g, d)) {
            if (do_memo)
                memo.emplace(std::move(key), nullptr);
            return nullptr;
        }
    }

    auto remember = [&](TreeP t) {
        if (do_memo)
            memo[key] = t;
        return t;
    };

    // First applicable branching rule, in deterministic (id) order.
    for (Formula f : g) {
        if (f.kind() == Kind::Or && !member(g, f.lhs()) && !member(g, f.rhs())) {
            FVec g1 = g;
            insert(g1, f.lhs());
            if (TreeP t = refute(std::move(g1), d))
                return remember(t);
            FVec g2 = std::move(g);
            insert(g2, f.rhs());
            return remember(refute(std::move(g2), std::move(d)));
        }
    }
    for (Formula f : d) {
        if (f.kind() == Kind::And && !member(d, f.lhs()) && !member(d, f.rhs())) {
            FVec d1 = d;
            insert(d1, f.lhs());
            if (TreeP t = refute(g, std::move(d1)))
                return remember(t);
            FVec d2 = std::move(d);
            insert(d2, f.rhs());
            return remember(refute(std::move(g), std::move(d2)));
        }
    }
    for (Formula f : g) {
        if (f.kind() != Kind::Imp || is_top(f))
            continue;
        // With the antecedent present, modus ponens above already fired.
        if (member(g, f.lhs()) || member(g, f.rhs()) || member(d, f.lhs()))
            continue;
        if (f.rhs() != bot()) {
            FVec g1 = g;
            insert(g1, f.rhs());
            if (TreeP t = refute(std::move(g1), d))
                return remember(t);
        }
        FVec d2 = std::move(d);
        insert(d2, f.lhs());
        return remember(refute(std::move(g), std::move(d2)));
    }

    // Saturated node.  Every unwitnessed implication on the right needs a
    // strictly larger world forcing its antecedent and refuting its
    // consequent; gamma persists there.
    auto node = std::make_shared<Tree>();
    for (Formula f : g)
        if (f.kind() == Kind::Atom)
            node->atoms.push_back(f.atom());
    for (Formula f : d) {
        if (f.kind() != Kind::Imp || member(g, f.lhs()))
            continue;
        FVec g1 = g;
        insert(g1, f.lhs());
        TreeP kid = refute(std::move(g1), FVec{f.rhs()});
        if (!kid)
            return remember(nullptr);
        node->kids.push_back(kid);
    }
    return remember(node);
}

int tree_nodes(std::vector<std::pair<std::string, std::vector<AtomId>>>& nodes,
               std::vector<std::pair<int, int>>& order, const TreeP& t) {
    int me = static_cast<int>(nodes.size());
    nodes.emplace_back("n" + std::to_string(me), t->atoms);
    for (const TreeP& kid : t->kids) {
        int c = tree_nodes(nodes, order, kid);
        order.emplace_back(me, c);
    }
    return me;
}

Formula sequent_formula(const std::vector<Formula>& gamma, Formula f) {
    return gamma.empty() ? f : imp(conj_all(gamma), f);
}

// Countermodel hunt on an exhaustive family of tiny frames plus random
// models, run before full proof search on large inputs.  Any model forcing
// every premise but not the goal settles refutability exactly, so this only
// short-circuits searches whose answer it has already witnessed.
bool kripke_refuted(const std::vector<Formula>& gamma, Formula f) {
    std::vector<AtomId> univ = atoms_of(sequent_formula(gamma, f));
    std::size_t m = univ.size();
    if (m > 5)
        return false;
    auto mask_val = [&](std::uint32_t mask) {
        std::vector<AtomId> val;
        for (std::size_t b = 0; b < m; ++b)
            if (mask & (1u << b))
                val.push_back(univ[b]);
        return val;
    };
    auto refutes = [&](const KripkeModel& k) {
        for (Formula h : gamma)
            if (!k.forces(k.root(), h))
                return false;
        return !k.forces(k.root(), f);
    };
    std::uint32_t full = (1u << m) - 1;
    for (std::uint32_t a = 0; a <= full; ++a)
        if (refutes(point_model(mask_val(a), univ)))
            return true;
    for (std::uint32_t b = 0; b <= full; ++b)
        for (std::uint32_t a = b;; a = (a - 1) & b) { // subsets of b
            if (a != b &&
                refutes(KripkeModel({{"r", mask_val(a)}, {"t", mask_val(b)}},
                                    {{0, 1}}, 0, univ)))
                return true;
            if (a == 0)
                break;
        }
    if (m <= 4) {
        for (std::uint32_t c1 = 0; c1 <= full; ++c1)
            for (std::uint32_t c2 = c1 + 1; c2 <= full; ++c2)
                for (std::uint32_t a = c1 & c2;; a = (a - 1) & (c1 & c2)) {
                    if (refutes(KripkeModel({{"r", mask_val(a)},
                                             {"b", mask_val(c1)},
                                             {"c", mask_val(c2)}},
                                            {{0, 1}, {0, 2}}, 0, univ)))
                        return true;
                    if (a == 0)
                        break;
                }
        for (std::uint32_t c = 0; c <= full; ++c)
            for (std::uint32_t b = c;; b = (b - 1) & c) {
                if (b != c)
                    for (std::uint32_t a = b;; a = (a - 1) & b) {
                        if (a != b &&
                            refutes(KripkeModel({{"r", mask_val(a)},
                                                 {"m", mask_val(b)},
                                                 {"t", mask_val(c)}},
                                                {{0, 1}, {1, 2}}, 0, univ)))
                            return true;
                        if (a == 0)
                            break;
                    }
                if (b == 0)
                    break;
            }
    }
    std::mt19937_64 rng(0xabcdef12ULL);
    for (int t = 0; t < 160; ++t)
        if (refutes(random_rooted_model(rng, univ, 8)))
            return true;
    return false;
}

} // namespace

static void reset_budget() {
    g_search.steps = 0;
    if (g_search.memo.size() > 1'000'000)
        g_search.memo.clear();
}

bool prove_i(const std::vector<Formula>& gamma, Formula f) {
    Formula whole = sequent_formula(gamma, f);
    if (!taut_c(whole))
        return false;
    reset_budget();
    if (kripke_refuted(gamma, f))
        return false;
    FVec g;
    for (Formula h : gamma)
        insert(g, h);
    return g_search.refute(std::move(g), FVec{f}) == nullptr;
}

bool prove_i(Formula f) {
    return prove_i({}, f);
}

bool equiv_i(Formula a, Formula b) {
    if (a == b)
        return true;
    return prove_i({a}, b) && prove_i({b}, a);
}

std::optional<KripkeModel> countermodel_i(const std::vector<Formula>& gamma, Formula f) {
    std::vector<AtomId> univ = atoms_of(sequent_formula(gamma, f));

    reset_budget();
    TreeP t;
    if (auto assign = falsify_c(sequent_formula(gamma, f))) {
        auto leaf = std::make_shared<Tree>();
        for (auto [a, value] : *assign)
            if (value)
                leaf->atoms.push_back(a);
        t = leaf;
    } else {
        FVec g;
        for (Formula h : gamma)
            insert(g, h);
        t = g_search.refute(std::move(g), FVec{f});
        if (!t)
            return std::nullopt;
    }

    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    std::vector<std::pair<int, int>> order;
    tree_nodes(nodes, order, t);
    KripkeModel k(std::move(nodes), order, 0, univ);
    for (Formula h : gamma)
        if (!k.forces(k.root(), h))
            throw InternalError("countermodel fails to force a premise");
    if (k.forces(k.root(), f))
        throw InternalError("countermodel forces the conclusion");
    return k;
}

std::optional<KripkeModel> countermodel_i(Formula f) {
    return countermodel_i({}, f);
}

void clear_prover_cache() {
    g_search.memo.clear();
    g_search.steps = 0;
}

std::size_t prover_cache_size() {
    return g_search.memo.size();
}

} // namespace parlog
