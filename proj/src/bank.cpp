#include "parlog/bank.hpp"

#include <algorithm>
#include <set>
#include <random>

#include "parlog/errors.hpp"

namespace parlog {

namespace {

constexpr std::uint64_t kTransitionBudget = 50'000'000;

struct IdVecHash {
    std::size_t operator()(const std::vector<ClassId>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (ClassId c : v) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::vector<ClassId> sorted_union(const std::vector<ClassId>& a, const std::vector<ClassId>& b) {
    std::vector<ClassId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<AtomId> mask_to_atoms(std::uint32_t mask, const std::vector<AtomId>& atoms) {
    std::vector<AtomId> out;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if ((mask >> i) & 1)
            out.push_back(atoms[i]);
    return out;
}

} // namespace

// --- construction ------------------------------------------------------------

Bank build_bank(std::vector<AtomId> atoms, int depth, const Limits& lim) {
    atoms = sort_atoms(std::move(atoms));
    if (static_cast<int>(atoms.size()) > lim.max_bank_atoms)
        throw LimitError("bank over " + std::to_string(atoms.size()) +
                         " atoms (cap " + std::to_string(lim.max_bank_atoms) + ")");
    if (depth > lim.max_bank_level)
        throw LimitError("bank at depth " + std::to_string(depth) + " (cap " +
                         std::to_string(lim.max_bank_level) + ")");

    Bank bank;
    bank.pool_ = std::make_shared<ClassPool>(atoms, depth);
    ClassPool& pool = *bank.pool_;
    const std::uint32_t full =
        atoms.size() >= 32 ? ~0u : (1u << atoms.size()) - 1;

    if (depth == 0) {
        for (std::uint32_t v = 0; v <= full && (v != 0 || full + 1 != 0); ++v) {
            pool.intern_mask(v);
            bank.reps_.push_back(point_model(mask_to_atoms(v, atoms), atoms));
            if (v == full)
                break;
        }
        bank.stats.classes_per_depth = {pool.count(0)};
        bank.stats.max_rep_nodes = 1;
        return bank;
    }

    struct State {
        std::vector<ClassId> u; // union of members' depth-(n-1) cone classes
        int parent;
        ClassId added;      // depth-n class whose coneset was unioned in
        std::size_t cursor; // next class id to union in
    };
    std::vector<State> states;
    std::unordered_map<std::vector<ClassId>, int, IdVecHash> state_ids;
    std::uint64_t transitions = 0;

    auto member_classes = [&](int si) {
        std::vector<ClassId> ms;
        for (int s = si; states[s].parent >= 0; s = states[s].parent)
            ms.push_back(states[s].added);
        std::reverse(ms.begin(), ms.end());
        return ms;
    };

    auto materialize = [&](int si, std::uint32_t v) {
        std::vector<ClassId> ms = member_classes(si);
        // Drop members whose cone classes are covered by the rest.
        for (std::size_t i = 0; i < ms.size();) {
            std::vector<ClassId> rest;
            for (std::size_t j = 0; j < ms.size(); ++j)
                if (j != i)
                    rest = sorted_union(rest, pool.members_of(depth, ms[j]));
            if (rest == states[si].u)
                ms.erase(ms.begin() + i);
            else
                ++i;
        }
        if (ms.empty())
            return point_model(mask_to_atoms(v, atoms), atoms);
        std::vector<KripkeModel> parts;
        for (ClassId c : ms)
            parts.push_back(bank.reps_[c]);
        return canonical_form(with_root_mask(sum_with_fresh_root(parts), v));
    };

    auto process_state = [&](int si) {
        // Derive the lower-level unions and the persistence bound.
        std::vector<std::vector<ClassId>> lv(depth);
        lv[depth - 1] = states[si].u;
        for (int l = depth - 1; l >= 1; --l)
            for (ClassId c : lv[l])
                lv[l - 1] = sorted_union(lv[l - 1], pool.members_of(l, c));
        std::uint32_t bound = full;
        for (ClassId c : lv[0])
            bound &= pool.mask_of(c);

        // Every compatible root valuation, in increasing mask order.
        std::vector<std::uint32_t> vals;
        std::uint32_t s = bound;
        for (;;) {
            vals.push_back(s);
            if (s == 0)
                break;
            s = (s - 1) & bound;
        }
        std::sort(vals.begin(), vals.end());

        for (std::uint32_t v : vals) {
            ClassId f = pool.intern_mask(v);
            for (int l = 1; l <= depth; ++l)
                f = pool.intern_set(l, sorted_union(lv[l - 1], {f}));
            if (f != bank.reps_.size())
                continue; // known class
            KripkeModel rep = materialize(si, v);
            if (auto got = pool.class_of_frozen(rep); !got || *got != f)
                throw InternalError("bank witness realizes the wrong class");
            bank.stats.max_rep_nodes =
                std::max(bank.stats.max_rep_nodes, static_cast<std::size_t>(rep.size()));
            bank.reps_.push_back(std::move(rep));
            if (bank.reps_.size() > lim.max_reps)
                throw LimitError("bank exceeds " + std::to_string(lim.max_reps) +
                                 " classes");
        }
    };

    states.push_back({{}, -1, 0, 0});
    state_ids.emplace(std::vector<ClassId>{}, 0);
    process_state(0);

    // Each (state, class) pair is tried exactly once, via per-state cursors;
    // passes repeat until no cursor can advance.
    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t si = 0; si < states.size(); ++si) {
            while (states[si].cursor < bank.reps_.size()) {
                ClassId c = static_cast<ClassId>(states[si].cursor++);
                moved = true;
                if (++transitions > kTransitionBudget)
                    throw LimitError("bank construction exceeded its transition budget");
                std::vector<ClassId> u2 =
                    sorted_union(states[si].u, pool.members_of(depth, c));
                if (u2 == states[si].u || state_ids.count(u2))
                    continue;
                int ni = static_cast<int>(states.size());
                states.push_back({u2, static_cast<int>(si), c, 0});
                state_ids.emplace(std::move(u2), ni);
                if (states.size() > lim.max_states)
                    throw LimitError("bank exceeds " + std::to_string(lim.max_states) +
                                     " union states");
                process_state(ni);
            }
        }
    }

    for (int l = 0; l <= depth; ++l)
        bank.stats.classes_per_depth.push_back(pool.count(l));
    bank.stats.states = states.size();
    bank.stats.transitions = transitions;
    return bank;
}

// --- queries ------------------------------------------------------------------

bool Bank::leq(ClassId a, ClassId b) const {
    return pool_->leq(pool_->depth(), a, b);
}

ClassId Bank::class_of(const KripkeModel& k) const {
    auto c = pool_->class_of_frozen(k);
    if (!c)
        throw InternalError("model realizes a class outside the bank");
    return *c;
}

std::vector<ClassId> Bank::cone_classes(const KripkeModel& k) const {
    auto nf = pool_->chains_frozen(k);
    if (!nf)
        throw InternalError("model realizes a class outside the bank");
    std::vector<ClassId> out = (*nf)[pool_->depth()];
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Formula Bank::pos(int depth, ClassId c) const {
    auto key = std::make_pair(depth, c);
    if (auto it = pos_.find(key); it != pos_.end())
        return it->second;
    Formula out;
    if (depth == 0) {
        out = conj_all([&] {
            std::vector<Formula> fs;
            for (AtomId a : mask_to_atoms(pool_->mask_of(c), pool_->atoms()))
                fs.push_back(atom(a));
            return fs;
        }());
    } else {
        const auto& mem = pool_->members_of(depth, c);
        std::vector<Formula> fs;
        for (ClassId l = 0; l < pool_->count(depth - 1); ++l)
            if (!std::binary_search(mem.begin(), mem.end(), l))
                fs.push_back(imp(pos(depth - 1, l), neg(depth - 1, l)));
        out = conj_all(fs);
    }
    out = simplify(out);
    pos_.emplace(key, out);
    return out;
}

Formula Bank::neg(int depth, ClassId c) const {
    auto key = std::make_pair(depth, c);
    if (auto it = neg_.find(key); it != neg_.end())
        return it->second;
    Formula out;
    if (depth == 0) {
        std::vector<Formula> fs;
        for (AtomId a : mask_to_atoms(~pool_->mask_of(c), pool_->atoms()))
            fs.push_back(atom(a));
        out = disj_all(fs);
    } else {
        std::vector<Formula> fs;
        for (ClassId l : pool_->members_of(depth, c))
            fs.push_back(imp(pos(depth - 1, l), neg(depth - 1, l)));
        out = disj_all(fs);
    }
    out = simplify(out);
    neg_.emplace(key, out);
    return out;
}

Formula Bank::char_pos(ClassId c) const {
    return pos(pool_->depth(), c);
}

Formula Bank::char_neg(ClassId c) const {
    return neg(pool_->depth(), c);
}

std::vector<ClassId> Bank::down_closure(std::vector<ClassId> s) const {
    std::vector<ClassId> out;
    for (ClassId b = 0; b < classes(); ++b)
        for (ClassId a : s)
            if (leq(b, a)) {
                out.push_back(b);
                break;
            }
    return out;
}

bool Bank::is_downset(const std::vector<ClassId>& s) const {
    std::vector<ClassId> t = s;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return down_closure(t) == t;
}

// Bounded formula enumeration over atoms(), deduplicated by the forcing
// profile across every world of every representative.  Complexity is capped
// at depth(), so formulas with equal profiles are equivalent: forcing of a
// complexity-<=n formula at any world depends only on the depth-n class of
// the cone there, and every such class has a representative here.
struct Bank::Synth {
    using Prof = std::vector<std::uint64_t>;
    std::size_t worlds = 0;
    std::vector<std::vector<std::uint32_t>> succ; // global world -> ups
    std::vector<std::uint32_t> root_of;           // class -> global world
    struct Entry {
        Formula f;
        int ec; // implication nesting, constants count 0
        Prof prof;
    };
    std::vector<Entry> pool;
    std::map<Prof, Formula> by_root; // root-slice profile -> smallest formula

    static bool bit(const Prof& p, std::size_t i) {
        return (p[i >> 6] >> (i & 63)) & 1;
    }
    static void set(Prof& p, std::size_t i) { p[i >> 6] |= 1ull << (i & 63); }

    Prof root_slice(const Prof& p) const {
        Prof r((root_of.size() + 63) / 64, 0);
        for (std::size_t c = 0; c < root_of.size(); ++c)
            if (bit(p, root_of[c]))
                set(r, c);
        return r;
    }
};

// Breadth knobs: pair rounds over the smallest pool entries.  Deterministic;
// misses just fall back to the characteristic disjunction.
namespace {
constexpr int synth_rounds = 3;
constexpr std::size_t synth_breadth = 120;
constexpr std::size_t synth_pool_cap = 4000;
} // namespace

std::optional<Formula> Bank::small_formula(const std::vector<ClassId>& closed) const {
    if (!synth_) {
        auto s = std::make_shared<Synth>();
        for (const KripkeModel& k : reps_) {
            std::uint32_t base = static_cast<std::uint32_t>(s->worlds);
            s->root_of.push_back(base + static_cast<std::uint32_t>(k.root()));
            for (int w = 0; w < k.size(); ++w) {
                std::vector<std::uint32_t> ups;
                for (int v = 0; v < k.size(); ++v)
                    if (k.up(w).test(v))
                        ups.push_back(base + static_cast<std::uint32_t>(v));
                s->succ.push_back(std::move(ups));
            }
            s->worlds += static_cast<std::size_t>(k.size());
        }
        std::size_t words = (s->worlds + 63) / 64;
        s->pool.reserve(synth_pool_cap); // pushes below never reallocate
        std::set<Synth::Prof> seen;
        auto push = [&](Formula f, int ec, Synth::Prof prof) {
            if (s->pool.size() >= synth_pool_cap || !seen.insert(prof).second)
                return;
            Synth::Prof root = s->root_slice(prof);
            s->by_root.emplace(std::move(root), f);
            s->pool.push_back({f, ec, std::move(prof)});
        };
        push(bot(), 0, Synth::Prof(words, 0));
        {
            Synth::Prof ones(words, ~0ull);
            if (s->worlds % 64)
                ones.back() = (1ull << (s->worlds % 64)) - 1;
            push(top(), 0, std::move(ones));
        }
        for (AtomId a : atoms()) {
            Synth::Prof prof(words, 0);
            std::size_t g = 0;
            for (const KripkeModel& k : reps_)
                for (int w = 0; w < k.size(); ++w, ++g)
                    if (k.holds_atom(w, a))
                        Synth::set(prof, g);
            push(atom(a), 0, std::move(prof));
        }
        int depth_cap = depth();
        for (int round = 0; round < synth_rounds; ++round) {
            std::size_t n = std::min(s->pool.size(), synth_breadth);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const auto& fi = s->pool[i];
                    const auto& fj = s->pool[j];
                    if (j > i) { // symmetric ops once per pair
                        Synth::Prof meet(words), join(words);
                        for (std::size_t k = 0; k < words; ++k) {
                            meet[k] = fi.prof[k] & fj.prof[k];
                            join[k] = fi.prof[k] | fj.prof[k];
                        }
                        push(conj(fi.f, fj.f), std::max(fi.ec, fj.ec), std::move(meet));
                        push(disj(fi.f, fj.f), std::max(fi.ec, fj.ec), std::move(join));
                    }
                    int ec = std::max(fi.ec, fj.ec) + 1;
                    if (i != j && ec <= depth_cap) {
                        Synth::Prof prof(words, 0);
                        for (std::size_t w = 0; w < s->worlds; ++w) {
                            bool ok = true;
                            for (std::uint32_t v : s->succ[w])
                                if (Synth::bit(fi.prof, v) && !Synth::bit(fj.prof, v)) {
                                    ok = false;
                                    break;
                                }
                            if (ok)
                                Synth::set(prof, w);
                        }
                        push(imp(fi.f, fj.f), ec, std::move(prof));
                    }
                }
        }
        synth_ = std::move(s);
    }
    Synth::Prof key((classes() + 63) / 64, 0);
    for (ClassId c : closed)
        Synth::set(key, c);
    auto it = synth_->by_root.find(key);
    if (it == synth_->by_root.end())
        return std::nullopt;
    return it->second;
}

Formula Bank::formula_for_downset(const std::vector<ClassId>& s) const {
    std::vector<ClassId> cl = down_closure(s);
    Formula out;
    if (auto small = small_formula(cl)) {
        out = *small;
    } else {
        std::vector<Formula> parts;
        for (ClassId a : cl) {
            bool maximal = true;
            for (ClassId b : cl)
                if (b != a && leq(a, b))
                    maximal = false;
            if (maximal)
                parts.push_back(char_pos(a));
        }
        out = simplify(disj_all(parts));
    }
    for (ClassId c = 0; c < classes(); ++c) {
        bool in = std::binary_search(cl.begin(), cl.end(), c);
        if (reps_[c].forces(reps_[c].root(), out) != in)
            throw InternalError("downset formula disagrees with its class set");
    }
    return out;
}

bool Bank::rep_forces(ClassId c, Formula f) const {
    return reps_[c].forces(reps_[c].root(), f);
}

bool Bank::rep_forces_everywhere(ClassId c, Formula f) const {
    return reps_[c].forces_everywhere(f);
}

// --- downset enumeration -------------------------------------------------------

namespace {

struct DownsetWalk {
    const Bank& bank;
    std::vector<ClassId> order;               // linear extension, minimal first
    std::vector<std::vector<int>> preds;      // indices into order
    std::vector<char> chosen;
    const std::function<bool(const std::vector<ClassId>&)>* fn;
    std::size_t cap;
    std::size_t emitted = 0;
    bool stopped = false;

    DownsetWalk(const Bank& b, std::vector<ClassId> universe, std::size_t cap)
        : bank(b), order(std::move(universe)), cap(cap) {
        std::sort(order.begin(), order.end());
        order.erase(std::unique(order.begin(), order.end()), order.end());
        // Members grow strictly along the simulation order, so member count
        // (valuation popcount at depth 0, reversed) is a linear extension.
        std::stable_sort(order.begin(), order.end(), [&](ClassId a, ClassId b) {
            return weight(a) < weight(b);
        });
        preds.resize(order.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (bank.leq(order[j], order[i]))
                    preds[i].push_back(static_cast<int>(j));
        chosen.assign(order.size(), 0);
    }

    std::size_t weight(ClassId c) const {
        if (bank.depth() == 0)
            return 32 - static_cast<std::size_t>(
                            __builtin_popcount(bank.pool().mask_of(c)));
        return bank.pool().members_of(bank.depth(), c).size();
    }

    void emit() {
        if (++emitted > cap)
            throw LimitError("downset enumeration exceeded " + std::to_string(cap));
        if (!fn)
            return;
        std::vector<ClassId> s;
        for (std::size_t i = 0; i < order.size(); ++i)
            if (chosen[i])
                s.push_back(order[i]);
        std::sort(s.begin(), s.end());
        if (!(*fn)(s))
            stopped = true;
    }

    void walk(std::size_t i) {
        if (stopped)
            return;
        if (i == order.size()) {
            emit();
            return;
        }
        bool can = true;
        for (int j : preds[i])
            if (!chosen[j])
                can = false;
        if (can) {
            chosen[i] = 1;
            walk(i + 1);
            chosen[i] = 0;
        }
        if (!stopped)
            walk(i + 1);
    }
};

} // namespace

void Bank::for_each_downset(const std::vector<ClassId>& universe,
                            const std::function<bool(const std::vector<ClassId>&)>& fn,
                            const Limits& lim) const {
    DownsetWalk w(*this, universe, lim.max_downsets);
    w.fn = &fn;
    w.walk(0);
}

std::size_t Bank::count_downsets(const std::vector<ClassId>& universe,
                                 const Limits& lim) const {
    DownsetWalk w(*this, universe, lim.max_downsets);
    w.fn = nullptr;
    w.walk(0);
    return w.emitted;
}

// --- validation ----------------------------------------------------------------

std::size_t validate_bank(const Bank& bank, std::size_t trials, unsigned seed) {
    std::mt19937 rng(seed);
    const auto& atoms = bank.atoms();
    const std::uint32_t full =
        atoms.size() >= 32 ? ~0u : (1u << atoms.size()) - 1;
    for (std::size_t t = 0; t < trials; ++t) {
        std::uniform_int_distribution<int> nd(1, 7);
        int n = nd(rng);
        std::vector<std::uint32_t> val(n);
        std::uniform_int_distribution<std::uint32_t> vd(0, full);
        for (auto& v : val)
            v = vd(rng);
        std::vector<std::pair<int, int>> edges;
        std::bernoulli_distribution ed(0.35);
        for (int i = 1; i < n; ++i)
            edges.emplace_back(0, i);
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (ed(rng))
                    edges.emplace_back(i, j);
        // Persistence: push valuations upward in index order (edges ascend).
        for (int src = 0; src < n; ++src)
            for (auto [a, b] : edges)
                if (a == src)
                    val[b] |= val[a];
        std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
        for (int i = 0; i < n; ++i)
            nodes.emplace_back("w" + std::to_string(i), mask_to_atoms(val[i], atoms));
        KripkeModel k(std::move(nodes), edges, 0, atoms);
        if (!bank.pool().class_of_frozen(k))
            throw InternalError("random model realizes a class missing from the bank");
    }
    return trials;
}

} // namespace parlog
