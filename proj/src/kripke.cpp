#include "parlog/kripke.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

namespace parlog {

KripkeModel::KripkeModel(std::vector<std::pair<std::string, std::vector<AtomId>>> nodes,
                         const std::vector<std::pair<int, int>>& order, int root,
                         std::vector<AtomId> extra_atoms)
    : root_(root), cache_(std::make_shared<Cache>()) {
    int n = static_cast<int>(nodes.size());
    if (n == 0)
        throw ValidationError("model has no nodes");
    if (root < 0 || root >= n)
        throw ValidationError("root index out of range");

    std::vector<AtomId> univ = std::move(extra_atoms);
    for (auto& [name, atoms] : nodes)
        univ.insert(univ.end(), atoms.begin(), atoms.end());
    atoms_ = sort_atoms(std::move(univ));
    if (atoms_.size() > 32)
        throw ValidationError("more than 32 atoms in model");

    for (auto& [name, atoms] : nodes) {
        names_.push_back(name);
        std::uint32_t m = 0;
        for (AtomId a : atoms) {
            auto it = std::find(atoms_.begin(), atoms_.end(), a);
            m |= 1u << (it - atoms_.begin());
        }
        val_.push_back(m);
    }

    up_.assign(n, Bits(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        up_[i].set(i);
    for (auto [a, b] : order) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ValidationError("order pair index out of range");
        up_[a].set(b);
    }
    // Transitive closure to fixpoint.
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            Bits next = up_[i];
            up_[i].for_each([&](std::size_t j) { next |= up_[j]; });
            if (next != up_[i]) {
                up_[i] = next;
                changed = true;
            }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (up_[i].test(j) && up_[j].test(i))
                throw ValidationError("cycle outside reflexivity: '" + names_[i] +
                                      "' and '" + names_[j] + "'");
    if (up_[root].count() != static_cast<std::size_t>(n))
        throw ValidationError("not rooted: '" + names_[root] +
                              "' does not reach every node");
    for (int i = 0; i < n; ++i) {
        Bits bad(static_cast<std::size_t>(n));
        up_[i].for_each([&](std::size_t j) {
            if (val_[i] & ~val_[j])
                bad.set(j);
        });
        if (bad.any()) {
            int j = -1;
            bad.for_each([&](std::size_t x) { if (j < 0) j = static_cast<int>(x); });
            throw ValidationError("persistence violation between '" + names_[i] +
                                  "' and '" + names_[j] + "'");
        }
    }
}

bool KripkeModel::holds_atom(int w, AtomId a) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end())
        return false;
    return (val_[w] >> (it - atoms_.begin())) & 1;
}

std::vector<AtomId> KripkeModel::val_atoms(int w) const {
    std::vector<AtomId> out;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if ((val_[w] >> i) & 1)
            out.push_back(atoms_[i]);
    return out;
}

std::vector<int> KripkeModel::covers(int w) const {
    std::vector<int> out;
    up_[w].for_each([&](std::size_t v) {
        if (static_cast<int>(v) == w)
            return;
        bool direct = true;
        up_[w].for_each([&](std::size_t u) {
            if (u != static_cast<std::size_t>(w) && u != v && up_[u].test(v))
                direct = false;
        });
        if (direct)
            out.push_back(static_cast<int>(v));
    });
    return out;
}

int KripkeModel::height() const {
    std::vector<int> h(val_.size(), -1);
    // Longest chain above each node; process by decreasing cone size.
    std::vector<int> idx(val_.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return up_[a].count() < up_[b].count(); });
    for (int w : idx) {
        int best = 0;
        up_[w].for_each([&](std::size_t v) {
            if (static_cast<int>(v) != w)
                best = std::max(best, h[v] + 1);
        });
        h[w] = best;
    }
    return h[root_];
}

const Bits& KripkeModel::force_set(Formula f) const {
    auto it = cache_->force.find(f.id());
    if (it != cache_->force.end())
        return it->second;
    std::size_t n = val_.size();
    Bits out(n);
    switch (f.kind()) {
    case Kind::Bot:
        break;
    case Kind::Atom: {
        auto pos = std::find(atoms_.begin(), atoms_.end(), f.atom());
        if (pos != atoms_.end()) {
            std::size_t bit = static_cast<std::size_t>(pos - atoms_.begin());
            for (std::size_t w = 0; w < n; ++w)
                if ((val_[w] >> bit) & 1)
                    out.set(w);
        }
        break;
    }
    case Kind::And:
        out = force_set(f.lhs()) & force_set(f.rhs());
        break;
    case Kind::Or:
        out = force_set(f.lhs()) | force_set(f.rhs());
        break;
    case Kind::Imp: {
        Bits bad = force_set(f.lhs()) & ~force_set(f.rhs());
        for (std::size_t w = 0; w < n; ++w)
            if (!up_[w].intersects(bad))
                out.set(w);
        break;
    }
    }
    return cache_->force.emplace(f.id(), std::move(out)).first->second;
}

bool KripkeModel::forces_everywhere(Formula f) const {
    return force_set(f).count() == val_.size();
}

bool KripkeModel::weakly_forces(Formula f) const {
    const Bits& fs = force_set(f);
    for (std::size_t w = 0; w < val_.size(); ++w)
        if (static_cast<int>(w) != root_ && !fs.test(w))
            return false;
    return true;
}

bool KripkeModel::persistent() const {
    for (std::size_t w = 0; w < val_.size(); ++w) {
        bool ok = true;
        up_[w].for_each([&](std::size_t v) {
            if (val_[w] & ~val_[v])
                ok = false;
        });
        if (!ok)
            return false;
    }
    return true;
}

const std::string& KripkeModel::structure_key() const {
    if (!cache_->key.empty())
        return cache_->key;
    std::vector<std::string> memo(val_.size());
    // Nodes in decreasing cone order are processed after their successors.
    std::vector<int> idx(val_.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return up_[a].count() < up_[b].count(); });
    char buf[16];
    for (int w : idx) {
        std::vector<std::string> kids;
        for (int v : covers(w))
            kids.push_back(memo[v]);
        std::sort(kids.begin(), kids.end());
        std::snprintf(buf, sizeof buf, "%x", val_[w]);
        std::string k = "(";
        k += buf;
        for (auto& s : kids)
            k += s;
        k += ")";
        memo[w] = std::move(k);
    }
    cache_->key = memo[root_];
    return cache_->key;
}

// ---------------------------------------------------------------------------

KripkeModel point_model(const std::vector<AtomId>& val, const std::vector<AtomId>& universe) {
    return KripkeModel({{"w0", val}}, {}, 0, universe);
}

KripkeModel generated_submodel(const KripkeModel& k, int w) {
    std::vector<int> keep;
    k.up(w).for_each([&](std::size_t v) { keep.push_back(static_cast<int>(v)); });
    std::vector<int> where(k.size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i)
        where[keep[i]] = static_cast<int>(i);
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    for (int v : keep)
        nodes.emplace_back(k.name(v), k.val_atoms(v));
    std::vector<std::pair<int, int>> order;
    for (int v : keep)
        k.up(v).for_each([&](std::size_t u) {
            if (where[u] >= 0)
                order.emplace_back(where[v], where[u]);
        });
    return KripkeModel(std::move(nodes), order, where[w], k.atoms());
}

std::vector<std::uint32_t> variant_masks(const KripkeModel& k, const std::vector<AtomId>& fixed) {
    std::uint32_t fixed_mask = 0;
    for (AtomId a : fixed) {
        auto it = std::find(k.atoms().begin(), k.atoms().end(), a);
        if (it != k.atoms().end())
            fixed_mask |= 1u << (it - k.atoms().begin());
    }
    std::uint32_t bound = ~0u;
    k.up(k.root()).for_each([&](std::size_t v) {
        if (static_cast<int>(v) != k.root())
            bound &= k.val_mask(static_cast<int>(v));
    });
    if (k.atoms().size() < 32)
        bound &= (1u << k.atoms().size()) - 1;
    std::uint32_t base = k.val_mask(k.root()) & fixed_mask;
    std::uint32_t free = bound & ~fixed_mask;
    // Enumerate subsets of `free` (standard subset-walk), overlaid on base.
    std::vector<std::uint32_t> out;
    std::uint32_t s = free;
    for (;;) {
        out.push_back(base | s);
        if (s == 0)
            break;
        s = (s - 1) & free;
    }
    std::sort(out.begin(), out.end());
    return out;
}

KripkeModel with_root_mask(const KripkeModel& k, std::uint32_t root_val) {
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    for (int w = 0; w < k.size(); ++w) {
        std::vector<AtomId> va;
        std::uint32_t m = w == k.root() ? root_val : k.val_mask(w);
        for (std::size_t i = 0; i < k.atoms().size(); ++i)
            if ((m >> i) & 1)
                va.push_back(k.atoms()[i]);
        nodes.emplace_back(k.name(w), va);
    }
    std::vector<std::pair<int, int>> order;
    for (int w = 0; w < k.size(); ++w)
        k.up(w).for_each([&](std::size_t v) { order.emplace_back(w, static_cast<int>(v)); });
    return KripkeModel(std::move(nodes), order, k.root(), k.atoms());
}

KripkeModel variant(const KripkeModel& k, const std::vector<AtomId>& new_root_val,
                    const std::vector<AtomId>& fixed) {
    std::uint32_t nv = 0;
    for (AtomId a : new_root_val) {
        auto it = std::find(k.atoms().begin(), k.atoms().end(), a);
        if (it == k.atoms().end())
            throw ValidationError("variant valuation uses atom '" + atom_name(a) +
                                  "' outside the model universe");
        nv |= 1u << (it - k.atoms().begin());
    }
    std::uint32_t fixed_mask = 0;
    for (AtomId a : fixed) {
        auto it = std::find(k.atoms().begin(), k.atoms().end(), a);
        if (it != k.atoms().end())
            fixed_mask |= 1u << (it - k.atoms().begin());
    }
    if ((nv & fixed_mask) != (k.val_mask(k.root()) & fixed_mask))
        throw ValidationError("variant disagrees with the root on a fixed atom");
    return with_root_mask(k, nv); // persistence re-checked by the constructor
}

KripkeModel subst_image(const KripkeModel& k, const Substitution& theta) {
    std::vector<AtomId> univ = k.atoms();
    for (const auto& [v, t] : theta.bindings())
        univ.push_back(v);
    univ = sort_atoms(std::move(univ));
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes(k.size());
    for (int w = 0; w < k.size(); ++w)
        nodes[w].first = k.name(w);
    for (AtomId a : univ) {
        const Bits& fs = k.force_set(theta.get(a));
        for (int w = 0; w < k.size(); ++w)
            if (fs.test(w))
                nodes[w].second.push_back(a);
    }
    std::vector<std::pair<int, int>> order;
    for (int w = 0; w < k.size(); ++w)
        k.up(w).for_each([&](std::size_t v) { order.emplace_back(w, static_cast<int>(v)); });
    return KripkeModel(std::move(nodes), order, k.root(), univ);
}

KripkeModel sum_with_fresh_root(const std::vector<KripkeModel>& members) {
    std::vector<AtomId> univ;
    for (const auto& m : members)
        univ.insert(univ.end(), m.atoms().begin(), m.atoms().end());
    univ = sort_atoms(std::move(univ));
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    nodes.emplace_back("root", std::vector<AtomId>{});
    std::vector<std::pair<int, int>> order;
    int base = 1;
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
        const KripkeModel& m = members[mi];
        for (int w = 0; w < m.size(); ++w) {
            nodes.emplace_back("m" + std::to_string(mi) + "_" + m.name(w), m.val_atoms(w));
            order.emplace_back(0, base + w);
        }
        for (int w = 0; w < m.size(); ++w)
            m.up(w).for_each(
                [&](std::size_t v) { order.emplace_back(base + w, base + static_cast<int>(v)); });
        base += m.size();
    }
    return KripkeModel(std::move(nodes), order, 0, univ);
}

KripkeModel canonical_form(const KripkeModel& k) {
    // Structural key per node, then BFS with structurally sorted children.
    std::vector<std::string> key(k.size());
    std::vector<int> idx(k.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return k.up(a).count() < k.up(b).count(); });
    char buf[16];
    for (int w : idx) {
        std::vector<std::string> kids;
        for (int v : k.covers(w))
            kids.push_back(key[v]);
        std::sort(kids.begin(), kids.end());
        std::snprintf(buf, sizeof buf, "%x", k.val_mask(w));
        key[w] = "(";
        key[w] += buf;
        for (auto& s : kids)
            key[w] += s;
        key[w] += ")";
    }
    std::vector<int> bfs_order;
    std::vector<bool> seen(k.size(), false);
    std::queue<int> q;
    q.push(k.root());
    seen[k.root()] = true;
    while (!q.empty()) {
        int w = q.front();
        q.pop();
        bfs_order.push_back(w);
        std::vector<int> kids = k.covers(w);
        std::sort(kids.begin(), kids.end(), [&](int a, int b) {
            if (key[a] != key[b])
                return key[a] < key[b];
            return a < b;
        });
        for (int v : kids)
            if (!seen[v]) {
                seen[v] = true;
                q.push(v);
            }
    }
    std::vector<int> where(k.size(), -1);
    for (std::size_t i = 0; i < bfs_order.size(); ++i)
        where[bfs_order[i]] = static_cast<int>(i);
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    for (std::size_t i = 0; i < bfs_order.size(); ++i)
        nodes.emplace_back("w" + std::to_string(i), k.val_atoms(bfs_order[i]));
    std::vector<std::pair<int, int>> order;
    for (int w = 0; w < k.size(); ++w)
        k.up(w).for_each(
            [&](std::size_t v) { order.emplace_back(where[w], where[static_cast<int>(v)]); });
    return KripkeModel(std::move(nodes), order, 0, k.atoms());
}

// ---------------------------------------------------------------------------

KripkeModel model_from_json(const std::string& text, const Signature& sig) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("root") || !j.contains("nodes"))
        throw ValidationError("model file needs 'root' and 'nodes'");
    std::unordered_map<std::string, int> index;
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    for (const auto& nj : j["nodes"]) {
        if (!nj.contains("id"))
            throw ValidationError("node without 'id'");
        std::string id = nj["id"].get<std::string>();
        if (index.count(id))
            throw ValidationError("duplicate node id '" + id + "'");
        index[id] = static_cast<int>(nodes.size());
        std::vector<AtomId> val;
        if (nj.contains("val"))
            for (const auto& aj : nj["val"]) {
                std::string name = aj.get<std::string>();
                val.push_back(intern_atom(name, sig.sort_of(name)));
            }
        nodes.emplace_back(id, val);
    }
    auto lookup = [&](const std::string& id) {
        auto it = index.find(id);
        if (it == index.end())
            throw ValidationError("unknown node id '" + id + "'");
        return it->second;
    };
    std::vector<std::pair<int, int>> order;
    if (j.contains("order"))
        for (const auto& pj : j["order"]) {
            if (!pj.is_array() || pj.size() != 2)
                throw ValidationError("order entries must be pairs");
            order.emplace_back(lookup(pj[0].get<std::string>()),
                               lookup(pj[1].get<std::string>()));
        }
    int root = lookup(j["root"].get<std::string>());
    return KripkeModel(std::move(nodes), order, root);
}

std::string model_to_json(const KripkeModel& k) {
    nlohmann::json j;
    j["root"] = k.name(k.root());
    j["nodes"] = nlohmann::json::array();
    for (int w = 0; w < k.size(); ++w) {
        nlohmann::json nj;
        nj["id"] = k.name(w);
        nj["val"] = nlohmann::json::array();
        for (AtomId a : k.val_atoms(w))
            nj["val"].push_back(atom_name(a));
        j["nodes"].push_back(nj);
    }
    j["order"] = nlohmann::json::array();
    for (int w = 0; w < k.size(); ++w)
        for (int v : k.covers(w))
            j["order"].push_back({k.name(w), k.name(v)});
    return j.dump(2);
}


KripkeModel random_rooted_model(std::mt19937_64& rng,
                                const std::vector<AtomId>& universe,
                                std::size_t max_nodes) {
    std::size_t n = 1 + rng() % std::max<std::size_t>(max_nodes, 1);
    std::vector<std::pair<int, int>> order;
    std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) le[i][i] = 1;
    for (std::size_t j = 1; j < n; ++j) {
        order.emplace_back(0, static_cast<int>(j));
        le[0][j] = 1;
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % 100 < 35) {
                order.emplace_back(static_cast<int>(i), static_cast<int>(j));
                le[i][j] = 1;
            }
    // close the order so the valuation below can respect every path
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (le[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (le[k][j]) le[i][j] = 1;
    std::uint32_t full = universe.size() >= 32 ? 0xFFFFFFFFu
                                               : ((1u << universe.size()) - 1);
    std::vector<std::uint32_t> val(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        std::uint32_t v = static_cast<std::uint32_t>(rng()) & full;
        for (std::size_t i = 0; i < j; ++i)
            if (le[i][j]) v |= val[i];
        val[j] = v;
    }
    std::vector<std::pair<std::string, std::vector<AtomId>>> nodes;
    for (std::size_t w = 0; w < n; ++w) {
        std::vector<AtomId> atoms;
        for (std::size_t b = 0; b < universe.size(); ++b)
            if (val[w] & (1u << b)) atoms.push_back(universe[b]);
        nodes.emplace_back("w" + std::to_string(w), std::move(atoms));
    }
    return KripkeModel(std::move(nodes), order, 0, universe);
}

} // namespace parlog
