#ifndef PARLOG_KRIPKE_HPP
#define PARLOG_KRIPKE_HPP

#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "parlog/bits.hpp"
#include "parlog/formula.hpp"

namespace parlog {

// Finite rooted partial order with persistent valuation.  Reflexive and
// transitive by construction (the builder closes covering pairs); distinct
// mutually-related nodes are rejected.  Models are immutable once built:
// every "mutation" returns a fresh model, and forcing results are cached.
class KripkeModel {
public:
    // nodes: (name, forced atoms).  order: covering pairs (lower, upper) by
    // node index.  The reflexive-transitive closure is computed here.
    KripkeModel(std::vector<std::pair<std::string, std::vector<AtomId>>> nodes,
                const std::vector<std::pair<int, int>>& order, int root,
                std::vector<AtomId> extra_atoms = {});

    int size() const { return static_cast<int>(val_.size()); }
    int root() const { return root_; }
    const std::vector<AtomId>& atoms() const { return atoms_; }
    const std::string& name(int w) const { return names_[w]; }
    const Bits& up(int w) const { return up_[w]; }           // {v : w <= v}, incl w
    std::uint32_t val_mask(int w) const { return val_[w]; }  // over atoms()
    bool holds_atom(int w, AtomId a) const;
    std::vector<AtomId> val_atoms(int w) const;
    std::vector<int> covers(int w) const;                    // immediate successors
    int height() const;                                      // longest chain length - 1

    // Per-node forcing set of f; cached per model.
    const Bits& force_set(Formula f) const;

    bool forces(int w, Formula f) const { return force_set(f).test(w); }
    bool forces_everywhere(Formula f) const;         // all nodes
    bool weakly_forces(Formula f) const;             // all non-root nodes

    bool persistent() const;                         // valuation check

    // Deterministic structural fingerprint of the rooted order + valuation
    // (ignores names); equal keys => isomorphic unfoldings.
    const std::string& structure_key() const;

private:
    std::vector<std::string> names_;
    std::vector<AtomId> atoms_;                      // sorted universe
    std::vector<std::uint32_t> val_;                 // per node, mask over atoms_
    std::vector<Bits> up_;
    int root_;

    struct Cache {
        std::unordered_map<std::uint32_t, Bits> force;
        std::string key;
    };
    std::shared_ptr<Cache> cache_;
};

// --- constructors -----------------------------------------------------------

// Single reflexive node.
KripkeModel point_model(const std::vector<AtomId>& val,
                        const std::vector<AtomId>& universe);

// Generated submodel at w (cone), reindexed with w as root.
KripkeModel generated_submodel(const KripkeModel& k, int w);

// Root revaluation that must agree with the old root valuation on the atoms
// in `fixed`; persistence is re-checked.  Throws ValidationError otherwise.
KripkeModel variant(const KripkeModel& k, const std::vector<AtomId>& new_root_val,
                    const std::vector<AtomId>& fixed);

// All root valuations v with  old∩fixed = v∩fixed  and v within persistence
// bounds, as masks over k.atoms().
std::vector<std::uint32_t> variant_masks(const KripkeModel& k,
                                         const std::vector<AtomId>& fixed);
KripkeModel with_root_mask(const KripkeModel& k, std::uint32_t root_val);

// Image model: same frame, w forces a iff k,w forces theta(a); atom universe
// is k.atoms() united with theta's domain.
KripkeModel subst_image(const KripkeModel& k, const Substitution& theta);

// Disjoint union below a fresh root with empty valuation.  May be empty
// (yields a single bare root).
KripkeModel sum_with_fresh_root(const std::vector<KripkeModel>& members);

// Canonical relabeling: breadth-first order from the root with children
// sorted structurally; node names become w0, w1, ...
KripkeModel canonical_form(const KripkeModel& k);

// Seeded random rooted model over `universe` with 1..max_nodes nodes and a
// persistent valuation.
KripkeModel random_rooted_model(std::mt19937_64& rng,
                                const std::vector<AtomId>& universe,
                                std::size_t max_nodes);

// --- model files -------------------------------------------------------------
// {"root": "w0", "nodes": [{"id": "w0", "val": ["p"]}, ...],
//  "order": [["w0", "w1"], ...]}   order lists covering pairs by node id.

KripkeModel model_from_json(const std::string& text, const Signature& sig = Signature{});
std::string model_to_json(const KripkeModel& k);

} // namespace parlog

#endif
