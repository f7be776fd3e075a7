#ifndef PARLOG_BISIM_HPP
#define PARLOG_BISIM_HPP

#include <optional>
#include <unordered_map>
#include <vector>

#include "parlog/kripke.hpp"

namespace parlog {

using ClassId = std::uint32_t;

// Interned bounded-bisimulation classes over a fixed atom set, one table per
// depth.  A depth-0 class is a root valuation mask; a depth-(k+1) class is
// the set of depth-k classes realized at the cones of a rooted model.  Two
// models are depth-n bisimilar exactly when their depth-n classes coincide,
// and the simulation order is member inclusion (valuation superset at depth
// 0): smaller classes force more formulas of complexity up to the depth.
class ClassPool {
public:
    ClassPool(std::vector<AtomId> atoms, int depth);

    const std::vector<AtomId>& atoms() const { return atoms_; }
    int depth() const { return depth_; }

    ClassId intern_mask(std::uint32_t mask);
    ClassId intern_set(int depth, std::vector<ClassId> members); // depth >= 1
    std::optional<ClassId> find_mask(std::uint32_t mask) const;
    std::optional<ClassId> find_set(int depth, const std::vector<ClassId>& members) const;

    std::uint32_t mask_of(ClassId c) const { return masks_[c]; }
    const std::vector<ClassId>& members_of(int depth, ClassId c) const;
    std::size_t count(int depth) const;

    // a <= b at a depth: b's members include a's (valuation superset at 0).
    bool leq(int depth, ClassId a, ClassId b) const;

    // chain[k][w] = depth-k class of the cone at w, for k = 0..depth().
    // Valuations are restricted to atoms(); atoms outside are ignored.
    std::vector<std::vector<ClassId>> chains(const KripkeModel& k);
    // Read-only: nullopt if any cone realizes a class never interned.
    std::optional<std::vector<std::vector<ClassId>>> chains_frozen(const KripkeModel& k) const;

    ClassId class_of(const KripkeModel& k) { return chains(k)[depth_].at(k.root()); }
    std::optional<ClassId> class_of_frozen(const KripkeModel& k) const;

private:
    struct VecHash {
        std::size_t operator()(const std::vector<ClassId>& v) const;
    };

    std::vector<AtomId> atoms_;
    int depth_;
    std::vector<std::uint32_t> masks_;                    // depth-0 classes
    std::unordered_map<std::uint32_t, ClassId> mask_ids_;
    std::vector<std::vector<std::vector<ClassId>>> sets_; // [depth-1][id] -> members
    std::vector<std::unordered_map<std::vector<ClassId>, ClassId, VecHash>> set_ids_;

    std::vector<std::uint32_t> node_masks(const KripkeModel& k) const;
};

} // namespace parlog

#endif
