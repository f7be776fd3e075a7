#ifndef PARLOG_BANK_HPP
#define PARLOG_BANK_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "parlog/bisim.hpp"
#include "parlog/limits.hpp"

namespace parlog {

struct BankStats {
    std::vector<std::size_t> classes_per_depth; // realized classes, depth 0..n
    std::size_t states = 0;                     // distinct cone-class unions explored
    std::size_t transitions = 0;                // state extensions processed
    std::size_t max_rep_nodes = 0;
};

// Complete catalogue of the depth-n bisimulation classes of finite rooted
// models over a fixed atom set, with one representative model per class.
// Built by a fixpoint search over fresh-root sums of known representatives:
// the class of such a sum depends only on the union of the members' cone
// classes and the new root valuation, so states are those unions.  Every
// class of every finite rooted model over the atom set is reached.
class Bank {
public:
    const std::vector<AtomId>& atoms() const { return pool_->atoms(); }
    int depth() const { return pool_->depth(); }
    const ClassPool& pool() const { return *pool_; }

    // One representative per depth-n class; index == class id.
    const std::vector<KripkeModel>& reps() const { return reps_; }
    std::size_t classes() const { return reps_.size(); }

    bool leq(ClassId a, ClassId b) const; // depth-n simulation order
    ClassId class_of(const KripkeModel& k) const;        // InternalError if unknown
    std::vector<ClassId> cone_classes(const KripkeModel& k) const; // sorted, unique

    // Characteristic formulas over atoms(), complexity <= depth():
    //   K forces char_pos(c)  iff  class(K) <= c,
    //   K forces char_neg(c)  iff  not (c <= class(K)).
    Formula char_pos(ClassId c) const;
    Formula char_neg(ClassId c) const;

    // Downward closed sets in the depth-n order.
    std::vector<ClassId> down_closure(std::vector<ClassId> s) const;
    bool is_downset(const std::vector<ClassId>& s) const;

    // Formula whose models are exactly the downward closure of s.  Prefers
    // the smallest formula found by a bounded connective enumeration over
    // atoms() (complexity capped at depth(), so agreement on every
    // representative settles equivalence); falls back to the disjunction of
    // char_pos over maximal elements.  Either way the result is verified
    // against every representative (InternalError on mismatch).
    Formula formula_for_downset(const std::vector<ClassId>& s) const;

    // Depth-n classes precomputed as forcing sets over the representatives.
    bool rep_forces(ClassId c, Formula f) const;            // at the root
    bool rep_forces_everywhere(ClassId c, Formula f) const;

    // Every downward closed subset of `universe` (itself any class set),
    // largest-first within the search order; stop early by returning false.
    // Enumerating more than lim.max_downsets sets raises LimitError.
    void for_each_downset(const std::vector<ClassId>& universe,
                          const std::function<bool(const std::vector<ClassId>&)>& fn,
                          const Limits& lim = {}) const;
    std::size_t count_downsets(const std::vector<ClassId>& universe,
                               const Limits& lim = {}) const;

    BankStats stats;

private:
    friend Bank build_bank(std::vector<AtomId>, int, const Limits&);
    std::shared_ptr<ClassPool> pool_;
    std::vector<KripkeModel> reps_;
    mutable std::map<std::pair<int, ClassId>, Formula> pos_, neg_;
    Formula pos(int depth, ClassId c) const;
    Formula neg(int depth, ClassId c) const;
    struct Synth;
    mutable std::shared_ptr<Synth> synth_;
    std::optional<Formula> small_formula(const std::vector<ClassId>& closed) const;
};

// Enumerates all depth-`depth` classes over `atoms` (sorted, deduplicated
// internally).  Respects lim.max_bank_atoms / max_bank_level / max_reps /
// max_states; raises LimitError when exceeded.
Bank build_bank(std::vector<AtomId> atoms, int depth, const Limits& lim = {});

// Pseudorandom rooted models over the bank's atoms must all land in known
// classes; InternalError otherwise.  Returns the number of models checked.
std::size_t validate_bank(const Bank& bank, std::size_t trials, unsigned seed);

} // namespace parlog

#endif
