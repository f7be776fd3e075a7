#ifndef PARLOG_LIMITS_HPP
#define PARLOG_LIMITS_HPP

#include <cstddef>

namespace parlog {

// Resource caps for the semantic machinery.  The class counts involved in
// model banks grow non-elementarily with atom count and depth, so every
// enumerating operation takes a Limits and fails with LimitError instead
// of diverging.  All fields are overridable (CLI flags / keyword args).
struct Limits {
    int max_bank_atoms = 3;        // atom-set size for bank construction
    int max_bank_level = 2;        // bisimulation depth n for bank construction
    std::size_t max_reps = 20000;  // representatives per bank
    std::size_t max_states = 300000;   // fresh-root union states during bank build
    std::size_t max_downsets = 200000; // enumerated downward-closed sets
    int max_unifier_vars = 4;      // variables handled by the substitution ladder
    std::size_t max_subformulas = 2000000; // prover subformula-universe guard
};

} // namespace parlog

#endif
