#ifndef PARLOG_CLASSICAL_HPP
#define PARLOG_CLASSICAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "parlog/formula.hpp"
#include "parlog/limits.hpp"

namespace parlog {

// Classical validity by bit-parallel truth-table enumeration.
bool taut_c(Formula f);
inline bool entails_c(Formula a, Formula b) { return taut_c(imp(a, b)); }
inline bool equiv_c(Formula a, Formula b) { return taut_c(iff(a, b)); }

// First falsifying assignment (over atoms_of(f), sorted) or nullopt.
std::optional<std::vector<std::pair<AtomId, bool>>> falsify_c(Formula f);

// Strongest parameter-only classical consequence: the disjunction of all
// {false, true} instantiations of the variables, simplified.
Formula uap_c(Formula f, const Limits& lim = {});

// An atom is positive in f when taut_c(f -> f[a := true]).
bool is_positive_c(Formula f, AtomId a);

// {x |-> f & x}: makes x positive in the image while preserving positivity
// of the other atoms, and is an f-identity.
Substitution theta_pos(Formula f, AtomId x);

// One unifier, or nullopt when f is not classically unifiable (equivalently:
// uap_c(f) is not valid).  Built as  (all vars -> true) after the theta_pos
// ladder over the non-positive variables in lexicographic order.
std::optional<Substitution> unifier_c(Formula f, const Limits& lim = {});

// eps(x) = (f & x) | (~f & tau(x)) for each variable x of f: an f-identity
// that unifies f whenever tau does.
Substitution epsilon_unifier(Formula f, const Substitution& tau);

struct ProjectiveC {
    Substitution theta;  // f-identity with taut_c(theta(f) <-> projection)
    Formula projection;  // parameter-only; classically equivalent to uap_c(f)
};

// Every formula is projective over parameters in CPC; returns the witness
// pair.  Verified before returning.
ProjectiveC par_projective_c(Formula f, const Limits& lim = {});

// Most general unifier of f over CPC extended with a parameter-only axiom
// ext; nullopt when no unifier exists.
std::optional<Substitution> mgu_ext_c(Formula f, Formula ext, const Limits& lim = {});

} // namespace parlog

#endif
