#ifndef PARLOG_PROJECTIVITY_HPP
#define PARLOG_PROJECTIVITY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "parlog/bank.hpp"
#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"
#include "parlog/limits.hpp"

namespace parlog {

// --- substitution ladder ------------------------------------------------------

// Single ladder step: variables in X map to A -> x, the remaining variables
// of A map to A & x, and every atom outside vars(A) stays fixed.
Substitution ghilardi_step(Formula a, const std::vector<AtomId>& x);

struct GhilardiResult {
    Substitution theta;  // the composed ladder substitution theta_A
    // (variable set X, single-step substitution) in composition order:
    // theta = step[0] after step[1] after ... after step[k].
    std::vector<std::pair<std::vector<AtomId>, Substitution>> per_step;
};

// Composes ghilardi_step over the whole powerset of vars(A), enumerated by
// decreasing cardinality with lexicographic tie-breaks on the sorted
// variable name lists, so supersets always precede their subsets.  The
// result is an A-identity: A |-i theta(a) <-> a for every atom a.
// Raises LimitError when |vars(A)| > lim.max_unifier_vars.
GhilardiResult ghilardi_theta(Formula a, const Limits& lim = Limits{});

// --- projectivity -------------------------------------------------------------

// Decides whether A projects onto the parameter-only formula E: computes the
// ladder substitution theta_A once and accepts iff |-i theta_A(A) <-> E.
// Returns the witness substitution, or nullopt for the NotProjective verdict.
// Requires E free of variables (ValidationError otherwise).
std::optional<Substitution> decide_E_projective(Formula a, Formula e,
                                                const Limits& lim = Limits{});

struct ExtendResult {
    bool extendable;
    // On a negative verdict reached via the model search: a concrete model
    // that weakly forces A and forces E but admits no par-variant forcing A.
    // Absent when the failure is |-i A -> E not holding.
    std::optional<KripkeModel> counterexample;
};

// Bounded semantic oracle for E-extendability, used to cross-validate
// decide_E_projective (it is not the decision procedure).  Checks |-i A -> E,
// then searches for a counterexample model among: class representatives over
// atoms(A) u atoms(E) at the deepest tractable bisimulation level, fresh-root
// sums over subsets of the representatives forcing A (all root valuations),
// and seeded random models of at most `bound` nodes.  Every negative verdict
// is certified by re-checking the counterexample directly.
ExtendResult semantic_extendable(Formula a, Formula e, std::size_t bound = 8,
                                 const Limits& lim = Limits{});

// --- uniform post-interpolation (intuitionistic) -------------------------------

// Strongest parameter-only consequence of A, witnessed over the bank of
// parameter-reduct classes at definability level `bound` (default c(A)+1).
// Postconditions verified before returning: the result is parameter-only and
// |-i A -> result; it implies every parameter-only formula definable at the
// level that follows from A.  Raises LimitError when the underlying banks
// exceed the configured caps.
Formula uap_i(Formula a, std::optional<int> bound = std::nullopt,
              const Limits& lim = Limits{});

struct ParProjResult {
    Substitution theta;  // A-identity with |-i theta(A) <-> projection
    Formula projection;  // parameter-only: the uniform post-interpolant
};

// Projectivity onto the uniform post-interpolant: E := uap_i(A), then
// decide_E_projective(A, E).  nullopt is the NotProjective verdict.
std::optional<ParProjResult> par_projective_i(Formula a, const Limits& lim = Limits{});

// --- projective approximations -------------------------------------------------

struct ApproxConfig {
    std::vector<Formula> gamma;      // the given set, order preserved
    std::vector<Formula> gamma_par;  // parameter-only members, order preserved
    int n = 0;                       // max(c(A), 1 + max c(E) over gamma_par)
    std::vector<AtomId> working_atoms;  // atoms(A) u atoms(gamma_par)
};

struct ApproxEntry {
    Formula b;           // the approximation member
    Formula projection;  // the E in gamma_par it projects onto
    Substitution theta;  // witness: B-identity with |-i theta(B) <-> E
};

struct ApproxResult {
    ApproxConfig config;
    std::vector<ApproxEntry> pi;
};

// Derives the level and atom set used by projective_approx.  ValidationError
// when no member of gamma is parameter-only.
ApproxConfig approx_config(Formula a, const std::vector<Formula>& gamma);

// The projective approximation set Pi of A relative to gamma: every
// definable downward-closed class set S at level n whose witness B satisfies
// |-i B -> A and projects onto some E in gamma_par, together with that E and
// the projection witness.  Downsets with models outside Mod(A) cannot pass
// the implication check, so the enumeration is restricted (soundly and
// completely) to the classes whose downward closure forces A throughout.
// Each kept entry is re-verified with the prover.  Raises LimitError when
// the bank or the enumeration exceeds the configured caps.
ApproxResult projective_approx(Formula a, const std::vector<Formula>& gamma,
                               const Limits& lim = Limits{});

// Complete finite set of unifiers of A in IPC extended by the parameter-only
// axiom E: the witnesses {theta_B : B in Pi} for gamma = {E}.  Every unifier
// of A in IPC+E is less general than one of them.  nullopt is the
// NotUnifiable verdict, returned only after a direct search over a pool of
// parameter-only substitutions confirms that no pooled unifier exists.
std::optional<std::vector<Substitution>> complete_unifiers_ext(
    Formula a, Formula e, const Limits& lim = Limits{});

} // namespace parlog

#endif
