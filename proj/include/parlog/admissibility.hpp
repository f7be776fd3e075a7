#ifndef PARLOG_ADMISSIBILITY_HPP
#define PARLOG_ADMISSIBILITY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "parlog/formula.hpp"
#include "parlog/limits.hpp"
#include "parlog/projectivity.hpp"

namespace parlog {

// Multi-conclusion rule premise / Delta.
struct Rule {
    Formula premise;
    std::vector<Formula> conclusions;  // nonempty for admissibility queries
};

struct AdmissibleCert {
    bool admissible = false;
    // On true: for every approximation entry, the first conclusion D with
    // |-i B -> D (re-provable obligations).
    std::vector<std::pair<ApproxEntry, Formula>> justified;
    // On false: an entry whose B implies no conclusion; then E |-i
    // theta_B(premise) while E |/-i theta_B(D) for every D, an explicit
    // refutation of the rule under the axiom E (both facts re-verified).
    std::optional<ApproxEntry> refutation;
    ApproxResult approx;  // the underlying projective approximation
};

// Relativised multi-conclusion admissibility over finite gamma, decided via
// the projective approximation of the premise: admissible exactly when every
// member B implies some conclusion.  LimitError propagates from the
// approximation machinery.
AdmissibleCert admissible_gamma(const Rule& rule, const std::vector<Formula>& gamma,
                                const Limits& lim = Limits{});

// Admissibility relative to the class of all parameter-only contexts
// collapses to derivability: A |~ B iff |-i A -> B.
bool admissible_L(Formula a, Formula b);

struct WitnessContext {
    Formula e;          // A and (x_i <-> p_i) over fresh parameters
    Substitution theta; // x_i |-> p_i
};

// When |/-i A -> B: a context E with |-i E -> A and |/-i E -> B such that E
// projects onto theta(A) via theta (all three facts re-verified before
// returning).  nullopt when |-i A -> B.  SignatureExhausted when no fresh
// parameter names are available.
std::optional<WitnessContext> witness_context(Formula a, Formula b);

// gamma-preservativity by the direct definition: every E in gamma proving A
// also proves B.
bool preservative(Formula a, Formula b, const std::vector<Formula>& gamma);

// Deterministic pool of substitutions mapping `vars` to formulas over
// `atoms` of complexity at most one; used by the refutation half-oracle and
// the unifier-coverage tests.
std::vector<Substitution> substitution_pool(const std::vector<AtomId>& atoms,
                                            const std::vector<AtomId>& vars,
                                            std::size_t size, std::uint64_t seed);

// One-sided check: searches the pool for a substitution s and axiom E in
// gamma_par with E |-i s(premise) but E |/-i s(D) for every conclusion —
// a concrete refutation of admissibility.  nullopt when the pool survives.
std::optional<std::pair<Substitution, Formula>> refuting_substitution(
    const Rule& rule, const std::vector<Formula>& gamma, std::size_t pool_size = 200,
    std::uint64_t seed = 7);

} // namespace parlog

#endif
