#ifndef PARLOG_PROVER_HPP
#define PARLOG_PROVER_HPP

#include <optional>
#include <vector>

#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"

namespace parlog {

// Intuitionistic provability: gamma |- f.  Decided by a multi-succedent
// refutation search with memoized sequents; a classical prefilter rejects
// sequents that already fail on a single node.
bool prove_i(const std::vector<Formula>& gamma, Formula f);
bool prove_i(Formula f);
bool equiv_i(Formula a, Formula b);

// A finite rooted model whose root forces every member of gamma and does
// not force f; nullopt when gamma |- f.  The returned model is re-checked
// by actual forcing before it is handed out.
std::optional<KripkeModel> countermodel_i(const std::vector<Formula>& gamma, Formula f);
std::optional<KripkeModel> countermodel_i(Formula f);

// The sequent memo is shared across calls; these manage it.
void clear_prover_cache();
std::size_t prover_cache_size();

} // namespace parlog

#endif
