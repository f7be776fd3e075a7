#ifndef PARLOG_FORMULA_HPP
#define PARLOG_FORMULA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parlog/errors.hpp"

namespace parlog {

// Two-sorted propositional language: variables may be substituted,
// parameters are fixed by every substitution.
enum class Sort : std::uint8_t { Var, Par };

using AtomId = std::uint32_t;

// Atoms are interned globally; identity is the (name, sort) pair, so the
// same name may appear with both sorts under different signatures.
AtomId intern_atom(const std::string& name, Sort sort);
const std::string& atom_name(AtomId id);
Sort atom_sort(AtomId id);
inline bool is_var(AtomId id) { return atom_sort(id) == Sort::Var; }

enum class Kind : std::uint8_t { Bot, Atom, And, Or, Imp };

// Hash-consed formula: a cheap value handle into the global node pool.
// Structural equality is id equality.
class Formula {
public:
    Formula() : id_(0) {} // bottom
    explicit Formula(std::uint32_t id) : id_(id) {}

    Kind kind() const;
    Formula lhs() const;   // And/Or/Imp only
    Formula rhs() const;
    AtomId atom() const;   // Atom only
    std::uint32_t id() const { return id_; }

    bool operator==(const Formula& o) const { return id_ == o.id_; }
    bool operator!=(const Formula& o) const { return id_ != o.id_; }
    bool operator<(const Formula& o) const { return id_ < o.id_; }

private:
    std::uint32_t id_;
};

// Constructors.  top/neg/iff are sugar: ~A = A -> false, true = false -> false,
// A <-> B = (A -> B) & (B -> A).
Formula bot();
Formula top();
Formula atom(AtomId id);
Formula atom(const std::string& name, Sort sort);
Formula var(const std::string& name);   // convenience: atom(name, Var)
Formula par(const std::string& name);   // convenience: atom(name, Par)
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula imp(Formula a, Formula b);
Formula neg(Formula a);
Formula iff(Formula a, Formula b);
Formula conj_all(const std::vector<Formula>& fs); // empty -> true
Formula disj_all(const std::vector<Formula>& fs); // empty -> false

bool is_top(Formula f);     // literally false -> false
bool is_neg(Formula f);     // literally A -> false (and not true)

// Nesting degree of implication: atoms and false are 0, & and | take max,
// -> adds one.  Negation and true count as implications.
int complexity(Formula f);

// Occurring atoms, sorted by (name, sort); vars_of/pars_of filter by sort.
std::vector<AtomId> atoms_of(Formula f);
std::vector<AtomId> sort_atoms(std::vector<AtomId> v); // same order, deduplicated
std::vector<AtomId> vars_of(Formula f);
std::vector<AtomId> pars_of(Formula f);
bool is_par_only(Formula f);

// Number of distinct subformulas (DAG size).
std::size_t dag_size(Formula f);

// Sort resolution for parsing.  Explicit assignments win; otherwise the
// default convention applies: names starting with x, y, z, u, v or w are
// variables, everything else is a parameter.  With use_default off, a name
// without an explicit assignment is an error.
struct Signature {
    std::map<std::string, Sort> sorts;
    bool use_default = true;

    Sort sort_of(const std::string& name) const;
    void declare(const std::string& name, Sort sort);
};

// Grammar:  F ::= "false" | "true" | ident | "~" F | F "&" F | F "|" F
//               | F "->" F | F "<->" F | "(" F ")"
// Precedence ~ > & > | > -> > <->; -> associates right, & and | left.
Formula parse(const std::string& text, const Signature& sig = Signature{});

// Deterministic printer with minimal parentheses; inverse of parse up to
// identical ASTs.  false -> false prints as "true", A -> false as "~A".
std::string print(Formula f);

// Sound equivalence-preserving rewrite (both logics): top/bottom absorption,
// idempotence, A -> A, and lattice absorption.  Equivalence, not syntax,
// is the contract for simplified outputs.
Formula simplify(Formula f);

// Replace every occurrence of one atom (either sort) by a formula.
// Internal building block; the Substitution type below only binds variables.
Formula replace_atom(Formula f, AtomId a, Formula by);

// Finite map from variables to formulas; identity elsewhere, and identity
// on every parameter by construction.
class Substitution {
public:
    Substitution() = default;

    // Binding a parameter throws ParseError (sort misuse).
    void set(AtomId v, Formula f);
    void set(const std::string& var_name, Formula f);

    Formula get(AtomId a) const;            // identity if unbound
    bool bound(AtomId a) const;
    const std::vector<std::pair<AtomId, Formula>>& bindings() const { return bind_; }
    bool empty() const { return bind_.empty(); }

    Formula operator()(Formula f) const;    // homomorphic application

private:
    std::vector<std::pair<AtomId, Formula>> bind_; // sorted by AtomId
};

// compose(f, g)(a) = f(g(a)); domain is the union of both domains.
Substitution compose(const Substitution& f, const Substitution& g);

// Ordered formula collection with syntactic deduplication.
class FormulaSet {
public:
    bool insert(Formula f);               // false if already present
    bool contains(Formula f) const;
    const std::vector<Formula>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<Formula> items_;
};

} // namespace parlog

#endif
