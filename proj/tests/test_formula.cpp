#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "parlog/classical.hpp"
#include "parlog/formula.hpp"

using namespace parlog;

namespace {

Formula rand_formula(std::mt19937_64& rng, const std::vector<Formula>& leaves, int depth) {
    if (depth == 0 || (rng() & 7) == 0)
        return leaves[rng() % leaves.size()];
    switch (rng() % 4) {
    case 0: return conj(rand_formula(rng, leaves, depth - 1), rand_formula(rng, leaves, depth - 1));
    case 1: return disj(rand_formula(rng, leaves, depth - 1), rand_formula(rng, leaves, depth - 1));
    case 2: return imp(rand_formula(rng, leaves, depth - 1), rand_formula(rng, leaves, depth - 1));
    default: return neg(rand_formula(rng, leaves, depth - 1));
    }
}

Substitution rand_subst(std::mt19937_64& rng, const std::vector<AtomId>& vars,
                        const std::vector<Formula>& leaves) {
    Substitution s;
    for (AtomId v : vars)
        if (rng() & 1)
            s.set(v, rand_formula(rng, leaves, 2));
    return s;
}

} // namespace

TEST_CASE("parse desugars and respects the default sort convention") {
    Formula f = parse("x & p");
    CHECK(f.kind() == Kind::And);
    CHECK(f.lhs() == var("x"));
    CHECK(f.rhs() == par("p"));

    Formula n = parse("~x");
    CHECK(n.kind() == Kind::Imp);
    CHECK(n.lhs() == var("x"));
    CHECK(n.rhs() == bot());

    Formula b = parse("x <-> y");
    CHECK(b == conj(imp(var("x"), var("y")), imp(var("y"), var("x"))));

    CHECK(parse("true") == imp(bot(), bot()));
    CHECK(parse("u | v | w | z") == disj(disj(disj(var("u"), var("v")), var("w")), var("z")));
    CHECK(parse("a -> b -> c") == imp(par("a"), imp(par("b"), par("c"))));
    CHECK(parse("~x & p") == conj(neg(var("x")), par("p")));
}

TEST_CASE("explicit signatures override the default convention") {
    Signature sig;
    sig.declare("x", Sort::Par);
    sig.declare("q", Sort::Var);
    Formula f = parse("x & q", sig);
    CHECK(f.lhs() == par("x"));
    CHECK(f.rhs() == var("q"));

    Signature strict;
    strict.use_default = false;
    strict.declare("x", Sort::Var);
    CHECK_THROWS_AS(parse("x & mystery", strict), ParseError);
}

TEST_CASE("parse rejects malformed input with a position") {
    CHECK_THROWS_AS(parse("x &"), ParseError);
    CHECK_THROWS_AS(parse("(x | y"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x y"), ParseError);
}

TEST_CASE("print/parse round-trips on random formulas") {
    std::mt19937_64 rng(2024);
    std::vector<Formula> leaves{var("x"), var("y"), par("p"), par("q"), bot(), top()};
    for (int i = 0; i < 500; ++i) {
        Formula f = rand_formula(rng, leaves, 4);
        CHECK(parse(print(f)) == f);
    }
    CHECK(print(top()) == "true");
    CHECK(print(neg(var("x"))) == "~x");
}

TEST_CASE("complexity follows the nested-implication recursion") {
    CHECK(complexity(conj(par("p"), var("x"))) == 0);
    CHECK(complexity(disj(var("x"), neg(var("x")))) == 1);
    CHECK(complexity(imp(imp(var("x"), var("y")), var("x"))) == 2);
    CHECK(complexity(bot()) == 0);
    CHECK(complexity(top()) == 1); // true is false -> false
    CHECK(complexity(parse("(x -> y) & (y -> x)")) == 1);
}

TEST_CASE("substitution application is homomorphic and fixes parameters") {
    Substitution th;
    th.set("x", par("p"));
    CHECK(th(conj(var("x"), par("q"))) == conj(par("p"), par("q")));
    CHECK(Substitution{}(parse("x -> y")) == parse("x -> y"));

    Substitution tx;
    tx.set("x", conj(var("x"), par("p")));
    CHECK(tx(imp(var("x"), var("x"))) ==
          imp(conj(var("x"), par("p")), conj(var("x"), par("p"))));

    Substitution bad;
    CHECK_THROWS_AS(bad.set(intern_atom("p", Sort::Par), top()), ParseError);
}

TEST_CASE("compose satisfies compose(f,g)(a) = f(g(a))") {
    Substitution th;
    th.set("x", top());
    Substitution ga;
    ga.set("x", conj(var("x"), var("y")));
    Substitution c = compose(th, ga);
    CHECK(c.get(intern_atom("x", Sort::Var)) == conj(top(), var("y")));

    CHECK(compose(th, Substitution{})(var("x")) == th(var("x")));
    CHECK(compose(Substitution{}, ga)(var("x")) == ga(var("x")));

    std::mt19937_64 rng(7);
    std::vector<Formula> leaves{var("x"), var("y"), par("p"), bot()};
    std::vector<AtomId> vars{intern_atom("x", Sort::Var), intern_atom("y", Sort::Var)};
    for (int i = 0; i < 200; ++i) {
        Substitution f = rand_subst(rng, vars, leaves);
        Substitution g = rand_subst(rng, vars, leaves);
        Formula a = rand_formula(rng, leaves, 3);
        CHECK(compose(f, g)(a) == f(g(a)));
    }
}

TEST_CASE("atoms_of splits by sort exactly") {
    Formula f = parse("(x -> y) -> p");
    CHECK(vars_of(f) == std::vector<AtomId>{intern_atom("x", Sort::Var),
                                            intern_atom("y", Sort::Var)});
    CHECK(pars_of(f) == std::vector<AtomId>{intern_atom("p", Sort::Par)});
    CHECK(atoms_of(bot()).empty());
    CHECK(vars_of(conj(par("p"), var("x"))) == std::vector<AtomId>{intern_atom("x", Sort::Var)});
    CHECK(is_par_only(parse("p & q")));
    CHECK(!is_par_only(parse("p & x")));
}

TEST_CASE("simplify preserves classical equivalence on random formulas") {
    std::mt19937_64 rng(99);
    std::vector<Formula> leaves{var("x"), var("y"), par("p"), bot(), top()};
    for (int i = 0; i < 400; ++i) {
        Formula f = rand_formula(rng, leaves, 4);
        CHECK(equiv_c(f, simplify(f)));
    }
    CHECK(simplify(conj(top(), var("x"))) == var("x"));
    CHECK(simplify(disj(bot(), var("x"))) == var("x"));
    CHECK(simplify(imp(var("x"), var("x"))) == top());
}

TEST_CASE("FormulaSet deduplicates and keeps insertion order") {
    FormulaSet s;
    CHECK(s.insert(var("x")));
    CHECK(s.insert(par("p")));
    CHECK(!s.insert(var("x")));
    CHECK(s.size() == 2);
    CHECK(s.items()[0] == var("x"));
    CHECK(s.items()[1] == par("p"));
    CHECK(s.contains(par("p")));
}

TEST_CASE("substitution application commutes with parameter sets") {
    // applying a substitution only adds parameters that occur in bindings
    Substitution th;
    th.set("x", par("q"));
    Formula f = parse("x & p");
    auto pars = pars_of(th(f));
    CHECK(pars == std::vector<AtomId>{intern_atom("p", Sort::Par),
                                      intern_atom("q", Sort::Par)});
}
