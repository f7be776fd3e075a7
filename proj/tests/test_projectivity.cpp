#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "parlog/errors.hpp"
#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"
#include "parlog/projectivity.hpp"
#include "parlog/prover.hpp"

using namespace parlog;

namespace {

AtomId X() { return intern_atom("x", Sort::Var); }

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

} // namespace

TEST_CASE("ghilardi_step unfolds to the two-case substitution") {
    Formula a = parse("p & x");
    Substitution in_x = ghilardi_step(a, {X()});
    CHECK(in_x(var("x")) == imp(a, var("x")));
    Substitution out_x = ghilardi_step(a, {});
    CHECK(out_x(var("x")) == conj(a, var("x")));
    // atoms outside vars(A) stay fixed
    CHECK(in_x(par("p")) == par("p"));
    CHECK(in_x(var("zz")) == var("zz"));

    // each step is an A-identity
    std::mt19937_64 rng(3);
    std::vector<Formula> leaves{var("x"), var("y"), par("p"), bot(), top()};
    for (int i = 0; i < 60; ++i) {
        Formula f = rand_formula(rng, leaves, 3);
        auto vars = vars_of(f);
        for (const auto& xset : {std::vector<AtomId>{}, vars}) {
            Substitution th = ghilardi_step(f, xset);
            for (AtomId at : atoms_of(f))
                CHECK(prove_i({f}, iff(th(atom(at)), atom(at))));
        }
    }
}

TEST_CASE("ghilardi_theta composes the powerset ladder deterministically") {
    GhilardiResult r = ghilardi_theta(parse("p & x"));
    // one step per subset of {x}: {x} first, then {}
    REQUIRE(r.per_step.size() == 2);
    CHECK(r.per_step[0].first == std::vector<AtomId>{X()});
    CHECK(r.per_step[1].first.empty());
    // theta equals the left-to-right composition of the steps
    for (AtomId at : {X(), intern_atom("p", Sort::Par)}) {
        Formula acc = atom(at);
        for (auto it = r.per_step.rbegin(); it != r.per_step.rend(); ++it)
            acc = it->second(acc);
        CHECK(r.theta(atom(at)) == acc);
    }
    // supersets precede subsets throughout
    GhilardiResult two = ghilardi_theta(parse("x | y"));
    REQUIRE(two.per_step.size() == 4);
    for (size_t i = 0; i < two.per_step.size(); ++i)
        for (size_t j = i + 1; j < two.per_step.size(); ++j) {
            const auto& xi = two.per_step[i].first;
            const auto& xj = two.per_step[j].first;
            // xj must not be a strict superset of xi
            CHECK(!(xj.size() > xi.size() &&
                    std::includes(xj.begin(), xj.end(), xi.begin(), xi.end())));
        }

    // worked verdicts
    CHECK(prove_i(iff(r.theta(parse("p & x")), parse("p"))));
    GhilardiResult lem = ghilardi_theta(parse("x | ~x"));
    CHECK(!equiv_i(lem.theta(parse("x | ~x")), top()));
    // no variables: identity
    CHECK(ghilardi_theta(parse("p -> q")).theta.bindings().empty());
    // variable cap
    CHECK_THROWS_AS(ghilardi_theta(parse("x | y | z | u | v")), LimitError);
}

TEST_CASE("ghilardi_theta is an A-identity") {
    std::mt19937_64 rng(19);
    std::vector<Formula> leaves{var("x"), var("y"), par("p"), bot(), top()};
    for (int i = 0; i < 40; ++i) {
        Formula f = rand_formula(rng, leaves, 3);
        GhilardiResult r = ghilardi_theta(f);
        for (AtomId at : atoms_of(f))
            CHECK(prove_i({f}, iff(r.theta(atom(at)), atom(at))));
    }
}

TEST_CASE("decide_E_projective worked verdicts") {
    auto px = decide_E_projective(parse("p & x"), parse("p"));
    REQUIRE(px.has_value());
    CHECK(equiv_i((*px)(parse("p & x")), parse("p")));
    CHECK(prove_i({parse("p & x")}, iff((*px)(var("x")), var("x"))));

    CHECK(!decide_E_projective(parse("x | ~x"), top()).has_value());

    auto xt = decide_E_projective(parse("x"), top());
    REQUIRE(xt.has_value());
    CHECK(prove_i((*xt)(var("x"))));

    // E must be parameter-only
    CHECK_THROWS_AS(decide_E_projective(parse("x"), parse("y")), ValidationError);

    // projections are unique up to equivalence
    CHECK(decide_E_projective(parse("p & x"), parse("p & (p | q)")).has_value());
    CHECK(!decide_E_projective(parse("p & x"), parse("q")).has_value());
}

TEST_CASE("semantic_extendable worked verdicts with certified counterexamples") {
    ExtendResult prime = semantic_extendable(parse("~p -> (q | r)"), top());
    CHECK(!prime.extendable);
    REQUIRE(prime.counterexample.has_value());
    const KripkeModel& cm = *prime.counterexample;
    Formula a = parse("~p -> (q | r)");
    CHECK(cm.persistent());
    CHECK(cm.weakly_forces(a));
    CHECK(!cm.forces(cm.root(), a));
    // no par-variant helps: every admissible root revaluation still refutes a
    auto pars = pars_of(a);
    for (auto mask : variant_masks(cm, pars)) {
        KripkeModel v = with_root_mask(cm, mask);
        CHECK(!v.forces(v.root(), a));
    }

    CHECK(semantic_extendable(parse("x"), top()).extendable);
    CHECK(semantic_extendable(parse("p & x"), parse("p")).extendable);
    CHECK(semantic_extendable(parse("p -> x"), top()).extendable);
    // |-i A -> E fails: not E-extendable
    CHECK(!semantic_extendable(parse("p & x"), parse("q")).extendable);
}

TEST_CASE("extendability and projectivity verdicts agree on samples") {
    // the full corpus runs in the acceptance gate; spot-check here
    struct Case {
        const char* a;
        const char* e;
    };
    for (Case c : {Case{"p & x", "p"}, Case{"x", "true"}, Case{"x | ~x", "true"},
                   Case{"p -> x", "true"}, Case{"x & ~x", "false"},
                   Case{"p | x", "true"}}) {
        Formula a = parse(c.a);
        Formula e = parse(c.e);
        bool proj = decide_E_projective(a, e).has_value();
        bool ext = semantic_extendable(a, e).extendable;
        CHECK_MESSAGE(proj == ext, c.a, " vs ", c.e);
    }
}

TEST_CASE("uap_i computes the bounded uniform post-interpolant") {
    Formula u1 = uap_i(parse("p & x"));
    CHECK(is_par_only(u1));
    CHECK(equiv_i(u1, parse("p")));

    CHECK(equiv_i(uap_i(parse("x | ~x")), top()));
    CHECK(equiv_i(uap_i(parse("p | q")), parse("p | q"))); // already parameter-only
    CHECK(equiv_i(uap_i(parse("x & ~x")), bot()));
    CHECK(equiv_i(uap_i(parse("p & q & x")), parse("p & q")));
    // one-atom formulas afford deeper levels: double negation stays put
    CHECK(equiv_i(uap_i(parse("~~p")), parse("~~p")));

    // postconditions on samples: A implies the result, and the result is the
    // strongest among sampled parameter-only consequences.  Samples stay at
    // implication depth <= 1 so the default bank caps apply.
    std::mt19937_64 rng(29);
    std::vector<Formula> leaves{var("x"), par("p"), bot(), top()};
    std::vector<Formula> dleaves{par("p"), bot(), top()};
    for (int i = 0; i < 12; ++i) {
        Formula f = rand_formula(rng, leaves, 2);
        while (complexity(f) > 1)
            f = rand_formula(rng, leaves, 2);
        Formula u = uap_i(f);
        CHECK(is_par_only(u));
        CHECK(prove_i(imp(f, u)));
        // maximality is guaranteed within the default definability bound
        for (int j = 0; j < 6; ++j) {
            Formula d = rand_formula(rng, dleaves, 2);
            if (complexity(d) <= complexity(f) + 1 && prove_i(imp(f, d)))
                CHECK(prove_i(imp(u, d)));
        }
    }
}

TEST_CASE("par_projective_i pairs the interpolant with a witness") {
    auto px = par_projective_i(parse("p & x"));
    REQUIRE(px.has_value());
    CHECK(equiv_i(px->projection, parse("p")));
    CHECK(equiv_i(px->theta(parse("p & x")), parse("p")));
    for (AtomId a : atoms_of(parse("p & x")))
        CHECK(prove_i({parse("p & x")}, iff(px->theta(atom(a)), atom(a))));

    CHECK(!par_projective_i(parse("x | ~x")).has_value());

    auto triv = par_projective_i(parse("q -> q"));
    REQUIRE(triv.has_value());
    CHECK(equiv_i(triv->projection, top()));

    // most-general parametrifier: sampled uap-fiers factor through theta
    Substitution g;
    g.set("x", parse("p"));
    REQUIRE(equiv_i(g(parse("p & x")), parse("p")));
    for (AtomId v : vars_of(parse("p & x")))
        CHECK(prove_i(iff(g(px->theta(atom(v))), g(atom(v)))));
}

TEST_CASE("projective approximation of the excluded middle") {
    ApproxResult r = projective_approx(parse("x | ~x"), {top()});
    CHECK(r.config.n == 2);
    REQUIRE(r.pi.size() == 2);
    bool has_x = false, has_nx = false;
    for (const ApproxEntry& ent : r.pi) {
        CHECK(equiv_i(ent.projection, top()));
        CHECK(prove_i(imp(ent.b, parse("x | ~x"))));
        CHECK(equiv_i(ent.theta(ent.b), ent.projection));
        for (AtomId a : atoms_of(ent.b))
            CHECK(prove_i({ent.b}, iff(ent.theta(atom(a)), atom(a))));
        if (equiv_i(ent.b, var("x")))
            has_x = true;
        if (equiv_i(ent.b, neg(var("x"))))
            has_nx = true;
    }
    CHECK(has_x);
    CHECK(has_nx);
}

TEST_CASE("projective approximation edge cases") {
    // bottom premise: nothing is T-projective below it
    CHECK(projective_approx(bot(), {top()}).pi.empty());

    // p & x relative to {p}: the premise itself appears
    ApproxResult r = projective_approx(parse("p & x"), {parse("p")});
    CHECK(r.config.n == 1);
    CHECK(!r.pi.empty());
    bool has_self = false;
    for (const ApproxEntry& ent : r.pi)
        if (equiv_i(ent.b, parse("p & x")))
            has_self = true;
    CHECK(has_self);
    // soundness of the whole set: the disjunction implies the premise
    std::vector<Formula> bs;
    for (const ApproxEntry& ent : r.pi)
        bs.push_back(ent.b);
    CHECK(prove_i(imp(disj_all(bs), parse("p & x"))));

    // gamma without parameter-only members is rejected
    CHECK_THROWS_AS(projective_approx(parse("x"), {parse("y")}), ValidationError);
    // non-parameter-only members are ignored but allowed alongside
    ApproxResult mixed = projective_approx(parse("x"), {parse("y"), top()});
    CHECK(mixed.config.gamma_par.size() == 1);
    CHECK(!mixed.pi.empty());
}

TEST_CASE("approx_config derives level and atoms") {
    ApproxConfig c = approx_config(parse("p & x"), {parse("p")});
    CHECK(c.n == 1); // max(c(A)=0, 1 + c(p)=0)
    CHECK(c.working_atoms ==
          std::vector<AtomId>{intern_atom("p", Sort::Par), intern_atom("x", Sort::Var)});
    ApproxConfig c2 = approx_config(parse("x | ~x"), {top()});
    CHECK(c2.n == 2); // max(1, 1 + c(T)=1)
}

TEST_CASE("complete unifier sets for parameter extensions") {
    // excluded middle over IPC: exactly the two constant unifiers
    auto em = complete_unifiers_ext(parse("x | ~x"), top());
    REQUIRE(em.has_value());
    REQUIRE(em->size() == 2);
    bool to_top = false, to_bot = false;
    for (const Substitution& th : *em) {
        CHECK(prove_i(th(parse("x | ~x"))));
        if (equiv_i(th(var("x")), top()))
            to_top = true;
        if (equiv_i(th(var("x")), bot()))
            to_bot = true;
    }
    CHECK(to_top);
    CHECK(to_bot);

    // plain variable
    auto xs = complete_unifiers_ext(parse("x"), top());
    REQUIRE(xs.has_value());
    REQUIRE(!xs->empty());
    for (const Substitution& th : *xs)
        CHECK(prove_i(th(var("x"))));

    // not unifiable at all
    CHECK(!complete_unifiers_ext(bot(), top()).has_value());
    CHECK(!complete_unifiers_ext(parse("p & x"), top()).has_value());

    // relative to the axiom p, p & x becomes unifiable and the returned set
    // dominates sampled unifiers
    auto ext = complete_unifiers_ext(parse("p & x"), parse("p"));
    REQUIRE(ext.has_value());
    REQUIRE(!ext->empty());
    for (const Substitution& th : *ext)
        CHECK(prove_i({parse("p")}, th(parse("p & x"))));
    std::vector<Substitution> taus;
    {
        Substitution t;
        t.set("x", top());
        taus.push_back(t);
    }
    {
        Substitution t;
        t.set("x", parse("p"));
        taus.push_back(t);
    }
    for (const Substitution& tau : taus) {
        REQUIRE(prove_i({parse("p")}, tau(parse("p & x"))));
        bool dominated = false;
        for (const Substitution& th : *ext) {
            bool all = true;
            for (AtomId v : vars_of(parse("p & x")))
                all = all && prove_i({parse("p")}, iff(tau(th(atom(v))), tau(atom(v))));
            dominated = dominated || all;
        }
        CHECK(dominated);
    }
}

TEST_CASE("weak forcing plus one good variant forces the ladder image") {
    // for theta_A built by the ladder: a model that weakly forces theta_A(A)
    // and has some par-variant forcing it must force it at the root already
    std::mt19937_64 rng(61);
    std::vector<AtomId> universe{intern_atom("p", Sort::Par), X()};
    std::vector<Formula> leaves{var("x"), par("p"), bot(), top()};
    int exercised = 0;
    for (int i = 0; i < 120; ++i) {
        Formula a = rand_formula(rng, leaves, 2);
        if (vars_of(a).empty())
            continue;
        Formula image = ghilardi_theta(a).theta(a);
        KripkeModel k = random_rooted_model(rng, universe, 6);
        if (!k.weakly_forces(image))
            continue;
        bool some_variant = false;
        for (auto mask : variant_masks(k, pars_of(image))) {
            if (with_root_mask(k, mask).forces(k.root(), image))
                some_variant = true;
        }
        if (!some_variant)
            continue;
        ++exercised;
        CHECK(k.forces(k.root(), image));
    }
    CHECK(exercised > 10);
}
