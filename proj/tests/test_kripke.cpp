#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "parlog/errors.hpp"
#include "parlog/formula.hpp"
#include "parlog/kripke.hpp"

using namespace parlog;

namespace {

AtomId P() { return intern_atom("p", Sort::Par); }
AtomId X() { return intern_atom("x", Sort::Var); }

// 2-chain w0 < w1 with x forced only at the top.
KripkeModel two_chain_x_top() {
    return KripkeModel({{"w0", {}}, {"w1", {X()}}}, {{0, 1}}, 0);
}

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

TEST_CASE("validation accepts good models and rejects broken ones") {
    CHECK_NOTHROW(KripkeModel({{"w0", {P()}}}, {}, 0));
    // persistence violation: p at the bottom, absent above
    CHECK_THROWS_AS(KripkeModel({{"w0", {P()}}, {"w1", {}}}, {{0, 1}}, 0),
                    ValidationError);
    // two incomparable nodes, no common minimum
    CHECK_THROWS_AS(KripkeModel({{"w0", {}}, {"w1", {}}}, {}, 0), ValidationError);
    // distinct mutually-related nodes are rejected
    CHECK_THROWS_AS(KripkeModel({{"w0", {}}, {"w1", {}}}, {{0, 1}, {1, 0}}, 0),
                    ValidationError);
    // root must be the minimum
    CHECK_THROWS_AS(KripkeModel({{"w0", {}}, {"w1", {}}}, {{0, 1}}, 1),
                    ValidationError);
}

TEST_CASE("forcing matches the textbook clauses") {
    KripkeModel k = two_chain_x_top();
    Formula x = var("x");
    CHECK(!k.forces(0, x));
    CHECK(k.forces(1, x));
    CHECK(k.forces(0, neg(neg(x))));
    CHECK(!k.forces(0, disj(x, neg(x))));
    CHECK(!k.forces(0, bot()));
    CHECK(!k.forces(1, bot()));
    CHECK(k.forces(0, imp(parse("p"), parse("p"))));
    CHECK(k.forces(0, top()));
}

TEST_CASE("forcing is persistent along the order") {
    std::mt19937_64 rng(11);
    std::vector<AtomId> universe{P(), X()};
    std::vector<Formula> leaves{var("x"), par("p"), bot(), top()};
    for (int trial = 0; trial < 60; ++trial) {
        KripkeModel k = random_rooted_model(rng, universe, 7);
        CHECK(k.persistent());
        for (int i = 0; i < 8; ++i) {
            Formula f = rand_formula(rng, leaves, 3);
            const Bits& fs = k.force_set(f);
            for (int w = 0; w < k.size(); ++w)
                if (fs.test(w))
                    for (int u = 0; u < k.size(); ++u)
                        if (k.up(w).test(u))
                            CHECK(fs.test(u));
        }
    }
}

TEST_CASE("weakly_forces quantifies over non-root nodes only") {
    KripkeModel k = two_chain_x_top();
    CHECK(k.weakly_forces(var("x")));
    CHECK(!k.forces(k.root(), var("x")));
    KripkeModel single = point_model({}, {P(), X()});
    CHECK(single.weakly_forces(bot())); // vacuous
}

TEST_CASE("generated submodel preserves forcing on the cone") {
    std::mt19937_64 rng(23);
    std::vector<AtomId> universe{P(), X()};
    std::vector<Formula> leaves{var("x"), par("p"), bot()};
    for (int trial = 0; trial < 40; ++trial) {
        KripkeModel k = random_rooted_model(rng, universe, 7);
        int w = static_cast<int>(rng() % k.size());
        KripkeModel g = generated_submodel(k, w);
        CHECK(g.root() == 0);
        for (int i = 0; i < 6; ++i) {
            Formula f = rand_formula(rng, leaves, 3);
            CHECK(g.forces(g.root(), f) == k.forces(w, f));
        }
    }
    KripkeModel k = two_chain_x_top();
    KripkeModel top_cone = generated_submodel(k, 1);
    CHECK(top_cone.size() == 1);
    CHECK(top_cone.forces(0, var("x")));
}

TEST_CASE("variant revalues the root under agreement and persistence") {
    KripkeModel k = two_chain_x_top();
    // x absent above nothing: x at top, so the root may gain x
    KripkeModel kv = variant(k, {X()}, {});
    CHECK(kv.forces(0, var("x")));
    // fixing x forbids changing it
    CHECK_THROWS_AS(variant(k, {X()}, {X()}), ValidationError);
    // persistence bound: root cannot claim p when no node above has p
    KripkeModel chain_with_p =
        KripkeModel({{"w0", {}}, {"w1", {P()}}}, {{0, 1}}, 0, {X()});
    CHECK_THROWS_AS(variant(chain_with_p, {X()}, {}), ValidationError);

    // exhaustive par-variant enumeration over {p,x} on the 2-chain:
    // p is fixed, x is free at the root only while persistence allows it
    KripkeModel base = KripkeModel({{"w0", {}}, {"w1", {X()}}}, {{0, 1}}, 0, {P()});
    auto masks = variant_masks(base, {P()});
    CHECK(masks.size() == 2); // x off / x on at root; p stays off
    for (auto m : masks) {
        KripkeModel v = with_root_mask(base, m);
        CHECK(v.persistent());
        CHECK(v.holds_atom(0, P()) == base.holds_atom(0, P()));
    }
}

TEST_CASE("subst_image satisfies the forcing equivalence") {
    std::mt19937_64 rng(37);
    std::vector<AtomId> universe{P(), X()};
    std::vector<Formula> leaves{var("x"), par("p"), bot(), top()};
    for (int trial = 0; trial < 40; ++trial) {
        KripkeModel k = random_rooted_model(rng, universe, 6);
        Substitution th;
        th.set(X(), rand_formula(rng, leaves, 2));
        KripkeModel img = subst_image(k, th);
        for (int i = 0; i < 6; ++i) {
            Formula a = rand_formula(rng, leaves, 3);
            for (int w = 0; w < k.size(); ++w)
                CHECK(img.forces(w, a) == k.forces(w, th(a)));
        }
    }
    // identity substitution keeps the valuation
    KripkeModel k = two_chain_x_top();
    KripkeModel same = subst_image(k, Substitution{});
    for (int w = 0; w < k.size(); ++w)
        CHECK(same.holds_atom(w, X()) == k.holds_atom(w, X()));
    // x := true makes x global
    Substitution tx;
    tx.set(X(), top());
    CHECK(subst_image(k, tx).forces_everywhere(var("x")));
}

TEST_CASE("subst_image composes contravariantly") {
    std::mt19937_64 rng(41);
    std::vector<AtomId> universe{P(), X()};
    std::vector<Formula> leaves{var("x"), par("p"), bot(), top()};
    for (int trial = 0; trial < 30; ++trial) {
        KripkeModel k = random_rooted_model(rng, universe, 6);
        Substitution th, ga;
        th.set(X(), rand_formula(rng, leaves, 2));
        ga.set(X(), rand_formula(rng, leaves, 2));
        KripkeModel lhs = subst_image(k, compose(th, ga));
        KripkeModel rhs = subst_image(subst_image(k, th), ga);
        REQUIRE(lhs.size() == rhs.size());
        for (int w = 0; w < lhs.size(); ++w)
            for (AtomId a : lhs.atoms())
                CHECK(lhs.holds_atom(w, a) == rhs.holds_atom(w, a));
    }
}

TEST_CASE("sum_with_fresh_root glues members below an empty root") {
    KripkeModel empty_sum = sum_with_fresh_root({});
    CHECK(empty_sum.size() == 1);
    CHECK(empty_sum.val_atoms(0).empty());

    KripkeModel k = two_chain_x_top();
    KripkeModel s = sum_with_fresh_root({k, k});
    CHECK(s.size() == 5);
    CHECK(s.val_atoms(s.root()).empty());
    // forcing at old nodes unchanged: both copies still refute x at their
    // local roots and force it on top
    int found_forcing = 0, found_refuting = 0;
    for (int w = 0; w < s.size(); ++w) {
        if (w == s.root())
            continue;
        if (s.forces(w, var("x")))
            ++found_forcing;
        else
            ++found_refuting;
    }
    CHECK(found_forcing == 2);
    CHECK(found_refuting == 2);
    // the fresh root refutes x and both disjunction cases
    CHECK(!s.forces(s.root(), var("x")));
}

TEST_CASE("canonical_form is stable under renaming and reordering") {
    KripkeModel a({{"u", {}}, {"v", {X()}}}, {{0, 1}}, 0, {P()});
    KripkeModel b({{"top", {X()}}, {"bottom", {}}}, {{1, 0}}, 1, {P()});
    CHECK(canonical_form(a).structure_key() == canonical_form(b).structure_key());
    CHECK(canonical_form(a).name(0) == "w0");
}

TEST_CASE("model JSON round-trips and validates") {
    const char* text = R"({"root":"w0",
        "nodes":[{"id":"w0","val":[]},{"id":"w1","val":["x"]}],
        "order":[["w0","w1"]]})";
    KripkeModel k = model_from_json(text);
    CHECK(k.size() == 2);
    CHECK(k.forces(0, neg(neg(var("x")))));
    KripkeModel again = model_from_json(model_to_json(k));
    CHECK(again.structure_key() == k.structure_key());

    CHECK_THROWS_AS(model_from_json("{"), ValidationError);
    CHECK_THROWS_AS(
        model_from_json(R"({"root":"w9","nodes":[{"id":"w0","val":[]}],"order":[]})"),
        ValidationError);
    // persistence violation inside the file
    CHECK_THROWS_AS(
        model_from_json(
            R"({"root":"w0","nodes":[{"id":"w0","val":["p"]},{"id":"w1","val":[]}],"order":[["w0","w1"]]})"),
        ValidationError);
}
