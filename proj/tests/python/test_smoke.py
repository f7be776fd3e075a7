"""Smoke tests for the Python bindings (the C++ suite carries the load)."""

import pytest

import parlog


def test_parse_and_print():
    f = parlog.parse("p & x")
    assert str(f) == "p & x"
    assert f.atoms == ["p", "x"]
    assert f.variables == ["x"]
    assert f.complexity == 0


def test_operators_build_formulas():
    x = parlog.var("x")
    p = parlog.par("p")
    assert str(p & x) == "p & x"
    assert str(~x) == "~x"
    assert str(x >> p) == "x -> p"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parlog.parse("x & & y")


def test_prove_both_logics():
    em = parlog.parse("x | ~x")
    assert parlog.prove(em, logic="cpc")
    assert not parlog.prove(em, logic="ipc")
    assert parlog.prove(parlog.parse("~~(x | ~x)"), logic="ipc")


def test_countermodel_refutes():
    em = parlog.parse("x | ~x")
    cm = parlog.countermodel(em)
    assert cm is not None
    assert not parlog.model_forces(cm, "x | ~x")
    assert parlog.countermodel(parlog.parse("x -> x")) is None


def test_uap_examples():
    p = parlog.par("p")
    for logic in ("cpc", "ipc"):
        e = parlog.uap(parlog.parse("p & x"), logic=logic)
        assert parlog.prove((e >> p) & (p >> e), logic=logic)
    top = parlog.uap(parlog.parse("x | ~x"), logic="ipc")
    assert parlog.prove(top, logic="ipc")


def test_unify_and_apply():
    th = parlog.unify(parlog.parse("x | ~x"), logic="cpc")
    assert th is not None
    image = parlog.apply(th, parlog.parse("x | ~x"))
    assert parlog.prove(image, logic="cpc")
    assert parlog.unify(parlog.parse("x & ~x"), logic="cpc") is None


def test_project_witness_verifies():
    a = parlog.parse("p & x")
    p = parlog.par("p")
    th = parlog.project(a, p, logic="ipc")
    assert th is not None
    image = parlog.apply(th, a)
    assert parlog.prove((image >> p) & (p >> image), logic="ipc")
    assert parlog.project(parlog.parse("x | ~x"), parlog.true_(), logic="ipc") is None


def test_unifiers_complete_set():
    us = parlog.unifiers(parlog.parse("x | ~x"), parlog.true_())
    assert us is not None and len(us) == 2
    values = [u["x"] for u in us]
    tops = [v for v in values if parlog.prove(v)]
    bots = [v for v in values if parlog.prove(~v)]
    assert len(tops) == 1 and len(bots) == 1
    assert parlog.unifiers(parlog.false_(), parlog.true_()) is None


def test_approx_and_admissible():
    approx = parlog.approx(parlog.parse("x | ~x"), [parlog.true_()])
    assert approx["n"] == 2
    assert len(approx["members"]) == 2

    verdict = parlog.admissible(
        parlog.parse("x | y"),
        [parlog.var("x"), parlog.var("y")],
        [parlog.true_()],
    )
    assert verdict["admissible"]
    assert len(verdict["justified"]) > 0


def test_bank_info():
    info = parlog.bank_info(["p", "x"], 1)
    assert info["classes"] == 13


def test_limit_surfaces_as_exception():
    wide = parlog.parse("x | y | z | u | v")  # five atoms exceed the catalogue cap
    with pytest.raises(RuntimeError):
        parlog.unifiers(wide, parlog.true_())
