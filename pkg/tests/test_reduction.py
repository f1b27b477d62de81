import json

import pytest
from hypothesis import given, strategies as st

from conftest import normal_terms, terms
from sysfdata.classifiers import church_bool, pn
from sysfdata.parsing import parse_term, print_term
from sysfdata.reduction import (
    DEFAULT_NORMALIZE_FUEL, DEFAULT_WHNF_FUEL, FUEL_EXHAUSTED, NORMALIZED, WHNF,
    ReductionTrace, contract, head_decompose, is_normal, is_simple,
    leftmost_redex, normal_form, normalize, replace_at, subterm,
    weak_head_reduce, weak_head_step, FuelExhausted,
)
from sysfdata.syntax import Abs, App, Var, alpha_eq, lams, subst_term

P = parse_term
OMEGA = P(r"(\x. x x) (\x. x x)")


def test_defaults():
    assert DEFAULT_NORMALIZE_FUEL == 10_000
    assert DEFAULT_WHNF_FUEL == 1_000


def test_is_normal_examples():
    assert is_normal(P(r"\x. \y. x"))
    assert not is_normal(P(r"(\x. x) y"))
    assert not is_normal(P(r"x (\y. (\z. z) y)"))


def test_weak_head_step_examples():
    assert weak_head_step(P(r"(\x. x) y")) == Var("y")
    assert weak_head_step(P(r"\x. (\y. y) x")) is None
    assert alpha_eq(weak_head_step(P(r"(\x. \y. x) a b")), P(r"(\y. a) b"))
    assert weak_head_step(P("x ((\\y. y) z)")) is None


def test_weak_head_reduce_examples():
    tr = weak_head_reduce(P(r"(\x. \y. x) a b"), 10)
    assert tr.final == Var("a") and len(tr.steps) == 2 and tr.status == WHNF
    assert weak_head_reduce(OMEGA, 5).status == FUEL_EXHAUSTED
    # T'_X applied to a simple term
    t_prime = Abs("x", App(App(Var("x"), Var("alpha")), church_bool(True)))
    tr = weak_head_reduce(App(t_prime, Var("y")), 10)
    assert alpha_eq(tr.final, App(App(Var("y"), Var("alpha")), church_bool(True)))


def test_normalize_examples():
    assert alpha_eq(normalize(P(r"(\x. x) \y. y")).final, P(r"\y. y"))
    assert alpha_eq(normal_form(subst_term(Var("x"), {"x": pn(0)})), P(r"\x. x"))
    tr = normalize(App(App(pn(2), Var("u1")), Var("u2")))
    assert alpha_eq(tr.final, P(r"\x. x")) and tr.status == NORMALIZED
    assert normalize(OMEGA, 50).status == FUEL_EXHAUSTED
    with pytest.raises(FuelExhausted):
        normal_form(OMEGA, 20)


def test_normalization_reaches_under_binders_and_arguments():
    t = P(r"\z. x ((\y. y) z) ((\y. y) w)")
    tr = normalize(t)
    assert alpha_eq(tr.final, P(r"\z. x z w"))
    assert [s.path for s in tr.steps] == ["BLR", "BR"]


def test_negative_fuel_rejected():
    with pytest.raises(ValueError):
        normalize(Var("x"), -1)
    with pytest.raises(ValueError):
        weak_head_reduce(Var("x"), -1)


def test_is_simple_examples():
    assert is_simple(Var("x"))
    assert is_simple(P(r"x (\y. y) z"))
    assert not is_simple(P(r"\x. x"))
    assert not is_simple(P(r"x ((\y. y) z)"))


def test_head_decompose_examples():
    assert head_decompose(P("x a b")) == (Var("x"), [Var("a"), Var("b")])
    assert head_decompose(P(r"\x. x")) == (P(r"\x. x"), [])
    assert head_decompose(P(r"(\x. x) a b")) == (P(r"\x. x"), [Var("a"), Var("b")])


def test_trace_json_round_trip():
    tr = normalize(P(r"(\f. \x. f (f x)) (\y. y)"))
    data = json.loads(json.dumps(tr.to_json()))
    assert set(data) >= {"initial", "steps", "status"}
    back = ReductionTrace.from_json(data)
    assert back.replay() and alpha_eq(back.final, tr.final)


def test_replay_detects_tampering():
    tr = normalize(P(r"(\x. x) ((\y. y) z)"))
    assert tr.replay()
    bad = ReductionTrace(tr.initial, list(tr.steps), tr.status)
    bad.steps[0] = type(bad.steps[0])(bad.steps[0].strategy, "R", bad.steps[0].result)
    assert not bad.replay()


@given(terms)
def test_traces_replay_and_are_deterministic(t):
    a = normalize(t, 60)
    b = normalize(t, 60)
    assert [s.path for s in a.steps] == [s.path for s in b.steps]
    assert a.replay()
    if a.status == NORMALIZED:
        assert is_normal(a.final)
    w = weak_head_reduce(t, 60)
    assert w.replay()


@given(terms)
def test_weak_head_steps_are_leftmost_steps(t):
    w = weak_head_reduce(t, 30)
    cur = t
    for s in w.steps:
        assert leftmost_redex(cur) == s.path
        cur = s.result


@given(normal_terms())
def test_normal_terms_need_no_fuel(t):
    tr = normalize(t, 0)
    assert tr.status == NORMALIZED and tr.steps == []


@given(normal_terms(free=("x", "y")), st.integers(0, 4))
def test_erasing_substitution_keeps_alpha(t, n):
    # a free x replaced by \x1...\xn. alpha leaves alpha in the normal form
    if "x" not in t.fv or "alpha" in t.fv:
        return
    pad = lams([f"p{i}" for i in range(n)], Var("alpha"))
    v = normal_form(subst_term(t, {"x": pad}))
    assert "alpha" in v.fv


@given(normal_terms(free=("x", "y", "w")), st.integers(0, 3), st.integers(0, 3))
def test_closed_normal_form_means_no_substituted_variable(t, n, m):
    pads = {"x": lams([f"p{i}" for i in range(n)], Var("alpha")),
            "y": lams([f"q{i}" for i in range(m)], Var("alpha"))}
    if "alpha" in t.fv:
        return
    v = normal_form(subst_term(t, pads))
    if not (v.fv - {"alpha", "w"}) and "alpha" not in v.fv:
        assert "x" not in t.fv and "y" not in t.fv


def test_replace_and_subterm_are_inverse():
    t = P(r"\a. f (g a) b")
    path = "BLR"
    assert subterm(t, path) == P("g a")
    assert replace_at(t, path, Var("q")) == P(r"\a. f q b")


def test_contract_rejects_non_redex():
    with pytest.raises(ValueError):
        contract(Var("x"))


def test_printed_nf_is_canonical_text():
    assert print_term(normalize(P(r"(\x. x) \y. y")).final) == r"\y. y"
