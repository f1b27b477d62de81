import pytest
from hypothesis import given, strategies as st

from conftest import names, proper_types, terms, types
from sysfdata.classifiers import is_proper
from sysfdata.parsing import parse_term, parse_type
from sysfdata.syntax import (
    Abs, App, Context, Forall, O, TVar, Var,
    alpha_eq, alpha_eq_type, free_term_vars, free_type_vars, subst_term,
    subst_type, term_key,
)


def test_free_vars_examples():
    assert free_term_vars(parse_term(r"\x. x")) == set()
    assert free_term_vars(parse_term(r"\x. (x) alpha")) == {"alpha"}
    assert free_term_vars(parse_term("(x) y z")) == {"x", "y", "z"}


def test_subst_examples():
    assert subst_term(Var("x"), {"x": Var("u")}) == Var("u")
    # capture avoidance: the binder must be renamed
    out = subst_term(parse_term(r"\y. x"), {"x": Var("y")})
    assert isinstance(out, Abs) and out.var != "y" and out.body == Var("y")
    assert alpha_eq(out, parse_term(r"\y1. y"))
    ident = parse_term(r"\z. z")
    assert subst_term(parse_term("x x"), [("x", ident)]) == App(ident, ident)


def test_subst_is_simultaneous():
    out = subst_term(parse_term("x y"), {"x": Var("y"), "y": Var("x")})
    assert out == parse_term("y x")


def test_subst_type_examples():
    g = parse_type("O -> O")
    assert subst_type(TVar("X"), g, "X") == g
    assert subst_type(parse_type("forall Y. Y -> X"), O, "X") == parse_type("forall Y. Y -> O")
    assert subst_type(parse_type("forall X. X -> X"), g, "X") == parse_type("forall X. X -> X")


def test_subst_type_avoids_capture():
    out = subst_type(parse_type("forall Y. Y -> X"), TVar("Y"), "X")
    assert isinstance(out, Forall) and out.var != "Y"
    assert free_type_vars(out) == {"Y"}


def test_alpha_examples():
    assert alpha_eq(parse_term(r"\x. x"), parse_term(r"\y. y"))
    assert not alpha_eq(parse_term(r"\x. \y. x"), parse_term(r"\a. \b. b"))
    assert alpha_eq_type(parse_type("forall X. X -> X"), parse_type("forall Y. Y -> Y"))
    assert not alpha_eq(Var("x"), Var("y"))


def test_atoms_and_variables_are_distinct():
    assert not alpha_eq_type(parse_type("O"), TVar("O"))
    assert free_type_vars(parse_type("O -> X")) == {"X"}


def test_context_rejects_duplicates():
    ctx = Context([("x", TVar("X"))])
    with pytest.raises(ValueError):
        ctx.extend("x", TVar("Y"))
    with pytest.raises(ValueError):
        Context([("x", O), ("x", O)])
    assert ctx.lookup("y") is None
    assert ctx["x"] == TVar("X")


def test_context_equality_is_order_and_alpha_insensitive():
    a = Context([("x", parse_type("forall X. X")), ("y", O)])
    b = Context([("y", O), ("x", parse_type("forall Z. Z"))])
    assert a == b and hash(a) == hash(b)


@given(terms)
def test_alpha_eq_reflexive(t):
    assert alpha_eq(t, t)


@given(terms, names, names)
def test_renaming_a_binder_preserves_alpha_class(t, old, new):
    # closing t under \old and then renaming the binder gives an alpha-variant
    if new in t.fv - {old}:
        return
    a = Abs(old, t)
    b = Abs(new, subst_term(t, {old: Var(new)}))
    assert alpha_eq(a, b)


@given(terms, terms, names)
def test_free_vars_after_substitution(t, u, x):
    out = subst_term(t, {x: u})
    if x in t.fv:
        assert out.fv == (t.fv - {x}) | u.fv
    else:
        assert out.fv == t.fv


@given(terms, terms)
def test_alpha_eq_agrees_with_keys(t, u):
    assert alpha_eq(t, u) == (term_key(t) == term_key(u))


@given(proper_types, proper_types, st.sampled_from(("X", "Y", "Z")))
def test_substitution_preserves_properness(a, g, x):
    assert is_proper(a) and is_proper(g)
    assert is_proper(subst_type(a, g, x))


@given(types, types)
def test_alpha_eq_type_symmetric(a, b):
    assert alpha_eq_type(a, b) == alpha_eq_type(b, a)


def test_deep_terms_do_not_overflow():
    t = Var("x")
    for i in range(400):
        t = Abs(f"v{i}", t)
    assert t.fv == {"x"}
    assert alpha_eq(t, t)
