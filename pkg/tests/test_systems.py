from importlib import resources

import pytest
from hypothesis import given, strategies as st

from conftest import normal_terms, qf_types
from sysfdata.classifiers import BOOL, ID, NAT, PRELUDE, lg, pn
from sysfdata.derivation import FORALL_E, check_derivation_f, find_error
from sysfdata.generators import random_f0_judgment, rng
from sysfdata.parsing import DEFAULT_ATOMS, parse_context, parse_term, parse_type, read_corpus
from sysfdata.reduction import is_normal, normal_form
from sysfdata.syntax import Context, O, TVar, Var, subst_term
from sysfdata.systems import (
    Judgment, NotDerivableError, NotNormalError, QuantifierError, check_f0,
    check_s, check_s_unify, derivation_f0_height, derive_f0, erase_context,
    erase_type, f0_to_s,
)
from sysfdata.typelab import alpha_applied

P = parse_term


def T(s):
    return parse_type(s, DEFAULT_ATOMS, PRELUDE)


def C(s):
    return parse_context(s, DEFAULT_ATOMS, PRELUDE)


def test_check_f0_examples():
    assert check_f0(Context(), P(r"\x. x"), ID)
    assert check_f0(Context(), P(r"\x. \y. x"), BOOL)
    assert check_f0(Context(), P(r"\x. \s. s x"), NAT)
    assert not check_f0(Context(), P(r"\x. \s. x s"), NAT)
    assert check_f0(Context(), P(r"\x. \s. s (s x)"), NAT)
    assert check_f0(C("alpha : O"), Var("alpha"), O)
    assert not check_f0(Context(), P(r"\x. x x"), ID)


def test_check_f0_needs_instantiation_for_d():
    # \x. x (\y. y) : D needs forall_e, so F0 says no
    assert not check_f0(Context(), P(r"\x. x \y. y"), T("D"))


def test_check_f0_requires_normal_terms():
    with pytest.raises(NotNormalError):
        check_f0(Context(), P(r"(\x. x) \y. y"), ID)


def test_alpha_equivalent_context_types_are_accepted():
    ctx = C("x : forall X. X -> X")
    assert check_f0(ctx, Var("x"), T("forall Y. Y -> Y"))


def test_generalization_renames_variables_free_in_context():
    ctx = C("y : X")
    assert check_f0(ctx, P(r"\x. y"), T("forall X. X -> X")) is False
    assert check_f0(ctx, P(r"\x. x"), T("forall X. X -> X"))
    assert check_f0(ctx, P(r"\x. y"), T("forall Z. Z -> X"))


def test_check_s_examples():
    assert check_s(Context(), P(r"(\x. x) \y. y"), T("X -> X"))
    assert check_s(Context(), P(r"\x. \y. x"), T("X -> Y -> X"))
    assert not check_s(Context(), P(r"\x. x x"), T("X -> X"))
    assert not check_s(Context(), P(r"(\x. x x) (\x. x x)"), T("X"))
    assert check_s(C("f : X -> Y, a : X"), P(r"(\g. g a) f"), T("Y"))
    # type variables in the goal are rigid
    assert not check_s(Context(), P(r"\x. x"), T("X -> Y"))


def test_check_s_rejects_quantified_types():
    with pytest.raises(QuantifierError):
        check_s(Context(), P(r"\x. x"), ID)
    with pytest.raises(QuantifierError):
        check_s(C("x : forall X. X"), Var("x"), T("Y"))


def test_erasure_examples():
    assert erase_type(ID) == T("X -> X")
    assert erase_type(T("forall X. (forall Y. Y -> X) -> X")) == T("(Y -> X) -> X")
    assert erase_type(T("O -> O")) == T("O -> O")
    assert erase_context(C("x : forall X. X")) == C("x : X")


def test_f0_to_s_examples():
    j = f0_to_s(Judgment(Context(), P(r"\x. \y. x"), BOOL))
    assert j.type == T("X -> X -> X") and j.system == "S"
    assert check_s(j.ctx, j.term, j.type)
    with pytest.raises(NotDerivableError):
        f0_to_s(Judgment(Context(), P(r"\x. x \y. y"), T("D")))


def test_erasure_identifies_variables_of_alpha_equal_types():
    # bound names differ, so the erased context and goal differ as well
    ctx = C("x : forall X. X -> X")
    a = T("forall Y. Y -> Y")
    assert check_f0(ctx, Var("x"), a)
    assert not check_s(erase_context(ctx), Var("x"), erase_type(a))


def test_derive_f0_certificate():
    d = derive_f0(Context(), P(r"\x. \s. s (s x)"), NAT)
    assert check_derivation_f(d) and not d.uses(FORALL_E)
    assert find_error(d, "F0") is None
    assert derivation_f0_height(Context(), P(r"\x. x"), ID) == 3
    assert derivation_f0_height(Context(), P(r"\x. x x"), ID) is None


@given(st.integers(0, 10_000))
def test_random_f0_judgments_certify_and_erase(seed):
    ctx, t, a = random_f0_judgment(rng(seed))
    d = derive_f0(ctx, t, a)
    assert d is not None and check_derivation_f(d) and not d.uses(FORALL_E)
    assert d.height() == derivation_f0_height(ctx, t, a)
    j = f0_to_s(Judgment(ctx, t, a))
    assert check_s(j.ctx, j.term, j.type)


@given(normal_terms(free=("f", "a")), qf_types)
def test_normal_path_of_check_s_agrees_with_unification(t, a):
    ctx = C("f : X -> Y -> X, a : Y")
    assert check_s(ctx, t, a) == check_s_unify(ctx, t, a)


@given(normal_terms(free=("alpha",)), qf_types)
def test_big_pn_does_not_fit_a_short_simple_type(t, e):
    # closed normal u holding p_n with n > Lg(E) is not of type E in S
    if "alpha" not in t.fv or alpha_applied(t, "alpha"):
        return
    n = lg(e) + 1
    u = subst_term(t, {"alpha": pn(n)})
    assert is_normal(u)
    assert not check_s(Context(), u, e)


def test_corpus_judgments_are_accepted():
    text = resources.files("sysfdata").joinpath("data", "corpus.judgments").read_text()
    items = read_corpus(text, DEFAULT_ATOMS, PRELUDE)
    assert len(items) >= 20
    for ctx, t, a in items:
        if is_normal(t):
            assert check_f0(ctx, t, a), (t, a)
        else:
            assert check_s(ctx, t, a), (t, a)
            normal_form(t)


def test_variable_type_must_match_goal_exactly():
    assert not check_f0(C("x : X"), Var("x"), TVar("Y"))
