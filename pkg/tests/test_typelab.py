import pytest

from conftest import all_normal_terms
from sysfdata import witnesses
from sysfdata.classifiers import BOOL, ID, NAT, PRELUDE, church_nat, mk_list, mk_product, mk_sum
from sysfdata.derivation import check_derivation_f, conclusion_matches, lam, ax
from sysfdata.parsing import DEFAULT_ATOMS, parse_term, parse_type
from sysfdata.reduction import is_normal
from sysfdata.syntax import Abs, Arrow, Context, O, Var, alpha_eq, term_key, term_size
from sysfdata.systems import NotNormalError, check_f0, derive_f0
from sysfdata.typelab import (
    Counterexample, InvalidDerivationError, NoCounterexampleUpTo, SearchBudget,
    check_input_counterexample, check_output_witness, enumerate_f0,
    lift_output_counterexample, probe_output, refute_input_via_output,
)

P = parse_term
ALPHA = Context([("alpha", O)])


def T(s):
    return parse_type(s, DEFAULT_ATOMS, PRELUDE)


def keys(ts):
    return {term_key(t) for t in ts}


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(0)
    with pytest.raises(ValueError):
        SearchBudget(3, 0)
    with pytest.raises(ValueError):
        SearchBudget(3, size_cap=0)


def test_enumeration_examples():
    assert list(enumerate_f0(ALPHA, O, SearchBudget(3))) == [Var("alpha")]
    got = enumerate_f0(Context(), BOOL, SearchBudget(4))
    assert keys(got) == keys([P(r"\x. \y. x"), P(r"\x. \y. y")]) and got.complete
    nats = enumerate_f0(Context(), NAT, SearchBudget(6))
    assert keys(nats) == keys(church_nat(k) for k in range(3))


def test_enumeration_is_sorted_and_deterministic():
    a = enumerate_f0(Context(), NAT, SearchBudget(8))
    b = enumerate_f0(Context(), NAT, SearchBudget(8))
    assert a.terms == b.terms
    sizes = [term_size(t) for t in a]
    assert sizes == sorted(sizes)


def test_depth_counts_every_rule_node():
    # \x. x : Id needs forall_i, ->i and ax
    assert len(enumerate_f0(Context(), ID, SearchBudget(2))) == 0
    assert len(enumerate_f0(Context(), ID, SearchBudget(3))) == 1


def test_truncation_marks_incomplete():
    got = enumerate_f0(Context(), NAT, SearchBudget(12, max_terms=2))
    assert not got.complete and len(got) <= 2


def test_enumerated_terms_are_typable():
    for a in (ID, BOOL, NAT, mk_product(BOOL, BOOL)):
        for t in enumerate_f0(Context(), a, SearchBudget(6)):
            assert is_normal(t) and check_f0(Context(), t, a)


# ---------------------------------------------------------------------------
# brute-force oracle

@pytest.mark.parametrize("goal,ctx", [(ID, Context()), (BOOL, Context()), (O, ALPHA),
                                      (NAT, Context()), (Arrow(NAT, O), ALPHA)],
                         ids=["Id", "B", "O", "N", "N-to-O"])
def test_enumeration_matches_brute_force(goal, ctx):
    free = tuple(ctx.names())
    brute = set()
    for s in range(1, 8):
        for t in all_normal_terms(s, (), free):
            if check_f0(ctx, t, goal):
                brute.add(term_key(t))
    got = enumerate_f0(ctx, goal, SearchBudget(60, size_cap=7))
    assert got.complete and keys(got) == brute


def test_brute_force_generator_counts():
    assert len(list(all_normal_terms(3, (), ()))) == 2
    # three projections of \a.\b.\c. and \a. a a
    assert len(list(all_normal_terms(4, (), ()))) == 4


# ---------------------------------------------------------------------------
# output probes

def test_probe_output_examples():
    v = probe_output(BOOL, SearchBudget(6))
    assert isinstance(v, NoCounterexampleUpTo) and v.kind == "no-counterexample"
    v = probe_output(O, SearchBudget(3))
    assert isinstance(v, Counterexample) and v.term == Var("alpha")
    assert check_derivation_f(v.evidence)


def test_probe_output_with_explicit_witness():
    d = witnesses.nat_alpha_witness()
    v = probe_output(T("N -> N"), SearchBudget(4), witnesses=[(d.term, d)])
    assert v.source == "explicit-derivation"
    assert alpha_eq(v.term, P(r"\n. \x. \z. n (\y. x) (\x. x) alpha"))


def test_probe_output_requires_closed_type():
    with pytest.raises(ValueError):
        probe_output(T("X -> X"), SearchBudget(3))


@pytest.mark.parametrize("a", [ID, BOOL, NAT])
def test_data_types_have_no_f0_counterexample(a):
    assert isinstance(probe_output(a, SearchBudget(6)), NoCounterexampleUpTo)


@pytest.mark.parametrize("a", [mk_product(BOOL, BOOL), mk_sum(BOOL, BOOL), mk_list(BOOL)],
                         ids=["product", "sum", "list"])
def test_encodings_of_booleans_have_no_counterexample(a):
    assert isinstance(probe_output(a, SearchBudget(7)), NoCounterexampleUpTo)


def test_check_output_witness_errors():
    d = witnesses.nat_alpha_witness()
    with pytest.raises(InvalidDerivationError):
        check_output_witness(T("N"), d.term, d)
    with pytest.raises(ValueError):
        check_output_witness(T("N -> N"), P(r"\x. x"), d)
    with pytest.raises(NotNormalError):
        check_output_witness(T("N -> N"), P(r"(\x. x) alpha"), d)


def test_lift_output_counterexample():
    d = witnesses.nat_alpha_witness()
    lifted = lift_output_counterexample(BOOL, d)
    assert check_derivation_f(lifted)
    assert lifted.type == Arrow(BOOL, d.type)
    assert isinstance(lifted.term, Abs) and lifted.term.body == d.term
    base = derive_f0(ALPHA, Var("alpha"), O)
    lifted = lift_output_counterexample(NAT, base)
    assert conclusion_matches(lifted, ALPHA, P(r"\y. alpha"), Arrow(NAT, O))


# ---------------------------------------------------------------------------
# input refuters

def test_input_counterexample_examples():
    d = witnesses.d_separation()
    assert check_input_counterexample(T("D"), d.term, d)
    ident = derive_f0(Context(), P(r"\x. x"), ID)
    assert not check_input_counterexample(ID, ident.term, ident)
    one = derive_f0(Context(), P(r"\x. \y. x"), BOOL)
    assert not check_input_counterexample(BOOL, one.term, one)


def test_input_counterexample_errors():
    d = witnesses.d_separation()
    with pytest.raises(InvalidDerivationError):
        check_input_counterexample(ID, d.term, d)
    with pytest.raises(NotNormalError):
        check_input_counterexample(T("D"), P(r"(\x. x) \y. y"), d)


def test_refute_input_via_output():
    d = witnesses.nat_alpha_witness()
    ref = refute_input_via_output(T("N -> N"), d.term, d)
    assert ref.n == 8 and ref.f0_rejects
    assert is_normal(ref.u) and not ref.u.fv
    dv = witnesses.d_variant()
    ref = refute_input_via_output(T("D"), dv.term, dv)
    assert ref.n == 3 and ref.f0_rejects


def test_refute_input_preconditions():
    d = witnesses.nat_alpha_witness()
    with pytest.raises(ValueError):
        refute_input_via_output(T("O -> O"), d.term, d)
    with pytest.raises(ValueError):
        refute_input_via_output(T("N -> N"), P(r"\x. x"), d)
    applied = lam(ALPHA, "x", O, lambda c, x: ax(c, x))
    with pytest.raises(ValueError):
        refute_input_via_output(T("N -> N"), P(r"\x. alpha x"), applied)
    with pytest.raises(InvalidDerivationError):
        refute_input_via_output(T("D"), d.term, d)
