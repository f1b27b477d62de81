import os

from hypothesis import HealthCheck, settings, strategies as st

from sysfdata.syntax import Abs, App, Arrow, Atom, Forall, TVar, Var, free_type_vars

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=1500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

NAMES = ("x", "y", "z", "u")
TNAMES = ("X", "Y", "Z")

names = st.sampled_from(NAMES)


def _extend_terms(children):
    return st.one_of(
        st.builds(Abs, names, children),
        st.builds(App, children, children),
    )


terms = st.recursive(st.builds(Var, names), _extend_terms, max_leaves=12)


@st.composite
def normal_terms(draw, free=("x", "y", "z"), max_size=12):
    """Beta-normal terms: abstractions over variable-headed spines."""
    budget = [draw(st.integers(1, max_size))]

    def go(scope, depth):
        if depth < 4 and budget[0] > 1 and draw(st.booleans()):
            v = draw(st.sampled_from(NAMES))
            budget[0] -= 1
            return Abs(v, go(scope + (v,), depth + 1))
        head = Var(draw(st.sampled_from(tuple(free) + scope)))
        budget[0] -= 1
        t = head
        while depth < 4 and budget[0] > 1 and draw(st.integers(0, 2)) == 0:
            budget[0] -= 1
            t = App(t, go(scope, depth + 1))
        return t

    return go((), 0)


def _extend_types(children):
    return st.one_of(
        st.builds(Arrow, children, children),
        st.builds(Forall, st.sampled_from(TNAMES), children),
    )


type_leaves = st.one_of(st.builds(TVar, st.sampled_from(TNAMES)), st.just(Atom("O")))
types = st.recursive(type_leaves, _extend_types, max_leaves=8)
qf_types = st.recursive(type_leaves, lambda c: st.builds(Arrow, c, c), max_leaves=8)


def _proper(a):
    if isinstance(a, (TVar, Atom)):
        return a
    if isinstance(a, Arrow):
        return Arrow(_proper(a.left), _proper(a.right))
    body = _proper(a.body)
    return Forall(a.var, body) if a.var in free_type_vars(body) else body


proper_types = types.map(_proper)


def all_normal_terms(size, scope, free):
    """All normal terms of exactly ``size`` nodes, binders named by depth."""
    if size <= 0:
        return
    if size >= 2:
        v = f"v{len(scope)}"
        for body in all_normal_terms(size - 1, scope + (v,), free):
            yield Abs(v, body)
    for h in free + scope:
        # spine with n arguments uses n App nodes and one Var
        for n in range(0, size):
            for args in _arg_lists(size - 1 - n, n, scope, free):
                t = Var(h)
                for a in args:
                    t = App(t, a)
                yield t


def _arg_lists(total, n, scope, free):
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - (n - 1) + 1):
        for a in all_normal_terms(first, scope, free):
            for rest in _arg_lists(total - first, n - 1, scope, free):
                yield (a,) + rest
