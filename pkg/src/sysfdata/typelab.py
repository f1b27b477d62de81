"""Bounded F0 inhabitation and the input/output-type refuters.

The search is goal directed because the F0 rules are syntax directed on
normal terms: strip the quantifier prefix and introduce an abstraction, or
pick a context variable whose type is an arrow chain ending in the goal.
Derivation height counts every rule node, including one ``forall_i`` per
stripped quantifier.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .classifiers import is_closed, lg, pn
from .derivation import (
    Derivation, conclusion_matches, find_error, lam, weaken,
)
from .parsing import _canon_name, print_term, print_type
from .reduction import is_normal
from .syntax import (
    Abs, App, Arrow, Context, O, Term, Type, Var,
    alpha_eq_type, fresh_name, subst_term, term_key, term_names, term_size,
    type_atoms,
)
from .systems import NotNormalError, check_f0, check_s, derive_f0, erase_type, strip_prefix


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int
    max_terms: int = 10_000
    size_cap: Optional[int] = None

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_terms <= 0:
            raise ValueError("budget bounds must be positive")
        if self.size_cap is not None and self.size_cap <= 0:
            raise ValueError("size cap must be positive")

    def to_json(self):
        return {"max_depth": self.max_depth, "max_terms": self.max_terms,
                "size_cap": self.size_cap}


@dataclass
class Enumeration:
    terms: tuple
    complete: bool

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


class _Overflow(Exception):
    pass


def _order(t: Term):
    return (term_size(t), print_term(t, canonical=True))


def enumerate_f0(ctx: Context, a: Type, budget: SearchBudget) -> Enumeration:
    """All normal ``t`` with ``ctx |-F0 t : a`` within the budget, modulo alpha.

    ``complete`` is false when ``max_terms`` cut the search short.
    """
    memo: dict = {}
    size_cap = budget.size_cap if budget.size_cap is not None else 10 ** 9
    limit = budget.max_terms

    def search(ctx: Context, goal: Type, depth: int, size: int) -> list:
        if depth <= 0 or size <= 0:
            return []
        key = (ctx.key(), _goal_key(goal), depth, size)
        if key in memo:
            return memo[key]
        out = []
        names, body = strip_prefix(ctx, goal)
        k = len(names)
        if isinstance(body, Arrow) and depth - k - 1 > 0:
            x = _binder(ctx)
            inner = ctx.extend(x, body.left)
            for t, h, s in search(inner, body.right, depth - k - 1, size - 1):
                out.append((Abs(x, t), h + k + 1, s + 1))
        for name, b in ctx:
            doms = []
            while True:
                if alpha_eq_type(b, goal):
                    n = len(doms)
                    if 1 + n <= depth and 1 + n <= size:
                        for args, h, s in _args(ctx, doms, depth, size - 1 - n):
                            out.append((_spine(name, args), max(1 + n, h), s + 1 + n))
                if not isinstance(b, Arrow):
                    break
                doms.append(b.left)
                b = b.right
        if len(out) > limit:
            raise _Overflow
        memo[key] = out
        return out

    def _args(ctx, doms, depth, size):
        # Height bound of argument i (0-based) is depth - (n - i).
        n = len(doms)
        if n == 0:
            yield (), 0, 0
            return
        partial = [((), 0, 0)]
        for i, dom in enumerate(doms):
            remaining_args = n - i - 1
            nxt = []
            for args, h, s in partial:
                room = size - s - remaining_args
                for t, th, ts in search(ctx, dom, depth - (n - i), room):
                    nxt.append((args + (t,), max(h, n - i + th), s + ts))
            partial = nxt
            if len(partial) > limit:
                raise _Overflow
        yield from partial

    complete = True
    try:
        found = search(ctx, a, budget.max_depth, size_cap)
    except _Overflow:
        found = []
        complete = False
    unique = {}
    for t, _, _ in found:
        unique.setdefault(term_key(t), t)
    terms = sorted(unique.values(), key=_order)
    if len(terms) > limit:
        terms = terms[:limit]
        complete = False
    return Enumeration(tuple(terms), complete)


def _goal_key(goal: Type):
    from .syntax import type_key
    return type_key(goal)


def _binder(ctx: Context) -> str:
    return _canon_name(len(ctx), ctx.names())


def _spine(name: str, args) -> Term:
    t: Term = Var(name)
    for a in args:
        t = App(t, a)
    return t


# ---------------------------------------------------------------------------
# Verdicts

@dataclass
class NoCounterexampleUpTo:
    budget: SearchBudget
    complete: bool = True
    searched: int = 0

    kind = "no-counterexample"

    def to_json(self):
        return {"verdict": self.kind, "budget": self.budget.to_json(),
                "complete": self.complete, "searched": self.searched}


@dataclass
class Counterexample:
    term: Term
    evidence: Derivation
    source: str = "F0-search"

    kind = "counterexample"

    def to_json(self):
        return {"verdict": self.kind, "term": print_term(self.term),
                "source": self.source, "evidence": self.evidence.to_json()}


ProbeVerdict = Union[NoCounterexampleUpTo, Counterexample]


class InvalidDerivationError(ValueError):
    pass


def _require_closed(s: Type):
    if not is_closed(s):
        raise ValueError(f"{print_type(s)} is not closed")


def _require_output_candidate(s: Type):
    _require_closed(s)
    if O.name in type_atoms(s):
        raise ValueError("the constant O must not occur in the type")


def probe_output(s: Type, budget: SearchBudget, alpha: str = "alpha",
                 witnesses=()) -> ProbeVerdict:
    """Look for a normal ``t`` containing ``alpha`` with ``alpha : O |- t : s``.

    The search covers F0 only; ``witnesses`` are ``(term, derivation)`` pairs
    checked as full System F evidence first.  A negative answer holds only
    up to the budget.  ``s`` may mention ``O``; it is then trivially not an
    output type, and the search shows it.
    """
    _require_closed(s)
    checked = [check_output_witness(s, t, d, alpha) for t, d in witnesses]
    if checked:
        return checked[0]
    ctx = Context([(alpha, O)])
    found = enumerate_f0(ctx, s, budget)
    for t in found:
        if alpha in t.fv:
            return Counterexample(t, derive_f0(ctx, t, s))
    return NoCounterexampleUpTo(budget, found.complete, len(found))


def check_output_witness(s: Type, t: Term, d: Derivation, alpha: str = "alpha") -> Counterexample:
    """Validate an explicit witness that ``s`` is not an output type."""
    _require_closed(s)
    if not is_normal(t):
        raise NotNormalError("witness must be normal")
    if alpha not in t.fv:
        raise ValueError(f"{alpha} does not occur free in the witness")
    err = find_error(d)
    if err is not None:
        raise InvalidDerivationError(str(err))
    if not conclusion_matches(d, Context([(alpha, O)]), t, s):
        raise InvalidDerivationError("derivation does not conclude alpha : O |- t : s")
    return Counterexample(t, d, "explicit-derivation")


def lift_output_counterexample(e: Type, d: Derivation, alpha: str = "alpha") -> Derivation:
    """From ``alpha : O |- t : F`` derive ``alpha : O |- \\y. t : E -> F``."""
    used = set()
    for n in d.nodes():
        used |= term_names(n.term) | set(n.ctx.names())
    y = fresh_name("y", used)
    weakened = weaken(d, y, e)
    ctx = d.ctx
    return lam(ctx, y, e, lambda c, _: Derivation(
        weakened.rule, c, weakened.term, weakened.type, weakened.premises,
        weakened.instantiation))


def check_input_counterexample(e: Type, t: Term, d: Derivation) -> bool:
    """Whether ``(t, d)`` shows that ``e`` is not an input type.

    True iff ``d`` proves ``|-F t : e`` while F0 rejects the same judgment.
    """
    if not is_normal(t):
        raise NotNormalError("t must be normal")
    err = find_error(d)
    if err is not None:
        raise InvalidDerivationError(str(err))
    if not conclusion_matches(d, Context(), t, e):
        raise InvalidDerivationError("derivation does not conclude |- t : e")
    return not check_f0(Context(), t, e)


@dataclass
class Refutation:
    n: int
    u: Term
    f0_rejects: bool
    s_rejects: bool

    def to_json(self):
        return {"n": self.n, "u": print_term(self.u), "f0_rejects": self.f0_rejects,
                "s_rejects": self.s_rejects}


def alpha_applied(t: Term, alpha: str) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            if isinstance(u.fun, Var) and u.fun.name == alpha:
                return True
            stack.extend((u.fun, u.arg))
        elif isinstance(u, Abs) and u.var != alpha:
            stack.append(u.body)
    return False


def refute_input_via_output(e: Type, t: Term, d: Derivation, alpha: str = "alpha") -> Refutation:
    """Turn an output counterexample for ``e`` into an input counterexample.

    Substitutes ``p_n`` with ``n = Lg(e) + 1`` for ``alpha``; F0 must then
    reject the closed normal result although F types it.
    """
    _require_output_candidate(e)
    if not is_normal(t):
        raise NotNormalError("t must be normal")
    if alpha not in t.fv:
        raise ValueError(f"{alpha} is not free in t")
    if alpha_applied(t, alpha):
        raise ValueError(f"{alpha} occurs in applied position")
    err = find_error(d)
    if err is not None:
        raise InvalidDerivationError(str(err))
    if not conclusion_matches(d, Context([(alpha, O)]), t, e):
        raise InvalidDerivationError("derivation does not conclude alpha : O |- t : e")
    n = lg(e) + 1
    u = subst_term(t, {alpha: pn(n)})
    assert is_normal(u), "substituting for a non-applied variable keeps normality"
    return Refutation(
        n, u,
        f0_rejects=not check_f0(Context(), u, e),
        s_rejects=not check_s(Context(), u, erase_type(e)),
    )
