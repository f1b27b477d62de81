"""Beta reduction: leftmost-outermost normalization and weak head reduction.

Redex positions are root-to-redex paths written as strings over
``L`` (function of an application), ``R`` (argument) and ``B`` (body of
an abstraction).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .syntax import Abs, App, Term, Var, alpha_eq, subst_term

FULL = "full"
WEAK_HEAD = "weak-head"

NORMALIZED = "normalized"
WHNF = "whnf-reached"
FUEL_EXHAUSTED = "fuel-exhausted"

DEFAULT_NORMALIZE_FUEL = 10_000
DEFAULT_WHNF_FUEL = 1_000


def contract(redex: Term) -> Term:
    if not (isinstance(redex, App) and isinstance(redex.fun, Abs)):
        raise ValueError("not a beta-redex")
    return subst_term(redex.fun.body, {redex.fun.var: redex.arg})


def is_normal(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            if isinstance(u.fun, Abs):
                return False
            stack.append(u.fun)
            stack.append(u.arg)
        elif isinstance(u, Abs):
            stack.append(u.body)
    return True


def head_decompose(t: Term):
    """Split ``t`` into its head and the maximal list of arguments."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_simple(t: Term) -> bool:
    """``(x) u1 ... un`` with ``x`` a variable and every ``ui`` normal."""
    head, args = head_decompose(t)
    return isinstance(head, Var) and all(is_normal(a) for a in args)


def subterm(t: Term, path: str) -> Term:
    for step in path:
        if step == "L":
            t = t.fun
        elif step == "R":
            t = t.arg
        else:
            t = t.body
    return t


def replace_at(t: Term, path: str, new: Term) -> Term:
    if not path:
        return new
    step, rest = path[0], path[1:]
    if step == "L":
        return App(replace_at(t.fun, rest, new), t.arg)
    if step == "R":
        return App(t.fun, replace_at(t.arg, rest, new))
    return Abs(t.var, replace_at(t.body, rest, new))


def weak_head_redex(t: Term):
    """Path of the weak head redex of ``t``, or ``None`` in weak head normal form."""
    path = ""
    head = t
    while isinstance(head, App):
        head = head.fun
        path += "L"
    if isinstance(head, Var) or not path:
        return None
    return path[:-1]


def leftmost_redex(t: Term):
    """Path of the leftmost-outermost redex, or ``None`` if ``t`` is normal."""
    stack = [(t, "")]
    while stack:
        u, path = stack.pop()
        if isinstance(u, App):
            if isinstance(u.fun, Abs):
                return path
            stack.append((u.arg, path + "R"))
            stack.append((u.fun, path + "L"))
        elif isinstance(u, Abs):
            stack.append((u.body, path + "B"))
    return None


def weak_head_step(t: Term):
    path = weak_head_redex(t)
    if path is None:
        return None
    return replace_at(t, path, contract(subterm(t, path)))


@dataclass(frozen=True)
class Step:
    strategy: str
    path: str
    result: Term


@dataclass
class ReductionTrace:
    initial: Term
    steps: list = field(default_factory=list)
    status: str = NORMALIZED

    @property
    def final(self) -> Term:
        return self.steps[-1].result if self.steps else self.initial

    def replay(self) -> bool:
        """Recheck that every step contracts exactly the redex at its path."""
        cur = self.initial
        for s in self.steps:
            redex = subterm(cur, s.path)
            if not (isinstance(redex, App) and isinstance(redex.fun, Abs)):
                return False
            expected = leftmost_redex(cur) if s.strategy == FULL else weak_head_redex(cur)
            if expected != s.path:
                return False
            cur = replace_at(cur, s.path, contract(redex))
            if not alpha_eq(cur, s.result):
                return False
        return True

    def to_json(self) -> dict:
        from .parsing import print_term
        return {
            "initial": print_term(self.initial),
            "steps": [
                {"strategy": s.strategy, "path": s.path, "result": print_term(s.result)}
                for s in self.steps
            ],
            "status": self.status,
            "final": print_term(self.final),
        }

    @classmethod
    def from_json(cls, data) -> "ReductionTrace":
        from .parsing import parse_term
        if isinstance(data, str):
            data = json.loads(data)
        steps = [Step(s["strategy"], s["path"], parse_term(s["result"])) for s in data["steps"]]
        return cls(parse_term(data["initial"]), steps, data["status"])


def weak_head_reduce(t: Term, fuel: int = DEFAULT_WHNF_FUEL) -> ReductionTrace:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    trace = ReductionTrace(t)
    cur = t
    while True:
        path = weak_head_redex(cur)
        if path is None:
            trace.status = WHNF
            return trace
        if len(trace.steps) >= fuel:
            trace.status = FUEL_EXHAUSTED
            return trace
        cur = replace_at(cur, path, contract(subterm(cur, path)))
        trace.steps.append(Step(WEAK_HEAD, path, cur))


def normalize(t: Term, fuel: int = DEFAULT_NORMALIZE_FUEL, record: bool = True) -> ReductionTrace:
    """Leftmost-outermost reduction to beta-normal form, at most ``fuel`` steps.

    With ``record=False`` only the last step is kept, which saves memory on
    long reductions; ``len(trace.steps)`` is then not the step count.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    trace = ReductionTrace(t)
    cur = t
    count = 0
    while True:
        path = leftmost_redex(cur)
        if path is None:
            trace.status = NORMALIZED
            return trace
        if count >= fuel:
            trace.status = FUEL_EXHAUSTED
            return trace
        cur = replace_at(cur, path, contract(subterm(cur, path)))
        count += 1
        step = Step(FULL, path, cur)
        if record:
            trace.steps.append(step)
        else:
            trace.steps[:] = [step]


def normal_form(t: Term, fuel: int = DEFAULT_NORMALIZE_FUEL) -> Term:
    """The beta-normal form of ``t``; raises if ``fuel`` runs out."""
    trace = normalize(t, fuel, record=False)
    if trace.status != NORMALIZED:
        raise FuelExhausted(f"no normal form within {fuel} steps")
    return trace.final


class FuelExhausted(RuntimeError):
    pass
