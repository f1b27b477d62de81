"""Seeded random generators for types, terms and judgments.

Every function takes a :class:`random.Random` so runs are reproducible;
:func:`rng` builds one from a seed.
"""
from __future__ import annotations

import random
from typing import Optional

from .classifiers import ends_with
from .syntax import (
    Abs, App, Arrow, Atom, Context, Forall, Term, TVar, Type, Var,
    free_type_vars, term_size, type_size,
)
from .systems import check_f0, strip_prefix

DEFAULT_SEED = 20240601

TYPE_VARS = ("X", "Y", "Z", "W")


def rng(seed: Optional[int] = None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


# ---------------------------------------------------------------------------
# Types

def random_type(r: random.Random, max_size: int, names=TYPE_VARS, atoms=(),
                quantifiers: bool = True, proper: bool = True) -> Type:
    """A random type with at most ``max_size`` nodes.

    With ``proper`` set a quantifier is only kept when its variable occurs
    in the body.
    """
    leaves = [TVar(n) for n in names] + [Atom(a) for a in atoms]

    def go(budget: int) -> Type:
        if budget < 3 or r.random() < 0.3:
            return r.choice(leaves)
        if quantifiers and budget >= 3 and r.random() < 0.25:
            body = go(budget - 1)
            v = r.choice(names)
            if proper and v not in free_type_vars(body):
                return body
            return Forall(v, body)
        left_budget = r.randint(1, budget - 2)
        return Arrow(go(left_budget), go(budget - 1 - left_budget))

    return go(max_size)


def random_proper_type_with(r: random.Random, var: str, max_size: int, names=TYPE_VARS) -> Type:
    """A proper type in which ``var`` occurs free."""
    while True:
        a = random_type(r, max_size, names)
        if var in free_type_vars(a) and type_size(a) <= max_size:
            return a


def random_ending_with(r: random.Random, var: str, max_size: int, names=TYPE_VARS) -> Type:
    """A proper type that ends with ``var``."""
    others = [n for n in names if n != var]

    def go(budget: int) -> Type:
        if budget < 3 or r.random() < 0.3:
            return TVar(var)
        if r.random() < 0.25:
            body = go(budget - 1)
            v = r.choice(others)
            return Forall(v, body) if v in free_type_vars(body) else body
        lb = r.randint(1, budget - 2)
        return Arrow(random_type(r, lb, names), go(budget - 1 - lb))

    a = go(max_size)
    assert ends_with(a, var)
    return a


def _prefix(r: random.Random, body: Type, avoid: str, names) -> Type:
    for v in r.sample([n for n in names if n != avoid], k=r.randint(0, 2)):
        if v in free_type_vars(body):
            body = Forall(v, body)
    return body


def arrow_chain_family(r: random.Random, var: str, n: int, final: Type, arg_gen, names=TYPE_VARS) -> tuple:
    """``∀X0(A1 -> ∀X1(A2 -> ... -> (An -> ∀Xn final)))`` and its ``Ai``."""
    parts = [arg_gen(i) for i in range(n)]
    a = _prefix(r, final, var, names)
    for part in reversed(parts):
        a = _prefix(r, Arrow(part, a), var, names)
    return a, parts


# ---------------------------------------------------------------------------
# Terms

def random_normal_term(r: random.Random, max_size: int, free=("u", "v"), binders=("a", "b", "c")) -> Term:
    """A random beta-normal term over the given free variables."""
    def go(budget: int, scope: tuple) -> Term:
        heads = list(free) + list(scope)
        if budget >= 2 and r.random() < 0.3:
            v = r.choice(binders)
            return Abs(v, go(budget - 1, scope + (v,)))
        t: Term = Var(r.choice(heads))
        budget -= 1
        while budget >= 2 and r.random() < 0.5:
            arg_budget = r.randint(1, budget - 1)
            t = App(t, go(arg_budget, scope))
            budget -= arg_budget + 1
        return t

    return go(max_size, ())


def random_simple_term(r: random.Random, max_args: int = 2, heads=("d", "e"), free=("u", "v")) -> Term:
    """``(h) u1 ... uk`` with a variable head and normal arguments."""
    t: Term = Var(r.choice(heads))
    for _ in range(r.randint(0, max_args)):
        t = App(t, random_normal_term(r, 4, free + tuple(heads)))
    return t


# ---------------------------------------------------------------------------
# Probe families for the transformers

def ends_with_family(r: random.Random, var: str = "X", max_arity: int = 3):
    """``(A, delta, args)`` with ``A`` ending with ``var`` and ``r`` in {n-1, n, n+1}."""
    n = r.randint(0, max_arity)
    a, _ = arrow_chain_family(r, var, n, TVar(var), lambda i: random_type(r, 5))
    count = max(0, n + r.choice((-1, 0, 1)))
    args = [random_simple_term(r, 1, heads=("p", "q")) for _ in range(count)]
    return a, random_simple_term(r), args


def argument_ends_with_family(r: random.Random, var: str = "X", max_arity: int = 3):
    """``(A, delta, args)`` with ``A = ...(An -> ∀Xn Y)``, ``Y != var``, some ``Ai`` ending with ``var``."""
    n = r.randint(1, max_arity)
    hit = r.randrange(n)
    final = TVar(r.choice([v for v in TYPE_VARS if v != var]))

    def arg(i):
        return random_ending_with(r, var, 5) if i == hit else random_type(r, 5)

    a, _ = arrow_chain_family(r, var, n, final, arg)
    count = max(0, n + r.choice((-1, 0, 1)))
    args = [random_simple_term(r, 1, heads=("p", "q")) for _ in range(count)]
    return a, random_simple_term(r), args


# ---------------------------------------------------------------------------
# F0 judgments

class _Stuck(Exception):
    pass


def random_f0_judgment(r: random.Random, max_depth: int = 5, ctx_size: int = 3, type_size_cap: int = 7,
                       min_size: int = 3, attempts: int = 500):
    """A random ``(ctx, t, a)`` accepted by F0.

    Spine steps only use context entries whose type ends *syntactically*
    (not merely up to alpha) in the goal, so the quantifier erasure of the
    judgment is typable in S.
    """
    for _ in range(attempts):
        ctx = Context([(f"c{i}", random_type(r, type_size_cap, atoms=("O",)))
                       for i in range(r.randint(1, ctx_size))])
        goal = _goal_from(r, ctx, type_size_cap)
        counter = [0]
        try:
            t = _inhabit(r, ctx, goal, max_depth, counter)
        except _Stuck:
            continue
        if term_size(t) >= min_size and check_f0(ctx, t, goal):
            return ctx, t, goal
    raise RuntimeError("no judgment generated; relax the bounds")


def _goal_from(r: random.Random, ctx: Context, cap: int) -> Type:
    _, b = r.choice(list(ctx))
    while isinstance(b, Arrow) and r.random() < 0.5:
        b = b.right
    while r.random() < 0.6:
        b = Arrow(random_type(r, max(1, cap // 2), atoms=("O",)), b)
        # generalize over a variable the context does not mention
        spare = free_type_vars(b) - ctx.free_type_vars()
        if spare and r.random() < 0.4:
            b = Forall(r.choice(sorted(spare)), b)
    return b


def _inhabit(r: random.Random, ctx: Context, goal: Type, depth: int, counter) -> Term:
    if depth <= 0:
        raise _Stuck
    names, body = strip_prefix(ctx, goal)
    options = []
    if isinstance(body, Arrow):
        options.append(None)
    for name, b in ctx:
        doms = []
        while True:
            if b == goal:
                options.append((name, tuple(doms)))
            if not isinstance(b, Arrow):
                break
            doms.append(b.left)
            b = b.right
    if not options:
        raise _Stuck
    choice = r.choice(options)
    if choice is None:
        counter[0] += 1
        x = f"x{counter[0]}"
        inner = _inhabit(r, ctx.extend(x, body.left), body.right, depth - 1, counter)
        return Abs(x, inner)
    name, doms = choice
    t: Term = Var(name)
    for d in doms:
        t = App(t, _inhabit(r, ctx, d, depth - 1, counter))
    return t
