"""Decision procedures for F0 and the simple system S, and quantifier erasure.

F0 is System F without instantiation.  On beta-normal terms its typing
rules are syntax directed:

* a variable or spine ``(x) t1 ... tn`` has type ``A`` iff the context type
  of ``x`` is literally ``B1 -> ... -> Bn -> A`` and each ``ti : Bi``;
* an abstraction ``\\x. t`` has type ``A`` iff ``A = ∀X1...∀Xk(B -> C)``
  and ``t : C`` under ``x : B``.

:func:`derive_f0` returns the derivation it found, so every positive
answer comes with a certificate that :func:`check_derivation_f` accepts.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Optional

from .classifiers import is_quantifier_free
from .derivation import ARROW_E, ARROW_I, AX, FORALL_I, Derivation
from .reduction import head_decompose, is_normal
from .syntax import (
    Abs, App, Arrow, Atom, Context, Forall, Term, TVar, Type, Var,
    alpha_eq_type, fresh_name, subst_term, subst_type,
)


class NotNormalError(ValueError):
    """The F0 decision procedure only applies to beta-normal terms."""


class QuantifierError(ValueError):
    """A quantified type was given to the simple system S."""


class NotDerivableError(ValueError):
    pass


@dataclass(frozen=True)
class Judgment:
    ctx: Context
    term: Term
    type: Type
    system: str = "F"

    def __str__(self):
        from .parsing import print_judgment
        return print_judgment(self.ctx, self.term, self.type)


def check_f0(ctx: Context, t: Term, a: Type) -> bool:
    return derive_f0(ctx, t, a) is not None


def derive_f0(ctx: Context, t: Term, a: Type) -> Optional[Derivation]:
    """An F0 derivation of ``ctx |- t : a``, or ``None`` if there is none."""
    if not is_normal(t):
        raise NotNormalError("F0 typability is decided for normal terms only")
    return _f0(ctx, t, a)


def _f0(ctx: Context, t: Term, a: Type) -> Optional[Derivation]:
    if isinstance(t, Abs):
        return _f0_abs(ctx, t, a)
    head, args = head_decompose(t)
    b = ctx.lookup(head.name)
    if b is None:
        return None
    doms = []
    for _ in args:
        if not isinstance(b, Arrow):
            return None
        doms.append(b.left)
        b = b.right
    if not alpha_eq_type(b, a):
        return None
    d = Derivation(AX, ctx, head, ctx[head.name])
    rest = ctx[head.name]
    for arg, dom in zip(args, doms):
        sub = _f0(ctx, arg, dom)
        if sub is None:
            return None
        rest = rest.right
        d = Derivation(ARROW_E, ctx, App(d.term, arg), rest, (d, sub))
    return d


def strip_prefix(ctx: Context, a: Type):
    """Strip the quantifier prefix of ``a``, renaming variables free in ``ctx``.

    Returns ``(names, body)`` with ``a`` alpha-equal to ``∀names. body``.
    """
    names = []
    ctx_ftv = ctx.free_type_vars()
    while isinstance(a, Forall):
        var, body = a.var, a.body
        if var in ctx_ftv:
            new = fresh_name(var, ctx_ftv | set(names) | _all_vars(body))
            body = subst_type(body, TVar(new), var)
            var = new
        names.append(var)
        a = body
    return names, a


def _all_vars(a: Type) -> set:
    from .syntax import type_names
    return type_names(a)


def _f0_abs(ctx: Context, t: Abs, a: Type) -> Optional[Derivation]:
    names, body = strip_prefix(ctx, a)
    if not isinstance(body, Arrow):
        return None
    x, inner_term = t.var, t.body
    if x in ctx:
        x = fresh_name(x, ctx.names() | t.fv)
        inner_term = subst_term(t.body, {t.var: Var(x)})
    sub = _f0(ctx.extend(x, body.left), inner_term, body.right)
    if sub is None:
        return None
    d = Derivation(ARROW_I, ctx, t, body, (sub,))
    for name in reversed(names):
        d = Derivation(FORALL_I, ctx, t, Forall(name, d.type), (d,))
    return d


def derivation_f0_height(ctx: Context, t: Term, a: Type) -> Optional[int]:
    d = derive_f0(ctx, t, a)
    return None if d is None else d.height()


# ---------------------------------------------------------------------------
# The simple system S

def _require_quantifier_free(ctx: Context, a: Type):
    if not is_quantifier_free(a) or not all(is_quantifier_free(b) for _, b in ctx):
        raise QuantifierError("system S only has quantifier-free types")


def check_s(ctx: Context, t: Term, a: Type) -> bool:
    """Derivability of ``ctx |- t : a`` in the simple system S.

    Normal terms use the syntax-directed rules; other terms are checked by
    first-order unification over the types of bound variables.
    """
    _require_quantifier_free(ctx, a)
    if is_normal(t):
        return _f0(ctx, t, a) is not None
    return check_s_unify(ctx, t, a)


class _Meta:
    __slots__ = ("id",)

    def __init__(self, i):
        self.id = i

    def __repr__(self):
        return f"?{self.id}"


def check_s_unify(ctx: Context, t: Term, a: Type) -> bool:
    """S-typability of any term by constraint solving.

    Type variables of ``ctx`` and ``a`` are rigid; only the (unwritten)
    types of bound variables are solved for.
    """
    _require_quantifier_free(ctx, a)
    ids = count()
    sol: dict = {}

    def resolve(x):
        while isinstance(x, _Meta) and x.id in sol:
            x = sol[x.id]
        return x

    def occurs(m, x) -> bool:
        x = resolve(x)
        if isinstance(x, _Meta):
            return x.id == m.id
        if isinstance(x, tuple):
            return occurs(m, x[0]) or occurs(m, x[1])
        return False

    def unify(x, y) -> bool:
        x, y = resolve(x), resolve(y)
        if isinstance(x, _Meta):
            if isinstance(y, _Meta) and y.id == x.id:
                return True
            if occurs(x, y):
                return False
            sol[x.id] = y
            return True
        if isinstance(y, _Meta):
            return unify(y, x)
        if isinstance(x, tuple) and isinstance(y, tuple):
            return unify(x[0], y[0]) and unify(x[1], y[1])
        return x == y

    def lift(b: Type):
        if isinstance(b, Arrow):
            return (lift(b.left), lift(b.right))
        return b  # TVar / Atom are rigid constants

    def infer(env: dict, u: Term):
        if isinstance(u, Var):
            return env.get(u.name)
        if isinstance(u, Abs):
            m = _Meta(next(ids))
            body = infer({**env, u.var: m}, u.body)
            return None if body is None else (m, body)
        f = infer(env, u.fun)
        if f is None:
            return None
        x = infer(env, u.arg)
        if x is None:
            return None
        r = _Meta(next(ids))
        return r if unify(f, (x, r)) else None

    env = {n: lift(b) for n, b in ctx}
    got = infer(env, t)
    return got is not None and unify(got, lift(a))


# ---------------------------------------------------------------------------
# Erasure

def erase_type(a: Type) -> Type:
    """Drop every quantifier, leaving the formerly bound variables free."""
    if isinstance(a, (TVar, Atom)):
        return a
    if isinstance(a, Arrow):
        return Arrow(erase_type(a.left), erase_type(a.right))
    return erase_type(a.body)


def erase_context(ctx: Context) -> Context:
    return ctx.map_types(erase_type)


def f0_to_s(j: Judgment) -> Judgment:
    """Map an F0-derivable judgment to its erasure, derivable in S."""
    if not check_f0(j.ctx, j.term, j.type):
        raise NotDerivableError("judgment is not derivable in F0")
    return Judgment(erase_context(j.ctx), j.term, erase_type(j.type), "S")
