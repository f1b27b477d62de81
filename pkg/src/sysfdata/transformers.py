"""Coercion terms between ``F[G/X]`` and ``F[G°/X]`` and alpha-propagation probes.

For a type ``F``, a variable ``X`` and an instantiation ``G`` the terms
``T_F`` and ``T'_F`` are built by structural recursion:

* ``X`` not free in ``F``: both are ``\\x. x``;
* ``F = X``: ``T = \\x. \\beta. \\g. g x alpha`` and ``T' = \\x. x alpha 1``;
* ``F = C -> D``: ``T = \\x. \\y. T_D (x (T'_C y))``, and dually for ``T'``;
* ``F = ∀Y B``: ``T = \\x. T_B x``.

``alpha`` is a distinguished free variable of type ``O`` and ``1`` is the
boolean ``\\x. \\y. x``.  :func:`certify_transformers` builds System F
derivations of ``alpha : O |- T_F : F[G/X] -> F[G°/X]`` and of the reverse
coercion, following the same recursion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .classifiers import church_bool
from .derivation import Derivation, app, ax, gen, inst, lam
from .parsing import print_term
from .reduction import DEFAULT_NORMALIZE_FUEL, FUEL_EXHAUSTED, head_decompose, is_simple, normalize
from .syntax import (
    Abs, App, Arrow, Context, Forall, O, Term, TVar, Type, Var,
    alpha_eq_type, apps, fresh_name, free_type_vars, rename_bound_apart,
    subst_type, type_names,
)

BINDERS = ("x", "y", "beta", "g")


@dataclass
class TransformerPair:
    for_type: Type
    wrt_var: str
    instantiation: Type
    t_term: Term
    t_prime_term: Term
    alpha: str = "alpha"
    derivations: Optional[tuple] = field(default=None, repr=False)


def _check_alpha(alpha: str):
    if alpha in BINDERS:
        raise ValueError(f"{alpha!r} would be captured by a transformer binder")


def gen_transformers(f: Type, x: str, g: Type, alpha: str = "alpha",
                     certify: bool = True) -> TransformerPair:
    _check_alpha(alpha)
    one = church_bool(True)

    def build(a: Type, prime: bool) -> Term:
        if x not in free_type_vars(a):
            return Abs("x", Var("x"))
        if isinstance(a, TVar):
            if prime:
                return Abs("x", apps(Var("x"), Var(alpha), one))
            return Abs("x", Abs("beta", Abs("g", apps(Var("g"), Var("x"), Var(alpha)))))
        if isinstance(a, Arrow):
            inner = App(Var("x"), App(build(a.left, not prime), Var("y")))
            return Abs("x", Abs("y", App(build(a.right, prime), inner)))
        return Abs("x", App(build(a.body, prime), Var("x")))

    pair = TransformerPair(f, x, g, build(f, False), build(f, True), alpha)
    if certify:
        pair.derivations = certify_transformers(pair)
    return pair


class CertificationError(RuntimeError):
    """The typing derivation could not be built; always a defect."""


def certify_transformers(p: TransformerPair):
    """Derivations of ``alpha:O |- T : F[G/X] -> F[G°/X]`` and ``T' : F[G°/X] -> F[G/X]``."""
    x, g, alpha = p.wrt_var, p.instantiation, p.alpha
    _check_alpha(alpha)
    avoid = {x, "O"} | type_names(g)
    a0 = rename_bound_apart(p.for_type, avoid)
    prod_var = fresh_name("Z", type_names(a0) | type_names(g) | {"O", x})
    z = TVar(prod_var)
    g_and_o = Forall(prod_var, Arrow(Arrow(g, Arrow(O, z)), z))
    g_circ = Arrow(O, g_and_o)

    def with_g(a):
        return subst_type(a, g, x)

    def with_circ(a):
        return subst_type(a, g_circ, x)

    def one(ctx: Context) -> Derivation:
        return lam(ctx, "x", g, lambda c1, a: lam(c1, "y", O, lambda c2, _: ax(c2, a)))

    def cert(a: Type, ctx: Context, prime: bool) -> Derivation:
        src, dst = (with_circ(a), with_g(a)) if prime else (with_g(a), with_circ(a))
        if x not in free_type_vars(a):
            return lam(ctx, "x", src, lambda c, v: ax(c, v))
        if isinstance(a, TVar):
            if prime:
                return lam(ctx, "x", g_circ, lambda c, v: app(
                    inst(app(ax(c, v), ax(c, alpha)), g), one(c)))

            def pair_up(c1, v):
                return lam(c1, "beta", O, lambda c2, _: gen(
                    lam(c2, "g", Arrow(g, Arrow(O, z)), lambda c3, k: app(
                        app(ax(c3, k), ax(c3, v)), ax(c3, alpha))),
                    prod_var))

            return lam(ctx, "x", g, pair_up)
        if isinstance(a, Arrow):
            left_in = with_g(a.left) if prime else with_circ(a.left)

            def body(c1, f):
                return lam(c1, "y", left_in, lambda c2, y: app(
                    cert(a.right, c2, prime),
                    app(ax(c2, f), app(cert(a.left, c2, not prime), ax(c2, y)))))

            return lam(ctx, "x", src, body)
        # Forall: binders were renamed apart, so substitution passes under it
        return lam(ctx, "x", src, lambda c, v: gen(
            app(cert(a.body, c, prime), inst(ax(c, v), TVar(a.var))), a.var))

    ctx0 = Context([(alpha, O)])
    try:
        d_t = cert(a0, ctx0, False)
        d_tp = cert(a0, ctx0, True)
    except ValueError as exc:
        raise CertificationError(str(exc)) from exc
    want_t = Arrow(subst_type(p.for_type, g, x), subst_type(p.for_type, g_circ, x))
    want_tp = Arrow(want_t.right, want_t.left)
    if not (alpha_eq_type(d_t.type, want_t) and alpha_eq_type(d_tp.type, want_tp)):
        raise CertificationError("certified types do not match the statement")
    return d_t, d_tp


certify_lemma31 = certify_transformers


# ---------------------------------------------------------------------------
# Probes

@dataclass
class AlphaProbe:
    term: Term
    nf: Optional[Term]
    status: str
    alpha: str
    alpha_positions: list

    @property
    def alpha_free_in_nf(self) -> bool:
        return bool(self.alpha_positions)

    def has_occurrence_outside_args_of(self, head: str) -> bool:
        return any(head not in occ["argument_of"] for occ in self.alpha_positions)

    def to_json(self) -> dict:
        return {
            "term": print_term(self.term),
            "nf": None if self.nf is None else print_term(self.nf),
            "status": self.status,
            "alpha_free_in_nf": self.alpha_free_in_nf,
            "alpha_positions": self.alpha_positions,
        }


def occurrences(t: Term, name: str) -> list:
    """Free occurrences of ``name`` in ``t``.

    Each record gives the root-to-occurrence ``path`` and ``argument_of``,
    the head variables of the maximal spines ``(h) u1 ... un`` in whose
    arguments the occurrence lies, outermost first.
    """
    out = []

    def go(u: Term, path: str, heads: tuple):
        if isinstance(u, Abs):
            if u.var != name:
                go(u.body, path + "B", heads)
            return
        head, args = head_decompose(u)
        n = len(args)
        hpath = path + "L" * n
        if isinstance(head, Var):
            if head.name == name:
                out.append({"path": hpath, "argument_of": list(heads)})
            inner = heads + (head.name,)
        else:
            go(head, hpath, heads)
            inner = heads
        for i, a in enumerate(args):
            go(a, path + "L" * (n - 1 - i) + "R", inner)

    go(t, "", ())
    return out


def alpha_probe(a: Type, x: str, g: Type, delta: Term, args=(), alpha: str = "alpha",
                fuel: int = DEFAULT_NORMALIZE_FUEL, prime: bool = True) -> AlphaProbe:
    """Normalize ``(T'_A) delta t1 ... tr`` and locate ``alpha`` in the result.

    With ``prime=False`` the coercion ``T_A`` is used instead.
    """
    if not is_simple(delta):
        raise ValueError("delta must be a simple term (x) u1 ... un")
    if x not in free_type_vars(a):
        raise ValueError(f"{x} is not free in the type")
    p = gen_transformers(a, x, g, alpha, certify=False)
    term = apps(p.t_prime_term if prime else p.t_term, delta, *args)
    trace = normalize(term, fuel, record=False)
    if trace.status == FUEL_EXHAUSTED:
        return AlphaProbe(term, None, FUEL_EXHAUSTED, alpha, [])
    nf = trace.final
    return AlphaProbe(term, nf, trace.status, alpha, occurrences(nf, alpha))
