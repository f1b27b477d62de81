"""Hand-built System F derivations that the F0 search cannot produce.

Each needs at least one ``forall_e`` step.  The same derivations ship as
JSON under ``sysfdata/data`` and :func:`load` reads them back.
"""
from __future__ import annotations

import json
from importlib import resources

from .classifiers import NAT, church_nat, godel_translate, neg
from .derivation import Derivation, app, ax, find_error, gen, inst, lam
from .parsing import parse_term
from .syntax import Arrow, Context, Forall, O, TVar, alpha_eq
from .systems import derive_f0

X = TVar("X")

NAT_ALPHA_TERM = parse_term(r"\n. \x. \z. (((n) \y. x) \x. x) alpha")
D_TERM = parse_term(r"\x. (x) \y. y")
D_VARIANT_TERM = parse_term(r"\x. (x) alpha")

ZERO_STORE = parse_term(r"\f. (f) \x. \s. x")
SUCC_STORE = parse_term(r"\h. \f. (h) \n. (f) ((\n. \x. \s. s (n x s)) n)")
STORAGE_OPERATOR_N = parse_term(
    r"\v. \f. (((v) \f. (f) \x. \s. x) \h. \f. (h) \n. (f) ((\n. \x. \s. s (n x s)) n)) f")


def _d_domain():
    return Forall("Y", Arrow(TVar("Y"), X))


def d_separation() -> Derivation:
    """``|- \\x. (x) \\y. y : D``, instantiating ``x`` at ``Id``."""
    # X is free in the context, so Id is written with a fresh bound variable
    ident = Forall("Z", Arrow(TVar("Z"), TVar("Z")))
    body = lam(Context(), "x", _d_domain(), lambda c, x: app(
        inst(ax(c, x), ident),
        gen(lam(c, "y", TVar("Z"), lambda c1, y: ax(c1, y)), "Z")))
    return gen(body, "X")


def d_variant() -> Derivation:
    """``alpha : O |- \\x. (x) alpha : D``."""
    ctx = Context([("alpha", O)])
    body = lam(ctx, "x", _d_domain(), lambda c, x: app(inst(ax(c, x), O), ax(c, "alpha")))
    return gen(body, "X")


def nat_alpha_witness() -> Derivation:
    """``alpha : O |- \\n.\\x.\\z. (((n) \\y. x) \\x. x) alpha : N -> N``."""
    ctx = Context([("alpha", O)])
    ox = Arrow(O, X)

    def inner(c, n, x, z):
        head = inst(ax(c, n), ox)
        const = lam(c, "y", O, lambda c1, _: ax(c1, x))
        ident = lam(c, "x", ox, lambda c1, v: ax(c1, v))
        return app(app(app(head, const), ident), ax(c, "alpha"))

    return lam(ctx, "n", NAT, lambda c, n: gen(
        lam(c, "x", X, lambda c1, x: lam(c1, "z", Arrow(X, X), lambda c2, z: inner(c2, n, x, z))),
        "X"))


def succ_derivation(ctx: Context) -> Derivation:
    """``ctx |- \\n.\\x.\\s. (s)((n) x s) : N -> N``; ``ctx`` must not mention ``X``."""
    def body(c, n):
        return gen(lam(c, "x", X, lambda c1, x: lam(c1, "s", Arrow(X, X), lambda c2, s: app(
            ax(c2, s), app(app(inst(ax(c2, n), X), ax(c2, x)), ax(c2, s))))), "X")

    return lam(ctx, "n", NAT, body)


def storage_operator_n() -> Derivation:
    """``|- T : N* -> ¬¬N`` for the iteration-based storage operator on N."""
    not_n = neg(NAT)
    not_not_n = neg(not_n)

    def zero(c):
        return lam(c, "f", not_n, lambda c1, f: app(ax(c1, f), derive_f0(c1, church_nat(0), NAT)))

    def step(c):
        def cont(c2, f):
            return lambda c3, n: app(ax(c3, f), app(succ_derivation(c3), ax(c3, n)))

        return lam(c, "h", not_not_n, lambda c1, h: lam(c1, "f", not_n, lambda c2, f: app(
            ax(c2, h), lam(c2, "n", NAT, cont(c2, f)))))

    def body(c, v):
        return lam(c, "f", not_n, lambda c1, f: app(
            app(app(inst(ax(c1, v), not_n), zero(c1)), step(c1)), ax(c1, f)))

    d = lam(Context(), "v", godel_translate(NAT), body)
    assert alpha_eq(d.term, STORAGE_OPERATOR_N)
    return d


BUILDERS = {
    "d_separation": d_separation,
    "d_variant": d_variant,
    "nat_alpha_witness": nat_alpha_witness,
    "storage_operator_n": storage_operator_n,
}


def load(name: str) -> Derivation:
    """Read a shipped derivation by name (a key of :data:`BUILDERS`)."""
    if name not in BUILDERS:
        raise KeyError(name)
    text = resources.files("sysfdata").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return Derivation.from_json(json.loads(text))


def dump_all(directory) -> None:
    """Regenerate the shipped JSON files."""
    from pathlib import Path
    out = Path(directory)
    for name, build in BUILDERS.items():
        d = build()
        assert find_error(d) is None, name
        (out / f"{name}.json").write_text(d.dumps(indent=1) + "\n", encoding="utf-8")
