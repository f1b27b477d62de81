"""Explicit typing derivations for System F and its restriction F_F.

System F is Curry-style, so type checking is undecidable; a
:class:`Derivation` records every rule application, which makes checking
a simple local test at each node.  Rule names are ``ax``, ``->i``,
``->e``, ``forall_i`` and ``forall_e``.

The builder functions (:func:`ax`, :func:`lam`, :func:`app`, :func:`inst`,
:func:`gen`) compute conclusions from premises and raise
:class:`BuildError` on misuse.  :func:`check_derivation_f` never trusts
them: it rechecks every node from scratch.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .classifiers import ends_with
from .syntax import (
    Abs, App, Arrow, Context, Forall, Term, TVar, Type, Var,
    alpha_eq, alpha_eq_type, free_type_vars, fresh_name, subst_term,
    subst_type, term_names,
)

AX = "ax"
ARROW_I = "->i"
ARROW_E = "->e"
FORALL_I = "forall_i"
FORALL_E = "forall_e"
RULES = (AX, ARROW_I, ARROW_E, FORALL_I, FORALL_E)

MALFORMED = "malformed"
SIDE_CONDITION = "side-condition"


@dataclass(frozen=True)
class Derivation:
    rule: str
    ctx: Context
    term: Term
    type: Type
    premises: tuple = ()
    instantiation: Optional[Type] = None

    def nodes(self):
        """All nodes, preorder."""
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.premises))

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def uses(self, rule: str) -> bool:
        return any(d.rule == rule for d in self.nodes())

    def to_json(self) -> dict:
        from .parsing import print_context, print_term, print_type
        out = {
            "rule": self.rule,
            "conclusion": {
                "ctx": print_context(self.ctx),
                "term": print_term(self.term),
                "type": print_type(self.type),
            },
        }
        if self.instantiation is not None:
            out["instantiation"] = print_type(self.instantiation)
        out["premises"] = [p.to_json() for p in self.premises]
        return out

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, **kw)

    @classmethod
    def from_json(cls, data, atoms=None, defs=None) -> "Derivation":
        from .parsing import DEFAULT_ATOMS, parse_context, parse_term, parse_type
        if isinstance(data, str):
            data = json.loads(data)
        atoms = DEFAULT_ATOMS if atoms is None else atoms
        concl = data["conclusion"]
        inst = data.get("instantiation")
        return cls(
            rule=data["rule"],
            ctx=parse_context(concl["ctx"], atoms, defs),
            term=parse_term(concl["term"]),
            type=parse_type(concl["type"], atoms, defs),
            premises=tuple(cls.from_json(p, atoms, defs) for p in data.get("premises", [])),
            instantiation=None if inst is None else parse_type(inst, atoms, defs),
        )


# ---------------------------------------------------------------------------
# Builders

class BuildError(ValueError):
    pass


def ax(ctx: Context, name: str) -> Derivation:
    a = ctx.lookup(name)
    if a is None:
        raise BuildError(f"{name} is not bound in the context")
    return Derivation(AX, ctx, Var(name), a)


def lam(ctx: Context, name: str, dom: Type, body: Callable[[Context, str], Derivation]) -> Derivation:
    """``->i``: ``body(ctx', x)`` derives the body under ``ctx' = ctx, x : dom``.

    When ``name`` is already bound in ``ctx`` the premise uses a fresh
    variable ``x`` and the conclusion rebinds it as ``name`` where that is
    capture-free.
    """
    inner_name = name if name not in ctx else fresh_name(name, ctx.names() | {name})
    inner = ctx.extend(inner_name, dom)
    prem = body(inner, inner_name)
    if prem.ctx != inner:
        raise BuildError("body derivation has the wrong context")
    if inner_name == name:
        t = Abs(name, prem.term)
    elif name in prem.term.fv:
        t = Abs(inner_name, prem.term)
    else:
        t = Abs(name, subst_term(prem.term, {inner_name: Var(name)}))
    return Derivation(ARROW_I, ctx, t, Arrow(dom, prem.type), (prem,))


def app(fun: Derivation, arg: Derivation) -> Derivation:
    if fun.ctx != arg.ctx:
        raise BuildError("premises of ->e have different contexts")
    if not isinstance(fun.type, Arrow):
        raise BuildError(f"function type {fun.type} is not an arrow")
    if not alpha_eq_type(fun.type.left, arg.type):
        raise BuildError(f"argument type {arg.type} does not match {fun.type.left}")
    return Derivation(ARROW_E, fun.ctx, App(fun.term, arg.term), fun.type.right, (fun, arg))


def apply_all(fun: Derivation, *args: Derivation) -> Derivation:
    for a in args:
        fun = app(fun, a)
    return fun


def inst(d: Derivation, g: Type) -> Derivation:
    if not isinstance(d.type, Forall):
        raise BuildError(f"cannot instantiate non-quantified type {d.type}")
    return Derivation(FORALL_E, d.ctx, d.term, subst_type(d.type.body, g, d.type.var), (d,), g)


def gen(d: Derivation, var: str) -> Derivation:
    if var in d.ctx.free_type_vars():
        raise BuildError(f"{var} is free in the context")
    return Derivation(FORALL_I, d.ctx, d.term, Forall(var, d.type), (d,))


# ---------------------------------------------------------------------------
# Checking

@dataclass
class DerivationError(Exception):
    """First failing node: ``path`` lists premise indices from the root."""
    path: tuple
    kind: str
    reason: str
    node: Derivation = field(repr=False, default=None)

    def __str__(self):
        where = "root" if not self.path else "premise " + ".".join(map(str, self.path))
        return f"{self.kind} at {where}: {self.reason}"


def ff_side_condition(quantified: Type) -> bool:
    """Side condition of the restricted rule ``(forall_e)_F``.

    For ``∀X A`` with ``A = ∀X0(A1 -> ∀X1(A2 -> ... -> (An -> ∀Xn Y)))``,
    holds iff ``Y = X`` or some ``Ai`` ends with ``X``.  A quantifier
    rebinding ``X`` inside ``A`` ends the search.
    """
    if not isinstance(quantified, Forall):
        return False
    x = quantified.var
    a = quantified.body
    while True:
        if isinstance(a, TVar):
            return a.name == x
        if isinstance(a, Arrow):
            if ends_with(a.left, x):
                return True
            a = a.right
        elif isinstance(a, Forall):
            if a.var == x:
                return False
            a = a.body
        else:
            return False


def find_error(d: Derivation, system: str = "F") -> Optional[DerivationError]:
    """First incorrect node of ``d`` (preorder), or ``None``.

    ``system`` is ``"F"``, ``"F_F"`` (restricted instantiation) or ``"F0"``
    (no instantiation at all).
    """
    stack = [(d, ())]
    while stack:
        node, path = stack.pop()
        reason = _node_error(node)
        if reason is not None:
            return DerivationError(path, MALFORMED, reason, node)
        if node.rule == FORALL_E:
            if system == "F0":
                return DerivationError(path, SIDE_CONDITION, "forall_e is not a rule of F0", node)
            if system == "F_F" and not ff_side_condition(node.premises[0].type):
                return DerivationError(
                    path, SIDE_CONDITION,
                    "instantiated quantifier neither ends the type nor ends some argument", node)
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + (i,)))
    return None


def _node_error(d: Derivation) -> Optional[str]:
    ps = d.premises
    if d.rule not in RULES:
        return f"unknown rule {d.rule!r}"
    arity = {AX: 0, ARROW_I: 1, ARROW_E: 2, FORALL_I: 1, FORALL_E: 1}[d.rule]
    if len(ps) != arity:
        return f"{d.rule} expects {arity} premises, got {len(ps)}"
    if d.rule != FORALL_E and d.instantiation is not None:
        return "only forall_e carries an instantiation"

    if d.rule == AX:
        if not isinstance(d.term, Var):
            return "ax needs a variable"
        a = d.ctx.lookup(d.term.name)
        if a is None:
            return f"{d.term.name} is not in the context"
        if not alpha_eq_type(a, d.type):
            return f"context gives {d.term.name} another type"
        return None

    if d.rule == ARROW_I:
        p = ps[0]
        if not isinstance(d.term, Abs):
            return "->i needs an abstraction"
        if not isinstance(d.type, Arrow):
            return "->i concludes an arrow type"
        extra = [n for n, _ in p.ctx if n not in d.ctx]
        if len(extra) != 1 or len(p.ctx) != len(d.ctx) + 1:
            return "premise context must extend the conclusion by one variable"
        y = extra[0]
        for n, a in d.ctx:
            b = p.ctx.lookup(n)
            if b is None or not alpha_eq_type(b, a):
                return f"premise context changes the type of {n}"
        if y != d.term.var and y in d.term.fv:
            return f"renamed binder {y} would capture"
        if not alpha_eq(p.term, subst_term(d.term.body, {d.term.var: Var(y)})):
            return "premise term is not the abstraction body"
        if not alpha_eq_type(p.ctx[y], d.type.left):
            return "bound variable type differs from the domain"
        if not alpha_eq_type(p.type, d.type.right):
            return "body type differs from the codomain"
        return None

    if d.rule == ARROW_E:
        f, a = ps
        if not isinstance(d.term, App):
            return "->e needs an application"
        if f.ctx != d.ctx or a.ctx != d.ctx:
            return "->e premises must share the conclusion context"
        if not alpha_eq(f.term, d.term.fun) or not alpha_eq(a.term, d.term.arg):
            return "premise terms are not the function and argument"
        if not isinstance(f.type, Arrow):
            return "function premise does not have an arrow type"
        if not alpha_eq_type(f.type.left, a.type):
            return "argument type differs from the function domain"
        if not alpha_eq_type(f.type.right, d.type):
            return "conclusion type differs from the function codomain"
        return None

    p = ps[0]
    if p.ctx != d.ctx:
        return f"{d.rule} must not change the context"
    if not alpha_eq(p.term, d.term):
        return f"{d.rule} must not change the term"

    if d.rule == FORALL_I:
        if not isinstance(d.type, Forall):
            return "forall_i concludes a quantified type"
        if d.type.var in d.ctx.free_type_vars():
            return f"{d.type.var} occurs free in the context"
        if not alpha_eq_type(d.type.body, p.type):
            return "premise type differs from the quantified body"
        return None

    # FORALL_E
    if d.instantiation is None:
        return "forall_e needs an instantiation"
    if not isinstance(p.type, Forall):
        return "forall_e premise must have a quantified type"
    expected = subst_type(p.type.body, d.instantiation, p.type.var)
    if not alpha_eq_type(expected, d.type):
        return "conclusion is not the instance of the premise"
    return None


def check_derivation_f(d: Derivation) -> bool:
    return find_error(d, "F") is None


def check_derivation_ff(d: Derivation) -> bool:
    return find_error(d, "F_F") is None


def conclusion_matches(d: Derivation, ctx: Context, t: Term, a: Type) -> bool:
    return d.ctx == ctx and alpha_eq(d.term, t) and alpha_eq_type(d.type, a)


def weaken(d: Derivation, name: str, a: Type) -> Derivation:
    """Add ``name : a`` to every context of ``d``.

    ``name`` must not occur in any term of ``d``, and the free type
    variables of ``a`` must not be generalized anywhere in ``d``.
    """
    if any(name in term_names(n.term) or name in n.ctx for n in d.nodes()):
        raise BuildError(f"{name} already occurs in the derivation")
    ftv = free_type_vars(a)
    for n in d.nodes():
        if n.rule == FORALL_I and n.type.var in ftv:
            raise BuildError(f"weakening would break generalization of {n.type.var}")

    def go(n: Derivation) -> Derivation:
        return Derivation(n.rule, n.ctx.extend(name, a), n.term, n.type,
                          tuple(go(p) for p in n.premises), n.instantiation)

    return go(d)
