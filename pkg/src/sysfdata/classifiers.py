"""Syntactic predicates on types and the standard encodings.

Atoms are treated exactly like type variables by :func:`polarity` and
:func:`ends_with`.
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Abs, App, Arrow, Atom, BOT, Forall, O, Term, TVar, Type, Var,
    free_type_vars, fresh_name, lams, type_atoms, type_names,
)


class GodelError(ValueError):
    """Raised when the Gödel translation meets a type already containing ⊥."""


@dataclass(frozen=True)
class Polarity:
    forall_positive: bool
    forall_negative: bool


def polarity(a: Type) -> Polarity:
    if isinstance(a, (TVar, Atom)):
        return Polarity(True, True)
    if isinstance(a, Arrow):
        left, right = polarity(a.left), polarity(a.right)
        return Polarity(
            right.forall_positive and left.forall_negative,
            right.forall_negative and left.forall_positive,
        )
    body = polarity(a.body)
    return Polarity(body.forall_positive and a.var in free_type_vars(a.body), False)


def is_forall_positive(a: Type) -> bool:
    return polarity(a).forall_positive


def is_forall_negative(a: Type) -> bool:
    return polarity(a).forall_negative


def ends_with(a: Type, k: str) -> bool:
    """Whether ``a`` has the shape ``∀X0(B1 -> ∀X1(... -> K))``.

    Stripping stops at a quantifier binding ``k`` itself.
    """
    while True:
        if isinstance(a, (TVar, Atom)):
            return a.name == k
        if isinstance(a, Arrow):
            a = a.right
        elif a.var == k:
            return False
        else:
            a = a.body


def tail(a: Type) -> Type:
    """The variable or atom reached by stripping arrows and quantifiers."""
    while not isinstance(a, (TVar, Atom)):
        a = a.right if isinstance(a, Arrow) else a.body
    return a


def lg(a: Type) -> int:
    """Number of arrows in ``a``."""
    if isinstance(a, (TVar, Atom)):
        return 0
    if isinstance(a, Arrow):
        return 1 + lg(a.left) + lg(a.right)
    return lg(a.body)


def is_proper(a: Type) -> bool:
    if isinstance(a, (TVar, Atom)):
        return True
    if isinstance(a, Arrow):
        return is_proper(a.left) and is_proper(a.right)
    return a.var in free_type_vars(a.body) and is_proper(a.body)


def is_closed(a: Type) -> bool:
    return not free_type_vars(a)


def is_quantifier_free(a: Type) -> bool:
    if isinstance(a, (TVar, Atom)):
        return True
    if isinstance(a, Arrow):
        return is_quantifier_free(a.left) and is_quantifier_free(a.right)
    return False


def count_leaves(a: Type) -> int:
    if isinstance(a, (TVar, Atom)):
        return 1
    if isinstance(a, Arrow):
        return count_leaves(a.left) + count_leaves(a.right)
    return count_leaves(a.body)


_FRESH_SEQUENCE = ("X", "Z", "W", "U", "V")


def _fresh_type_var(*types: Type) -> str:
    used = set()
    for t in types:
        used |= type_names(t)
    for name in _FRESH_SEQUENCE:
        if name not in used:
            return name
    return fresh_name("X", used)


def mk_product(a: Type, b: Type) -> Type:
    """``A ∧ B = ∀X((A -> B -> X) -> X)``."""
    x = TVar(_fresh_type_var(a, b))
    return Forall(x.name, Arrow(Arrow(a, Arrow(b, x)), x))


def mk_sum(a: Type, b: Type) -> Type:
    """``A ∨ B = ∀X((A -> X) -> (B -> X) -> X)``."""
    x = TVar(_fresh_type_var(a, b))
    return Forall(x.name, Arrow(Arrow(a, x), Arrow(Arrow(b, x), x)))


def mk_list(a: Type) -> Type:
    """``L A = ∀X(X -> (A -> X -> X) -> X)``."""
    x = TVar(_fresh_type_var(a))
    return Forall(x.name, Arrow(x, Arrow(Arrow(a, Arrow(x, x)), x)))


def neg(a: Type) -> Type:
    return Arrow(a, BOT)


def godel_translate(a: Type) -> Type:
    """Replace every atomic leaf ``R`` (variable or constant) by ``R -> ⊥``."""
    if BOT.name in type_atoms(a):
        raise GodelError("⊥ already occurs in the type")
    return _godel(a)


def _godel(a: Type) -> Type:
    if isinstance(a, (TVar, Atom)):
        return neg(a)
    if isinstance(a, Arrow):
        return Arrow(_godel(a.left), _godel(a.right))
    return Forall(a.var, _godel(a.body))


def circle(g: Type) -> Type:
    """``G° = O -> G ∧ O``."""
    return Arrow(O, mk_product(g, O))


# Standard types.

ID = Forall("X", Arrow(TVar("X"), TVar("X")))
BOOL = Forall("X", Arrow(TVar("X"), Arrow(TVar("X"), TVar("X"))))
NAT = Forall("X", Arrow(TVar("X"), Arrow(Arrow(TVar("X"), TVar("X")), TVar("X"))))
D_TYPE = Forall("X", Arrow(Forall("Y", Arrow(TVar("Y"), TVar("X"))), TVar("X")))

PRELUDE = {"Id": ID, "B": BOOL, "N": NAT, "D": D_TYPE}


def pn(n: int) -> Term:
    """``p_n = \\x1 ... \\xn. \\x. x``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return lams([f"x{i}" for i in range(1, n + 1)] + ["x"], Var("x"))


def church_nat(k: int) -> Term:
    """``\\x. \\s. (s)^k x``, an inhabitant of ``∀X(X -> (X -> X) -> X)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    body: Term = Var("x")
    for _ in range(k):
        body = App(Var("s"), body)
    return Abs("x", Abs("s", body))


def church_bool(b: bool) -> Term:
    """``1 = \\x. \\y. x`` and ``0 = \\x. \\y. y``."""
    return Abs("x", Abs("y", Var("x" if b else "y")))


def church_succ() -> Term:
    """``\\n. \\x. \\s. (s)((n) x s)``."""
    return Abs("n", Abs("x", Abs("s", App(Var("s"), App(App(Var("n"), Var("x")), Var("s"))))))


def classify(a: Type, ends_with_names=()) -> dict:
    """Summary record used by the ``classify`` command."""
    pol = polarity(a)
    names = {"O"} | set(type_atoms(a)) | set(free_type_vars(a)) | set(ends_with_names)
    return {
        "proper": is_proper(a),
        "closed": is_closed(a),
        "forall_positive": pol.forall_positive,
        "forall_negative": pol.forall_negative,
        "lg": lg(a),
        "ends_with": {k: ends_with(a, k) for k in sorted(names)},
    }
