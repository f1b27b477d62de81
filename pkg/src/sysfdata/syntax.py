"""Terms, types and contexts of Curry-style System F.

Terms are untyped lambda terms; types are built from type variables,
atomic constants (``O``, ``Bot``, ...), arrows and universal quantifiers.
Every value is an immutable dataclass, so terms and types can be shared
freely between traces, derivations and caches.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True, slots=True)
class Var:
    name: str
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset((self.name,)))

    def __str__(self):
        from .parsing import print_term
        return print_term(self)


@dataclass(frozen=True, slots=True)
class Abs:
    var: str
    body: "Term"
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.body.fv - {self.var})

    def __str__(self):
        from .parsing import print_term
        return print_term(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fv", self.fun.fv | self.arg.fv)

    def __str__(self):
        from .parsing import print_term
        return print_term(self)


Term = Union[Var, Abs, App]


def lams(names: Iterable[str], body: Term) -> Term:
    """``\\x1. ... \\xn. body``."""
    for name in reversed(list(names)):
        body = Abs(name, body)
    return body


def apps(head: Term, *args: Term) -> Term:
    """Left-nested application ``(head) a1 ... an``."""
    for a in args:
        head = App(head, a)
    return head


def free_term_vars(t: Term) -> frozenset:
    return t.fv


def term_size(t: Term) -> int:
    """Number of AST nodes."""
    size = 0
    stack = [t]
    while stack:
        u = stack.pop()
        size += 1
        if isinstance(u, Abs):
            stack.append(u.body)
        elif isinstance(u, App):
            stack.append(u.fun)
            stack.append(u.arg)
    return size


def term_names(t: Term) -> set:
    """Every variable name occurring in ``t``, bound or free."""
    names = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            names.add(u.name)
        elif isinstance(u, Abs):
            names.add(u.var)
            stack.append(u.body)
        else:
            stack.append(u.fun)
            stack.append(u.arg)
    return names


_TRAILING_DIGITS = re.compile(r"\d+$")


def fresh_name(base: str, avoid) -> str:
    """First name in the sequence ``base, base1, base2, ...`` not in ``avoid``.

    Trailing digits of ``base`` are dropped first so repeated renaming does
    not grow names without bound.
    """
    if base not in avoid:
        return base
    stem = _TRAILING_DIGITS.sub("", base) or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def subst_term(t: Term, pairs) -> Term:
    """Simultaneous capture-avoiding substitution ``t[u1/x1, ..., un/xn]``.

    ``pairs`` is a mapping or an iterable of ``(name, term)`` pairs.
    """
    mapping = dict(pairs.items() if isinstance(pairs, Mapping) else pairs)
    return _subst(t, mapping)


def _subst(t: Term, mapping: dict) -> Term:
    mapping = {k: v for k, v in mapping.items() if k in t.fv}
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping[t.name]
    if isinstance(t, App):
        return App(_subst(t.fun, mapping), _subst(t.arg, mapping))
    # Abs: t.var is not a key since keys are free in t
    incoming = set()
    for v in mapping.values():
        incoming |= v.fv
    if t.var in incoming:
        new = fresh_name(t.var, incoming | t.body.fv | set(mapping))
        body = _subst(t.body, {**mapping, t.var: Var(new)})
        return Abs(new, body)
    return Abs(t.var, _subst(t.body, mapping))


def rename_bound(t: Abs, new: str) -> Abs:
    """Alpha-rename the outermost binder of ``t`` to ``new``."""
    if new == t.var:
        return t
    if new in t.body.fv:
        raise ValueError(f"renaming {t.var} to {new} would capture")
    return Abs(new, _subst(t.body, {t.var: Var(new)}))


def term_key(t: Term):
    """Nameless (de Bruijn) key: equal keys iff alpha-equivalent terms."""
    return _term_key(t, {}, 0)


def _term_key(t: Term, env: dict, depth: int):
    if isinstance(t, Var):
        level = env.get(t.name)
        return ("F", t.name) if level is None else ("B", depth - level - 1)
    if isinstance(t, App):
        return ("@", _term_key(t.fun, env, depth), _term_key(t.arg, env, depth))
    saved = env.get(t.var)
    env[t.var] = depth
    body = _term_key(t.body, env, depth + 1)
    if saved is None:
        del env[t.var]
    else:
        env[t.var] = saved
    return ("L", body)


def alpha_eq(t: Term, u: Term) -> bool:
    return term_key(t) == term_key(u)


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True, slots=True)
class TVar:
    name: str

    def __str__(self):
        from .parsing import print_type
        return print_type(self)


@dataclass(frozen=True, slots=True)
class Atom:
    """A type constant such as ``O`` or ``Bot``; never bound by a quantifier."""
    name: str

    def __str__(self):
        from .parsing import print_type
        return print_type(self)


@dataclass(frozen=True, slots=True)
class Arrow:
    left: "Type"
    right: "Type"

    def __str__(self):
        from .parsing import print_type
        return print_type(self)


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Type"

    def __str__(self):
        from .parsing import print_type
        return print_type(self)


Type = Union[TVar, Atom, Arrow, Forall]

BOT = Atom("Bot")
O = Atom("O")


def arrows(*types: Type) -> Type:
    """Right-nested arrow chain ``A1 -> A2 -> ... -> An``."""
    result = types[-1]
    for a in reversed(types[:-1]):
        result = Arrow(a, result)
    return result


def foralls(names: Iterable[str], body: Type) -> Type:
    for name in reversed(list(names)):
        body = Forall(name, body)
    return body


def free_type_vars(a: Type) -> frozenset:
    """Free type variables of ``a``; atoms are never included."""
    if isinstance(a, TVar):
        return frozenset((a.name,))
    if isinstance(a, Atom):
        return frozenset()
    if isinstance(a, Arrow):
        return free_type_vars(a.left) | free_type_vars(a.right)
    return free_type_vars(a.body) - {a.var}


def type_atoms(a: Type) -> frozenset:
    if isinstance(a, Atom):
        return frozenset((a.name,))
    if isinstance(a, TVar):
        return frozenset()
    if isinstance(a, Arrow):
        return type_atoms(a.left) | type_atoms(a.right)
    return type_atoms(a.body)


def type_names(a: Type) -> set:
    """Every type-variable and atom name occurring in ``a``, bound or free."""
    if isinstance(a, (TVar, Atom)):
        return {a.name}
    if isinstance(a, Arrow):
        return type_names(a.left) | type_names(a.right)
    return {a.var} | type_names(a.body)


def subst_type(a: Type, g: Type, x: str) -> Type:
    """Capture-avoiding ``a[g/x]``."""
    return subst_types(a, {x: g})


def subst_types(a: Type, mapping: Mapping[str, Type]) -> Type:
    """Simultaneous capture-avoiding substitution of type variables."""
    if isinstance(a, TVar):
        return mapping.get(a.name, a)
    if isinstance(a, Atom):
        return a
    if isinstance(a, Arrow):
        return Arrow(subst_types(a.left, mapping), subst_types(a.right, mapping))
    fv = free_type_vars(a)
    mapping = {k: v for k, v in mapping.items() if k in fv}
    if not mapping:
        return a
    incoming = set()
    for v in mapping.values():
        incoming |= free_type_vars(v)
    if a.var in incoming:
        new = fresh_name(a.var, incoming | free_type_vars(a.body) | set(mapping)
                         | type_atoms(a))
        return Forall(new, subst_types(a.body, {**mapping, a.var: TVar(new)}))
    return Forall(a.var, subst_types(a.body, mapping))


def type_key(a: Type):
    return _type_key(a, {}, 0)


def _type_key(a: Type, env: dict, depth: int):
    if isinstance(a, TVar):
        level = env.get(a.name)
        return ("V", a.name) if level is None else ("B", depth - level - 1)
    if isinstance(a, Atom):
        return ("A", a.name)
    if isinstance(a, Arrow):
        return ("->", _type_key(a.left, env, depth), _type_key(a.right, env, depth))
    saved = env.get(a.var)
    env[a.var] = depth
    body = _type_key(a.body, env, depth + 1)
    if saved is None:
        del env[a.var]
    else:
        env[a.var] = saved
    return ("forall", body)


def alpha_eq_type(a: Type, b: Type) -> bool:
    return type_key(a) == type_key(b)


def type_size(a: Type) -> int:
    if isinstance(a, (TVar, Atom)):
        return 1
    if isinstance(a, Arrow):
        return 1 + type_size(a.left) + type_size(a.right)
    return 1 + type_size(a.body)


def rename_bound_apart(a: Type, avoid) -> Type:
    """Alpha-variant of ``a`` whose binders are pairwise distinct and not in ``avoid``."""
    used = set(avoid) | free_type_vars(a) | type_atoms(a)

    def go(b: Type) -> Type:
        if isinstance(b, (TVar, Atom)):
            return b
        if isinstance(b, Arrow):
            return Arrow(go(b.left), go(b.right))
        new = fresh_name(b.var, used)
        used.add(new)
        body = b.body if new == b.var else subst_type(b.body, TVar(new), b.var)
        return Forall(new, go(body))

    return go(a)


# ---------------------------------------------------------------------------
# Contexts

class Context:
    """Ordered assignment of types to distinct term variables.

    Equality ignores the order of bindings (a context is a finite map);
    types are compared up to alpha-equivalence.
    """

    __slots__ = ("_items", "_index")

    def __init__(self, items: Iterable[tuple[str, Type]] = ()):
        self._items: tuple = ()
        self._index: dict = {}
        for name, a in items:
            if name in self._index:
                raise ValueError(f"variable {name!r} already bound in context")
            self._index[name] = a
            self._items += ((name, a),)

    @classmethod
    def of(cls, mapping=None, **kw) -> "Context":
        mapping = dict(mapping or {}, **kw)
        return cls(mapping.items())

    def extend(self, name: str, a: Type) -> "Context":
        if name in self._index:
            raise ValueError(f"variable {name!r} already bound in context")
        return Context(self._items + ((name, a),))

    def lookup(self, name: str):
        return self._index.get(name)

    def __getitem__(self, name: str) -> Type:
        return self._index[name]

    def __contains__(self, name) -> bool:
        return name in self._index

    def __iter__(self) -> Iterator[tuple[str, Type]]:
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def names(self) -> frozenset:
        return frozenset(self._index)

    def free_type_vars(self) -> frozenset:
        out = frozenset()
        for _, a in self._items:
            out |= free_type_vars(a)
        return out

    def map_types(self, fn) -> "Context":
        return Context((n, fn(a)) for n, a in self._items)

    def key(self):
        return frozenset((n, type_key(a)) for n, a in self._items)

    def __eq__(self, other):
        return isinstance(other, Context) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Context({list(self._items)!r})"

    def __str__(self):
        from .parsing import print_context
        return print_context(self)
