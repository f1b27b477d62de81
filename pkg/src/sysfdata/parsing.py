"""Concrete syntax for terms, types, contexts and judgments.

Term grammar::

    term ::= '\\' ident+ '.' term | atom+ [lambda]
    atom ::= ident | '(' term ')'

Application is juxtaposition and associates to the left, so the Krivine-style
``(x)u`` notation parses as written.  ``λ`` is accepted for ``\\``.

Type grammar::

    type ::= 'forall' Ident+ '.' type | sum ['->' type]
    sum  ::= prod ['\\/' sum]
    prod ::= list ['/\\' prod]
    list ::= 'List' list | Ident | '(' type ')'

Uppercase identifiers are type variables unless declared as atoms
(``O`` and ``Bot`` by default).  ``/\\``, ``\\/`` and ``List`` expand to the
second-order encodings of product, sum and lists.  Unicode ``∀ → ∧ ∨ ⊥``
are accepted too.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    Abs, App, Arrow, Atom, Context, Forall, Term, TVar, Type, Var,
    fresh_name,
)

DEFAULT_ATOMS = frozenset({"O", "Bot"})


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<and>/\\|∧)
  | (?P<or>\\/|∨)
  | (?P<lam>\\|λ)
  | (?P<turnstile>\|-|⊢)
  | (?P<forall>∀)
  | (?P<bot>⊥)
  | (?P<punct>[().:,])
  | (?P<ident>[^\W\d]\w*'*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text.startswith("#", pos):
            nl = text.find("\n", pos)
            pos = len(text) if nl < 0 else nl
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "punct":
            kind = m.group()
        elif kind == "ident" and m.group() == "forall":
            kind = "forall"
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, atoms=DEFAULT_ATOMS, defs=None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.atoms = frozenset(atoms) | {"Bot"}
        self.defs = defs or {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str):
        raise ParseError(msg, self.tok.pos, self.text)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def at(self, *kinds) -> bool:
        return self.tok.kind in kinds

    def finish(self):
        if not self.at("eof"):
            self.error(f"unexpected {self.tok.text!r}")

    # terms

    def term(self) -> Term:
        if self.at("lam"):
            return self.lam()
        head = self.term_atom()
        while True:
            if self.at("ident", "("):
                head = App(head, self.term_atom())
            elif self.at("lam"):
                head = App(head, self.lam())
            else:
                return head

    def lam(self) -> Term:
        self.expect("lam")
        names = [self.expect("ident").text]
        while self.at("ident"):
            names.append(self.expect("ident").text)
        self.expect(".")
        body = self.term()
        for n in reversed(names):
            body = Abs(n, body)
        return body

    def term_atom(self) -> Term:
        if self.at("ident"):
            return Var(self.expect("ident").text)
        if self.at("("):
            self.expect("(")
            t = self.term()
            self.expect(")")
            return t
        self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")

    # types

    def type(self, bound=frozenset()) -> Type:
        if self.at("forall"):
            self.expect("forall")
            names = [self.type_var_name()]
            while self.at("ident"):
                names.append(self.type_var_name())
            self.expect(".")
            body = self.type(bound | set(names))
            for n in reversed(names):
                body = Forall(n, body)
            return body
        left = self.sum(bound)
        if self.at("arrow"):
            self.expect("arrow")
            return Arrow(left, self.type(bound))
        return left

    def sum(self, bound) -> Type:
        from .classifiers import mk_sum
        left = self.prod(bound)
        if self.at("or"):
            self.expect("or")
            return mk_sum(left, self.sum(bound))
        return left

    def prod(self, bound) -> Type:
        from .classifiers import mk_product
        left = self.list_type(bound)
        if self.at("and"):
            self.expect("and")
            return mk_product(left, self.prod(bound))
        return left

    def list_type(self, bound) -> Type:
        from .classifiers import mk_list
        if self.at("ident") and self.tok.text == "List":
            self.expect("ident")
            return mk_list(self.list_type(bound))
        if self.at("bot"):
            self.expect("bot")
            return Atom("Bot")
        if self.at("("):
            self.expect("(")
            a = self.type(bound)
            self.expect(")")
            return a
        if self.at("ident"):
            pos = self.tok.pos
            name = self.expect("ident").text
            if name in bound:
                return TVar(name)
            if name in self.atoms:
                return Atom(name)
            if name in self.defs:
                return self.defs[name]
            if not name[0].isupper():
                raise ParseError(f"type identifier {name!r} must be uppercase", pos, self.text)
            return TVar(name)
        self.error(f"expected a type, found {self.tok.text or 'end of input'!r}")

    def type_var_name(self) -> str:
        pos = self.tok.pos
        name = self.expect("ident").text
        if not name[0].isupper() or name in self.atoms or name == "List":
            raise ParseError(f"{name!r} cannot be bound as a type variable", pos, self.text)
        return name

    # contexts and judgments

    def context(self) -> Context:
        items = []
        if self.at("turnstile", "eof"):
            return Context()
        while True:
            pos = self.tok.pos
            name = self.expect("ident").text
            self.expect(":")
            a = self.type()
            if any(n == name for n, _ in items):
                raise ParseError(f"duplicate context variable {name!r}", pos, self.text)
            items.append((name, a))
            if not self.at(","):
                return Context(items)
            self.expect(",")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_type(text: str, atoms=DEFAULT_ATOMS, defs=None) -> Type:
    """Parse a type.

    ``defs`` maps identifiers to types (e.g. ``{"N": ...}``); a defined name
    expands only where it is not bound by an enclosing ``forall``.
    """
    p = _Parser(text, atoms, defs)
    a = p.type()
    p.finish()
    return a


def parse_context(text: str, atoms=DEFAULT_ATOMS, defs=None) -> Context:
    p = _Parser(text, atoms, defs)
    ctx = p.context()
    p.finish()
    return ctx


def parse_judgment(text: str, atoms=DEFAULT_ATOMS, defs=None):
    """Parse ``x : A, ... |- t : B`` into ``(ctx, term, type)``."""
    p = _Parser(text, atoms, defs)
    ctx = p.context()
    p.expect("turnstile")
    t = p.term()
    p.expect(":")
    a = p.type()
    p.finish()
    return ctx, t, a


def read_corpus(text: str, atoms=DEFAULT_ATOMS, defs=None):
    """Judgments of a corpus file, one per non-blank, non-comment line."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_judgment(line, atoms, defs))
    return out


# ---------------------------------------------------------------------------
# Printing

_CANON_NAMES = ("x", "y", "z", "w", "u", "v")


def _canon_name(depth: int, avoid) -> str:
    i = depth
    while True:
        base = _CANON_NAMES[i % len(_CANON_NAMES)]
        suffix = i // len(_CANON_NAMES)
        name = base if suffix == 0 else f"{base}{suffix}"
        if name not in avoid:
            return name
        i += len(_CANON_NAMES)


def print_term(t: Term, canonical: bool = False, unicode: bool = False) -> str:
    """Render ``t`` so that it reparses to an alpha-equivalent term.

    Binders that would shadow an enclosing binder or a free variable are
    renamed (``x`` becomes ``x1``, ...).  With ``canonical=True`` every
    binder is named by its depth (``x, y, z, w, u, v, x1, ...``), so
    alpha-equivalent terms print identically.
    """
    lam = "λ" if unicode else "\\"
    free = t.fv

    def go(u: Term, env: dict, depth: int, in_scope: frozenset) -> str:
        if isinstance(u, Var):
            return env.get(u.name, u.name)
        if isinstance(u, Abs):
            if canonical:
                name = _canon_name(depth, free | in_scope)
            elif u.var in in_scope or u.var in free:
                name = fresh_name(u.var, in_scope | free | _visible(u.body, env))
            else:
                name = u.var
            inner = dict(env)
            inner[u.var] = name
            return f"{lam}{name}. {go(u.body, inner, depth + 1, in_scope | {name})}"
        head, args = u, []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fun
        args.reverse()
        parts = [go(head, env, depth, in_scope)]
        if isinstance(head, Abs):
            parts[0] = f"({parts[0]})"
        for a in args:
            s = go(a, env, depth, in_scope)
            parts.append(s if isinstance(a, Var) else f"({s})")
        return " ".join(parts)

    return go(t, {}, 0, frozenset())


def _visible(body: Term, env: dict) -> set:
    return {env.get(n, n) for n in body.fv}


def print_type(a: Type, unicode: bool = False) -> str:
    arrow = " → " if unicode else " -> "
    forall = "∀" if unicode else "forall "

    def go(b: Type) -> str:
        if isinstance(b, TVar):
            return b.name
        if isinstance(b, Atom):
            return "⊥" if unicode and b.name == "Bot" else b.name
        if isinstance(b, Arrow):
            left = go(b.left)
            if isinstance(b.left, (Arrow, Forall)):
                left = f"({left})"
            return left + arrow + go(b.right)
        names = [b.var]
        body = b.body
        while isinstance(body, Forall):
            names.append(body.var)
            body = body.body
        return f"{forall}{' '.join(names)}. {go(body)}"

    return go(a)


def print_context(ctx: Context, unicode: bool = False) -> str:
    return ", ".join(f"{n} : {print_type(a, unicode)}" for n, a in ctx)


def print_judgment(ctx: Context, t: Term, a: Type, unicode: bool = False) -> str:
    turnstile = "⊢" if unicode else "|-"
    left = print_context(ctx, unicode)
    return f"{left + ' ' if left else ''}{turnstile} {print_term(t, unicode=unicode)} : {print_type(a, unicode)}"
