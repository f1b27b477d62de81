"""Operational test harness for storage operators.

A closed term ``T`` stores a datum ``t`` of type ``D`` when, for every term
``theta`` beta-equal to ``t``, weak head reduction takes ``(T) theta f`` to
``(f) sigma(tau)`` where ``tau`` does not depend on ``theta`` and is
beta-equal to some term of type ``D``.

Only finitely many presentations can be run.  For each value the harness
head-reduces every presentation, computes the least general pattern ``tau``
of the arguments passed to ``f`` (first-order anti-unification; holes are
fresh variables) and checks that the normal form of ``tau`` is closed and
typed at the output type.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .classifiers import NAT, church_nat, church_succ, godel_translate, neg
from .derivation import Derivation, conclusion_matches, find_error
from .parsing import DEFAULT_ATOMS, parse_term, parse_type, print_term, print_type
from .reduction import (
    DEFAULT_NORMALIZE_FUEL, FUEL_EXHAUSTED, NORMALIZED, ReductionTrace,
    head_decompose, normalize, weak_head_reduce,
)
from .syntax import (
    BOT, Abs, App, Arrow, Context, Term, Type, Var, alpha_eq, alpha_eq_type, fresh_name,
    subst_term, term_key, term_names, type_atoms,
)
from .systems import check_f0

DEFAULT_STORAGE_FUEL = 50_000

MATCH = "match"
HEAD_MISMATCH = "head-mismatch"
OUT_OF_FUEL = "fuel-exhausted"

OMM = "o.m.m."
NOT_OMM = "not-o.m.m."


class StorageError(ValueError):
    pass


def omm_type(d: Type, s: Optional[Type] = None) -> Type:
    """``D* -> ¬¬D``, or ``E* -> ¬¬S`` when an output type ``s`` is given."""
    out = d if s is None else s
    if BOT.name in type_atoms(out):
        raise StorageError("⊥ must not occur in the output type")
    return Arrow(godel_translate(d), neg(neg(out)))


# ---------------------------------------------------------------------------
# Presentations

def presentations(t: Term, extra=()) -> list:
    """Beta-equal variants of a closed term: ``t`` itself, two redex paddings
    and an inner identity wrap, then ``extra``; alpha-duplicates dropped."""
    used = term_names(t)
    z = fresh_name("z", used)
    d = fresh_name("d", used)
    out = [t, App(Abs(z, Var(z)), t), App(Abs(z, t), Abs(d, Var(d))), _wrap_inside(t, z)]
    out.extend(extra)
    seen, unique = set(), []
    for p in out:
        k = term_key(p)
        if k not in seen:
            seen.add(k)
            unique.append(p)
    return unique


def _wrap_inside(t: Term, z: str) -> Term:
    if isinstance(t, Abs):
        return Abs(t.var, _wrap_inside(t.body, z))
    return App(Abs(z, Var(z)), t)


def nat_presentations(k: int) -> list:
    extra = [App(church_succ(), church_nat(k - 1))] if k > 0 else []
    return presentations(church_nat(k), extra)


# ---------------------------------------------------------------------------
# Specs

@dataclass
class StorageValue:
    label: str
    canonical: Term
    presentations: list
    derivation: Optional[Derivation] = None


@dataclass
class StorageSpec:
    data_type: Type
    values: list
    continuation: str = "f"
    output_type: Optional[Type] = None

    @property
    def target_type(self) -> Type:
        return self.data_type if self.output_type is None else self.output_type

    def validate(self, fuel: int = DEFAULT_NORMALIZE_FUEL) -> None:
        """Every canonical term is typed and every presentation is beta-equal to it."""
        for v in self.values:
            nf = _normal_form(v.canonical, fuel)
            if nf is None:
                raise StorageError(f"{v.label}: canonical term does not normalize")
            if v.derivation is not None:
                if find_error(v.derivation) is not None or not conclusion_matches(
                        v.derivation, Context(), v.canonical, self.data_type):
                    raise StorageError(f"{v.label}: supplied derivation is invalid")
            elif not check_f0(Context(), nf, self.data_type):
                raise StorageError(f"{v.label}: canonical term is not typed at the data type")
            for p in v.presentations:
                pn = _normal_form(p, fuel)
                if pn is None or not alpha_eq(pn, nf):
                    raise StorageError(f"{v.label}: presentation {print_term(p)} is not beta-equal")

    def to_json(self) -> dict:
        out = {"data_type": print_type(self.data_type), "continuation": self.continuation}
        if self.output_type is not None:
            out["output_type"] = print_type(self.output_type)
        out["values"] = []
        for v in self.values:
            rec = {"label": v.label, "canonical": print_term(v.canonical),
                   "presentations": [print_term(p) for p in v.presentations]}
            if v.derivation is not None:
                rec["derivation"] = v.derivation.to_json()
            out["values"].append(rec)
        return out

    @classmethod
    def from_json(cls, data, atoms=DEFAULT_ATOMS, defs=None) -> "StorageSpec":
        from .classifiers import PRELUDE
        if isinstance(data, str):
            data = json.loads(data)
        defs = PRELUDE if defs is None else defs
        values = []
        for v in data["values"]:
            canonical = parse_term(v["canonical"])
            pres = [parse_term(p) for p in v.get("presentations", [])] or [canonical]
            deriv = v.get("derivation")
            values.append(StorageValue(
                v["label"], canonical, pres,
                None if deriv is None else Derivation.from_json(deriv, atoms, defs)))
        out = data.get("output_type")
        return cls(parse_type(data["data_type"], atoms, defs), values,
                   data.get("continuation", "f"),
                   None if out is None else parse_type(out, atoms, defs))


def nat_spec(max_value: int = 5) -> StorageSpec:
    return StorageSpec(NAT, [
        StorageValue(str(k), church_nat(k), nat_presentations(k)) for k in range(max_value + 1)])


# ---------------------------------------------------------------------------
# Anti-unification

def anti_unify(terms: list, avoid=()):
    """Least general common pattern of ``terms``.

    Returns ``(tau, sigmas)`` where ``subst_term(tau, sigmas[i])`` is
    alpha-equal to ``terms[i]``.  Subterms mentioning a variable bound
    above them cannot become holes, so the hole moves up to the nearest
    ancestor where it can.
    """
    used = set(avoid)
    for t in terms:
        used |= term_names(t)
    holes: dict = {}
    order: list = []

    def hole(ts):
        key = tuple(term_key(t) for t in ts)
        if key not in holes:
            name = fresh_name("h", used)
            used.add(name)
            holes[key] = name
            order.append((name, ts))
        return Var(holes[key])

    def go(ts, bound):
        first = ts[0]
        if all(alpha_eq(t, first) for t in ts[1:]):
            return first
        if all(isinstance(t, Abs) for t in ts):
            v = fresh_name(first.var, used)
            used.add(v)
            bodies = [subst_term(t.body, {t.var: Var(v)}) for t in ts]
            body = go(bodies, bound | {v})
            if body is not None:
                return Abs(v, body)
        elif all(isinstance(t, App) for t in ts):
            f = go([t.fun for t in ts], bound)
            a = go([t.arg for t in ts], bound) if f is not None else None
            if f is not None and a is not None:
                return App(f, a)
        if any(t.fv & bound for t in ts):
            return None
        return hole(ts)

    tau = go(list(terms), frozenset())
    sigmas = [{name: ts[i] for name, ts in order} for i in range(len(terms))]
    for t, s in zip(terms, sigmas):
        assert alpha_eq(subst_term(tau, s), t)
    return tau, sigmas


# ---------------------------------------------------------------------------
# Reports

@dataclass
class RunOutcome:
    presentation: Term
    trace: ReductionTrace
    kind: str
    argument: Optional[Term] = None
    sigma: dict = field(default_factory=dict)

    def to_json(self, traces: bool = False) -> dict:
        out = {"presentation": print_term(self.presentation), "outcome": self.kind,
               "steps": len(self.trace.steps), "status": self.trace.status,
               "final": print_term(self.trace.final)}
        if self.argument is not None:
            out["argument"] = print_term(self.argument)
            out["sigma"] = {k: print_term(v) for k, v in sorted(self.sigma.items())}
        if traces:
            out["trace"] = self.trace.to_json()
        return out


@dataclass
class ValueReport:
    label: str
    runs: list
    tau: Optional[Term] = None
    tau_nf: Optional[Term] = None
    typed: bool = False
    faithful: bool = False
    presentation_insensitive: bool = False

    @property
    def match(self) -> bool:
        return all(r.kind == MATCH for r in self.runs) and self.typed

    def to_json(self, traces: bool = False) -> dict:
        return {
            "label": self.label,
            "match": self.match,
            "tau": None if self.tau is None else print_term(self.tau),
            "tau_nf": None if self.tau_nf is None else print_term(self.tau_nf),
            "typed": self.typed,
            "faithful": self.faithful,
            "presentation_insensitive": self.presentation_insensitive,
            "runs": [r.to_json(traces) for r in self.runs],
        }


@dataclass
class StorageReport:
    operator: Term
    data_type: Type
    output_type: Type
    fuel: int
    values: list

    @property
    def verdict(self) -> str:
        return OMM if all(v.match for v in self.values) else NOT_OMM

    @property
    def presentation_insensitive(self) -> bool:
        return all(v.presentation_insensitive for v in self.values)

    def to_json(self, traces: bool = False) -> dict:
        return {
            "operator": print_term(self.operator),
            "data_type": print_type(self.data_type),
            "output_type": print_type(self.output_type),
            "fuel": self.fuel,
            "verdict": self.verdict,
            "presentation_insensitive": self.presentation_insensitive,
            "values": [v.to_json(traces) for v in self.values],
        }


def _normal_form(t: Term, fuel: int) -> Optional[Term]:
    tr = normalize(t, fuel, record=False)
    return tr.final if tr.status == NORMALIZED else None


def run_storage(op: Term, spec: StorageSpec, fuel: int = DEFAULT_STORAGE_FUEL) -> StorageReport:
    """Run ``op`` on every presentation of every value of ``spec``."""
    if op.fv:
        raise StorageError("the operator must be closed")
    f = spec.continuation
    for v in spec.values:
        for p in v.presentations:
            if f in p.fv:
                raise StorageError(f"continuation {f} is free in a presentation")
    spec.validate()
    target = spec.target_type
    reports = []
    for v in spec.values:
        runs = []
        for p in v.presentations:
            tr = weak_head_reduce(App(App(op, p), Var(f)), fuel)
            if tr.status == FUEL_EXHAUSTED:
                runs.append(RunOutcome(p, tr, OUT_OF_FUEL))
                continue
            head, args = head_decompose(tr.final)
            if isinstance(head, Var) and head.name == f and len(args) == 1:
                runs.append(RunOutcome(p, tr, MATCH, args[0]))
            else:
                runs.append(RunOutcome(p, tr, HEAD_MISMATCH))
        rep = ValueReport(v.label, runs)
        if all(r.kind == MATCH for r in runs):
            tau, sigmas = anti_unify([r.argument for r in runs], {f})
            for r, s in zip(runs, sigmas):
                r.sigma = s
            rep.tau = tau
            rep.presentation_insensitive = not any(sigmas[0])
            rep.tau_nf = _normal_form(tau, fuel)
            if rep.tau_nf is not None and not rep.tau_nf.fv:
                canon = _normal_form(v.canonical, fuel)
                rep.faithful = canon is not None and alpha_eq(canon, rep.tau_nf)
                rep.typed = (rep.faithful and spec.output_type is None) or check_f0(
                    Context(), rep.tau_nf, target)
        reports.append(rep)
    return StorageReport(op, spec.data_type, target, fuel, reports)


def run_storage_pair(op: Term, e: Type, s: Type, spec: StorageSpec,
                     fuel: int = DEFAULT_STORAGE_FUEL) -> StorageReport:
    """As :func:`run_storage`, with inputs at ``e`` and outputs checked at ``s``."""
    if not alpha_eq_type(spec.data_type, e):
        raise StorageError("the data type of the values differs from the input type")
    paired = StorageSpec(e, spec.values, spec.continuation, s)
    return run_storage(op, paired, fuel)


def constant_operator(value: Term) -> Term:
    """``\\n. \\f. (f) value`` for a closed ``value``."""
    names = term_names(value)
    n, f = fresh_name("n", names), fresh_name("f", names)
    return Abs(n, Abs(f, App(Var(f), value)))


def substituting_operator(t: Term, x: str = "x") -> Term:
    """``\\x. \\y. (y) t``; with ``x`` free in ``t`` it is never a storage operator."""
    y = fresh_name("y", term_names(t) | {x})
    return Abs(x, Abs(y, App(Var(y), t)))
