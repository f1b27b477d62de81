"""Command-line entry point: ``sysfdata <subcommand> ...``.

Exit codes: 0 accept/success, 1 reject/counterexample, 2 usage or error.
Inputs are given inline (``--term``), from a file (``--term-file``) or, for
the main input of a command, on stdin.  The prelude names ``Id``, ``B``,
``N`` and ``D`` may be used in any type.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import generators
from .classifiers import PRELUDE, GodelError, classify, godel_translate
from .derivation import Derivation, find_error
from .parsing import (
    DEFAULT_ATOMS, ParseError, parse_context, parse_term, parse_type,
    print_context, print_judgment, print_term, print_type,
)
from .reduction import (
    DEFAULT_NORMALIZE_FUEL, DEFAULT_WHNF_FUEL, FUEL_EXHAUSTED, normalize, weak_head_reduce,
)
from .storage import DEFAULT_STORAGE_FUEL, OMM, StorageError, StorageSpec, run_storage, run_storage_pair
from .syntax import Context
from .systems import NotNormalError, QuantifierError, check_s, derive_f0, erase_context, erase_type
from .transformers import alpha_probe, gen_transformers
from .typelab import (
    Counterexample, InvalidDerivationError, SearchBudget, check_output_witness,
    enumerate_f0, probe_output, refute_input_via_output,
)

ACCEPT, REJECT, ERROR = 0, 1, 2

# Schema (under sysfdata/schemas) describing each command's --json output.
COMMAND_SCHEMAS = {
    "parse": "parse", "normalize": "trace", "whnf": "trace",
    "check-f0": "check", "check-s": "check",
    "check-deriv": "deriv_check", "check-deriv-ff": "deriv_check",
    "erase": "type_op", "godel": "type_op", "classify": "classify",
    "gen-T": "transformer", "gen-Tprime": "transformer", "alpha-probe": "alpha_probe",
    "enumerate": "enumeration", "probe-output": "probe_verdict", "refute-input": "refutation",
    "storage-check": "storage_report",
}


def load_schema(name: str) -> dict:
    from importlib import resources
    text = resources.files("sysfdata").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Input helpers

def _text(args, name: str, required: bool = True, stdin: bool = False):
    inline = getattr(args, name, None)
    path = getattr(args, f"{name}_file", None)
    if inline is not None and path is not None:
        raise UsageError(f"give --{name} or --{name}-file, not both")
    if inline is not None:
        return inline
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    if stdin:
        try:
            data = None if sys.stdin.isatty() else sys.stdin.read()
        except (OSError, ValueError, AttributeError):
            data = None
        if data and data.strip():
            return data
    if required:
        raise UsageError(f"missing --{name} (or --{name}-file, or stdin)")
    return None


def _type(args, name="type", stdin=False, required=True):
    text = _text(args, name, required, stdin)
    return None if text is None else parse_type(text, DEFAULT_ATOMS, PRELUDE)


def _term(args, name="term", stdin=False, required=True):
    text = _text(args, name, required, stdin)
    return None if text is None else parse_term(text)


def _ctx(args):
    text = _text(args, "ctx", required=False)
    return Context() if text is None else parse_context(text, DEFAULT_ATOMS, PRELUDE)


def _deriv(args, name="deriv", stdin=False, required=True):
    text = _text(args, name, required, stdin)
    if text is None:
        return None
    return Derivation.from_json(json.loads(text), DEFAULT_ATOMS, PRELUDE)


def _emit(args, payload: dict, plain: str):
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(plain)


def _pt(args, t) -> str:
    return print_term(t, unicode=not args.ascii)


def _py(args, a) -> str:
    return print_type(a, unicode=not args.ascii)


def _budget(args) -> SearchBudget:
    return SearchBudget(args.depth, args.max_terms, args.size_cap)


# ---------------------------------------------------------------------------
# Commands

def cmd_parse(args):
    given = [n for n in ("term", "type", "ctx") if getattr(args, n) is not None
             or getattr(args, f"{n}_file") is not None]
    if len(given) > 1:
        raise UsageError("parse takes exactly one of --term, --type, --ctx")
    kind = given[0] if given else "term"
    if kind == "term":
        t = _term(args, stdin=True)
        out = {"kind": "term", "text": print_term(t), "canonical": print_term(t, canonical=True)}
        plain = _pt(args, t)
    elif kind == "type":
        a = _type(args)
        out = {"kind": "type", "text": print_type(a), "canonical": print_type(a)}
        plain = _py(args, a)
    else:
        c = _ctx(args)
        out = {"kind": "context", "text": print_context(c), "canonical": print_context(c)}
        plain = print_context(c, unicode=not args.ascii)
    _emit(args, out, plain)
    return ACCEPT


def _reduce(args, whnf: bool):
    t = _term(args, stdin=True)
    fuel = args.fuel if args.fuel is not None else (DEFAULT_WHNF_FUEL if whnf else DEFAULT_NORMALIZE_FUEL)
    trace = weak_head_reduce(t, fuel) if whnf else normalize(t, fuel)
    payload = trace.to_json()
    plain = _pt(args, trace.final)
    if trace.status == FUEL_EXHAUSTED:
        plain += f"\n# fuel exhausted after {len(trace.steps)} steps"
    _emit(args, payload, plain)
    return REJECT if trace.status == FUEL_EXHAUSTED else ACCEPT


def cmd_normalize(args):
    return _reduce(args, whnf=False)


def cmd_whnf(args):
    return _reduce(args, whnf=True)


def cmd_check_f0(args):
    ctx, t, a = _ctx(args), _term(args, stdin=True), _type(args)
    d = derive_f0(ctx, t, a)
    payload = {"system": "F0", "judgment": print_judgment(ctx, t, a), "accepted": d is not None,
               "derivation": None if d is None or not args.deriv else d.to_json()}
    _emit(args, payload, "accepted" if d is not None else "rejected")
    return ACCEPT if d is not None else REJECT


def cmd_check_s(args):
    ctx, t, a = _ctx(args), _term(args, stdin=True), _type(args)
    ok = check_s(ctx, t, a)
    payload = {"system": "S", "judgment": print_judgment(ctx, t, a), "accepted": ok, "derivation": None}
    _emit(args, payload, "accepted" if ok else "rejected")
    return ACCEPT if ok else REJECT


def _check_deriv(args, system: str):
    d = _deriv(args, stdin=True)
    err = find_error(d, system)
    payload = {
        "system": system,
        "valid": err is None,
        "conclusion": print_judgment(d.ctx, d.term, d.type),
        "error": None if err is None else {"path": list(err.path), "kind": err.kind, "reason": err.reason},
    }
    _emit(args, payload, "valid" if err is None else f"invalid: {err}")
    return ACCEPT if err is None else REJECT


def cmd_check_deriv(args):
    return _check_deriv(args, "F")


def cmd_check_deriv_ff(args):
    return _check_deriv(args, "F_F")


def cmd_erase(args):
    if args.ctx is not None or args.ctx_file is not None:
        c = _ctx(args)
        src, out = print_context(c), print_context(erase_context(c))
        plain = print_context(erase_context(c), unicode=not args.ascii)
    else:
        a = _type(args, stdin=True)
        src, out = print_type(a), print_type(erase_type(a))
        plain = _py(args, erase_type(a))
    _emit(args, {"operation": "erase", "input": src, "output": out}, plain)
    return ACCEPT


def cmd_godel(args):
    a = _type(args, stdin=True)
    out = print_type(godel_translate(a))
    _emit(args, {"operation": "godel", "input": print_type(a), "output": out}, _py(args, godel_translate(a)))
    return ACCEPT


def cmd_classify(args):
    a = _type(args, stdin=True)
    rec = classify(a, tuple(args.ends_with or ()))
    rec = {"type": print_type(a), **rec}
    plain = "\n".join(f"{k}: {v}" for k, v in {**rec, "type": _py(args, a)}.items())
    _emit(args, rec, plain)
    return ACCEPT


def _gen(args, prime: bool):
    f = _type(args, stdin=True)
    g = parse_type(args.inst, DEFAULT_ATOMS, PRELUDE)
    p = gen_transformers(f, args.var, g, args.alpha_var, certify=args.deriv)
    term = p.t_prime_term if prime else p.t_term
    payload = {"type": print_type(f), "var": args.var, "instantiation": print_type(g),
               "alpha": args.alpha_var, "prime": prime, "term": print_term(term)}
    if args.deriv:
        payload["derivation"] = p.derivations[1 if prime else 0].to_json()
    _emit(args, payload, _pt(args, term))
    return ACCEPT


def cmd_gen_t(args):
    return _gen(args, prime=False)


def cmd_gen_tprime(args):
    return _gen(args, prime=True)


def cmd_alpha_probe(args):
    a = _type(args, stdin=True)
    g = parse_type(args.inst, DEFAULT_ATOMS, PRELUDE)
    fuel = args.fuel if args.fuel is not None else DEFAULT_NORMALIZE_FUEL
    if args.delta is not None:
        cases = [(parse_term(args.delta), [parse_term(s) for s in args.arg or ()])]
    else:
        r = generators.rng(args.seed)
        cases = [(generators.random_simple_term(r),
                  [generators.random_simple_term(r, 1, heads=("p", "q")) for _ in range(r.randint(0, 3))])
                 for _ in range(args.samples)]
    probes = [alpha_probe(a, args.var, g, d, ts, args.alpha_var, fuel, prime=not args.unprimed)
              for d, ts in cases]
    failures = sum(1 for p in probes if not p.alpha_free_in_nf)
    payload = {"type": print_type(a), "var": args.var, "instantiation": print_type(g),
               "prime": not args.unprimed, "failures": failures,
               "probes": [p.to_json() for p in probes]}
    plain = "\n".join(
        f"{'alpha' if p.alpha_free_in_nf else 'NO alpha'}\t{p.status}\t"
        f"{'-' if p.nf is None else _pt(args, p.nf)}" for p in probes)
    _emit(args, payload, plain)
    return ACCEPT if failures == 0 else REJECT


def cmd_enumerate(args):
    ctx, a = _ctx(args), _type(args, stdin=True)
    budget = _budget(args)
    res = enumerate_f0(ctx, a, budget)
    payload = {"ctx": print_context(ctx), "type": print_type(a), "budget": budget.to_json(),
               "complete": res.complete, "terms": [print_term(t) for t in res]}
    lines = [_pt(args, t) for t in res]
    if not res.complete:
        lines.append("# incomplete: term budget exceeded")
    plain = "\n".join(lines)
    _emit(args, payload, plain)
    return ACCEPT


def cmd_probe_output(args):
    s = _type(args, stdin=True)
    if args.witness is not None or args.deriv is not None or args.deriv_file is not None:
        if args.witness is None:
            raise UsageError("--deriv needs --witness")
        v = check_output_witness(s, parse_term(args.witness), _deriv(args), args.alpha_var)
    else:
        v = probe_output(s, _budget(args), args.alpha_var)
    payload = v.to_json()
    if isinstance(v, Counterexample):
        plain = f"counterexample: {_pt(args, v.term)} ({v.source})"
    else:
        plain = f"no counterexample up to depth {args.depth}" + ("" if v.complete else " (incomplete)")
    _emit(args, payload, plain)
    return REJECT if isinstance(v, Counterexample) else ACCEPT


def cmd_refute_input(args):
    e, t, d = _type(args), _term(args), _deriv(args, stdin=True)
    res = refute_input_via_output(e, t, d, args.alpha_var)
    payload = {"type": print_type(e), "witness": print_term(t), **res.to_json()}
    plain = f"n = {res.n}\nu = {_pt(args, res.u)}\nF0 rejects: {res.f0_rejects}"
    _emit(args, payload, plain)
    return REJECT if res.f0_rejects else ACCEPT


def cmd_storage_check(args):
    op = _term(args, "operator")
    spec_text = _text(args, "spec", stdin=True)
    spec = StorageSpec.from_json(json.loads(spec_text))
    fuel = args.fuel if args.fuel is not None else DEFAULT_STORAGE_FUEL
    out_type = None if args.output_type is None else parse_type(args.output_type, DEFAULT_ATOMS, PRELUDE)
    if out_type is None:
        rep = run_storage(op, spec, fuel)
    else:
        rep = run_storage_pair(op, spec.data_type, out_type, spec, fuel)
    payload = rep.to_json(traces=args.traces)
    lines = [f"verdict: {rep.verdict}", f"presentation insensitive: {rep.presentation_insensitive}"]
    for v in rep.values:
        tau = "-" if v.tau is None else _pt(args, v.tau)
        lines.append(f"{v.label}\t{'match' if v.match else 'no match'}\ttau = {tau}")
    _emit(args, payload, "\n".join(lines))
    return ACCEPT if rep.verdict == OMM else REJECT


# ---------------------------------------------------------------------------
# Parser

def _add_io(p, *names):
    for n in names:
        flag = n.replace("_", "-")
        p.add_argument(f"--{flag}", dest=n, default=None)
        p.add_argument(f"--{flag}-file", dest=f"{n}_file", default=None)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--fuel", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--alpha-var", default="alpha")
    common.add_argument("--ascii", action="store_true", help="plain output with \\, forall and ->")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--depth", type=int, default=6, help="maximum derivation height")
    budget.add_argument("--size-cap", type=int, default=None)
    budget.add_argument("--max-terms", type=int, default=10_000)

    top = argparse.ArgumentParser(prog="sysfdata", description=__doc__.split("\n")[0])
    sub = top.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, help_, parents=(common,)):
        p = sub.add_parser(name, parents=list(parents), help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("parse", cmd_parse, "parse and pretty-print a term, type or context")
    _add_io(p, "term", "type", "ctx")
    for name, fn, h in (("normalize", cmd_normalize, "leftmost-outermost normal form"),
                        ("whnf", cmd_whnf, "weak head normal form")):
        _add_io(add(name, fn, h), "term")
    for name, fn, h in (("check-f0", cmd_check_f0, "decide F0 typability of a normal term"),
                        ("check-s", cmd_check_s, "decide typability in the simple system")):
        p = add(name, fn, h)
        _add_io(p, "ctx", "term", "type")
        if name == "check-f0":
            p.add_argument("--deriv", action="store_true", help="include the derivation in --json output")
    for name, fn, h in (("check-deriv", cmd_check_deriv, "validate a System F derivation"),
                        ("check-deriv-ff", cmd_check_deriv_ff, "validate a derivation with restricted instantiation")):
        _add_io(add(name, fn, h), "deriv")
    p = add("erase", cmd_erase, "drop quantifiers from a type or context")
    _add_io(p, "type", "ctx")
    _add_io(add("godel", cmd_godel, "Goedel translation of a type"), "type")
    p = add("classify", cmd_classify, "polarity, properness, Lg and ends-with facts")
    _add_io(p, "type")
    p.add_argument("--ends-with", action="append", metavar="VAR")
    for name, fn, h in (("gen-T", cmd_gen_t, "coercion T_F"), ("gen-Tprime", cmd_gen_tprime, "coercion T'_F")):
        p = add(name, fn, h)
        _add_io(p, "type")
        p.add_argument("--var", default="X")
        p.add_argument("--inst", required=True, help="instantiation G")
        p.add_argument("--deriv", action="store_true", help="certify and include the typing derivation")
    p = add("alpha-probe", cmd_alpha_probe, "normalize T'_A applied to a simple term and locate alpha")
    _add_io(p, "type")
    p.add_argument("--var", default="X")
    p.add_argument("--inst", default="O -> O")
    p.add_argument("--delta", help="simple term; random samples when omitted")
    p.add_argument("--arg", action="append", help="extra argument, repeatable")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--unprimed", action="store_true", help="use T_A instead of T'_A")
    p = add("enumerate", cmd_enumerate, "bounded F0 inhabitants", (common, budget))
    _add_io(p, "ctx", "type")
    p = add("probe-output", cmd_probe_output, "look for alpha-containing inhabitants", (common, budget))
    _add_io(p, "type", "deriv")
    p.add_argument("--witness", help="explicit witness term, checked with --deriv")
    p = add("refute-input", cmd_refute_input, "turn an output counterexample into an input counterexample")
    _add_io(p, "type", "term", "deriv")
    p = add("storage-check", cmd_storage_check, "run a candidate storage operator")
    _add_io(p, "operator", "spec")
    p.add_argument("--output-type", default=None, help="check outputs at this type instead")
    p.add_argument("--traces", action="store_true", help="include full reduction traces in --json output")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return ERROR
    except (ParseError, NotNormalError, QuantifierError, GodelError, StorageError,
            InvalidDerivationError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
