"""Command-line entry point.  Exit status: 0 all checks pass, 1 a check failed, 2 bad input."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from ..clone import LawReport, _plain, check_clone_laws, show
from ..completion import complete
from ..errors import (
    ArityOverflow,
    LawViolation,
    LawvereError,
    NonPreserving,
    NormalizerNonIdempotent,
    NotDistributive,
    PresentationError,
)
from ..finfun import check_functoriality, tensor
from ..fpcat import FinSetCategory
from ..kan import check_adjunction, free_algebra
from ..library import TableClone
from ..semantics import alg_mod_equivalence, enumerate_algebras, enumerate_models
from .build import Built, build_clone, build_functor, build_morphism
from .dsl import parse_functor, parse_morphism, parse_theory, print_term

SCHEMA = "lawvere.report/v1"
FREE_BOUND = 64
FREE_POWER_BOUND = 1 << 16
FAILURES = (LawViolation, NonPreserving, NotDistributive, NormalizerNonIdempotent, ArityOverflow)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


_WARNINGS: list[str] = []


def load_theory(path: str) -> Built:
    built = build_clone(parse_theory(_read(path)), base_dir=os.path.dirname(os.path.abspath(path)))
    _WARNINGS.extend(built.warnings)
    return built


def _element(C, t, n) -> str:
    try:
        return print_term(C.to_term(t, n))
    except LawvereError:
        return show(t)


def ambient_for(T, carrier: int) -> FinSetCategory:
    """FinSet with enough powers of the carrier for the presentation."""
    pres = T.require_presentation()
    top = max(pres.generating_arity, pres.equation_arity, 2)
    X = max(carrier, 1)
    return FinSetCategory(max(carrier, 1), power_bound=X ** top)


def _tables(alg) -> dict:
    return {s: list(f.values) for s, f in sorted(alg.ops.items())}


# --------------------------------------------------------------------------
# subcommands; each returns (report dict, text lines)


def cmd_check(args):
    built = load_theory(args.file)
    C = built.clone
    K = args.max_arity
    if isinstance(C, TableClone):
        missing = C.missing_entries()
        if missing:
            n, g, fs = missing[0]
            r = LawReport(f"clone laws for {C.name}", False, 0, ("missing table entry", n, g, list(fs)))
            return _law_output(r, built)
        K = min(K, C.max_arity)
    r = check_clone_laws(C, K, sample_limit=args.sample)
    return _law_output(r, built)


def _law_output(r: LawReport, built: Built):
    mode = "exhaustive" if r.exhaustive else "sampled"
    if r.passed:
        lines = [f"PASS {r.name}: {r.checked} instances, {mode}"]
    else:
        lines = [f"FAIL {r.name}: counterexample {_plain(r.counterexample)}"]
    return {"report": r.to_dict(), "passed": r.passed}, lines


def cmd_homset(args):
    built = load_theory(args.file)
    C = built.clone
    s = C.hom(args.n)
    elems = s.take(args.limit)
    size = len(s) if s.is_finite else None
    shown = [_element(C, t, args.n) for t in elems]
    head = f"|{C.name}({args.n})| = {size}" if size is not None else f"{C.name}({args.n}) is infinite; first {len(shown)}"
    return {"arity": args.n, "size": size, "elements": shown, "passed": True}, [head] + [f"  {e}" for e in shown]


def cmd_law(args):
    built = load_theory(args.file)
    C = built.clone
    objects = _int_list(args.objects)
    L = complete(C, max(objects, default=0))
    frags, lines = [], []
    for k in range(args.k + 1):
        for n in objects:
            for m in objects:
                s = L.hom(k, n, m)
                size = len(s) if s.is_finite else None
                elems = [[_element(C, c, n * k) for c in f] for f in s.take(args.limit)]
                frags.append({"k": k, "source": n, "target": m, "size": size, "elements": elems})
                lines.append(f"L_{k}({n},{m}): {size if size is not None else 'infinite'}")
                lines += [f"  ({', '.join(e)})" for e in elems]
    return {"fragments": frags, "passed": True}, lines


def _algebra_listing(T, carrier: int, which: str):
    C = ambient_for(T, carrier)
    if which == "algebras":
        found = enumerate_algebras(T, C, carrier)
        tables = [_tables(a) for a in found]
    else:
        found = enumerate_models(complete(T), C, carrier)
        tables = [_tables(m.restrict()) for m in found]
    noun = which[:-1] if len(found) == 1 else which
    lines = [f"{len(found)} {noun}"]
    for i, t in enumerate(tables):
        lines.append(f"  [{i}] " + "; ".join(f"{s} = {v}" for s, v in t.items()))
    return {"carrier": carrier, "count": len(found), "structures": tables, "passed": True}, lines


def cmd_algebras(args):
    return _algebra_listing(load_theory(args.file).clone, args.carrier, "algebras")


def cmd_models(args):
    return _algebra_listing(load_theory(args.file).clone, args.carrier, "models")


def cmd_compare(args):
    T = load_theory(args.file).clone
    C = ambient_for(T, args.carrier)
    r = alg_mod_equivalence(T, C, carriers=[args.carrier])
    counts = r.details.get("counts", {}).get(str(args.carrier), {})
    a, m = counts.get("algebras"), counts.get("models")
    lines = [f"algebras: {a}", f"models: {m}", f"bijection: {str(r.passed).lower()}"]
    if not r.passed:
        lines.append(f"counterexample: {_plain(r.counterexample)}")
    return {"algebras": a, "models": m, "bijection": r.passed, "exhaustive": r.exhaustive, "passed": r.passed}, lines


def cmd_free(args):
    S, T = load_theory(args.source), load_theory(args.target)
    F = build_morphism(parse_morphism(_read(args.morphism)), S, T)
    # generous bounds: the free carrier and the adjunction test carriers live here too
    C = FinSetCategory(FREE_BOUND, power_bound=FREE_POWER_BOUND)
    base = enumerate_algebras(S.clone, C, args.carrier)
    if not 0 <= args.algebra_index < len(base):
        raise UsageError(f"{S.clone.name} has {len(base)} algebras on {args.carrier}; index {args.algebra_index} is out of range")
    X = base[args.algebra_index]
    fa = free_algebra(F, X)
    lines = [f"free {T.clone.name}-algebra on {S.clone.name}-algebra [{args.algebra_index}] of size {args.carrier}",
             f"carrier: {fa.algebra.carrier}"]
    lines += [f"  {s} = {v}" for s, v in _tables(fa.algebra).items()]
    lines.append(f"unit: {list(fa.unit.values)}")
    certs = []
    for r in fa.tensor.reports:
        certs.append({"name": r.name, "passed": r.passed, "details": _plain(r.details)})
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
    report = {"carrier": fa.algebra.carrier, "operations": _tables(fa.algebra), "unit": list(fa.unit.values),
              "certificates": certs, "passed": True}
    if args.adjunction_bound is not None:
        adj = check_adjunction(F, X, args.adjunction_bound, fa)
        report["adjunction"] = adj.to_dict()
        report["passed"] = adj.passed
        lines.append(f"{'PASS' if adj.passed else 'FAIL'} {adj.name} up to carrier {args.adjunction_bound}"
                     + ("" if adj.passed else f": {_plain(adj.counterexample)}"))
    return report, lines


def cmd_tensor(args):
    A = build_functor(parse_functor(_read(args.a)))
    B = build_functor(parse_functor(_read(args.b)))
    AB = tensor(A, B)
    sizes = [len(AB(n)) for n in range(args.n + 1)]
    ok = check_functoriality(AB, args.n)
    lines = [f"({A.name} (x) {B.name})({n}) has {s} elements" for n, s in enumerate(sizes)]
    lines.append(f"{'PASS' if ok else 'FAIL'} functoriality up to {args.n}")
    return {"sizes": sizes, "functorial": bool(ok), "passed": bool(ok)}, lines


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of naturals, got {text!r}") from None


# --------------------------------------------------------------------------


def _nat(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return v


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="accepted and ignored")

    p = argparse.ArgumentParser(prog="lawvere", description="clones, Lawvere theories and their finite models")
    p.add_argument("--json", action="store_true", default=False, help="machine-readable report")
    p.add_argument("--seed", type=int, default=None, help="accepted and ignored; all computation is deterministic")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="check the clone laws")
    s.add_argument("file")
    s.add_argument("--max-arity", type=_nat, default=3)
    s.add_argument("--sample", type=_nat, default=100)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("homset", parents=[common], help="list a hom-set of the clone")
    s.add_argument("file")
    s.add_argument("-n", type=_nat, required=True)
    s.add_argument("--limit", type=_nat, default=20)
    s.set_defaults(run=cmd_homset)

    s = sub.add_parser("law", parents=[common], help="print hom fragments of the Lawvere theory")
    s.add_argument("file")
    s.add_argument("--objects", required=True)
    s.add_argument("-k", type=_nat, default=1)
    s.add_argument("--limit", type=_nat, default=5)
    s.set_defaults(run=cmd_law)

    for name, fn in (("models", cmd_models), ("algebras", cmd_algebras), ("compare-alg-mod", cmd_compare)):
        s = sub.add_parser(name, parents=[common], help=f"{name} on a finite carrier")
        s.add_argument("file")
        s.add_argument("--carrier", type=_nat, required=True)
        s.set_defaults(run=fn)

    s = sub.add_parser("free", parents=[common], help="free algebra along a clone morphism")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--morphism", required=True)
    s.add_argument("--carrier", type=_nat, required=True)
    s.add_argument("--algebra-index", type=_nat, default=0)
    s.add_argument("--adjunction-bound", type=_nat, default=None)
    s.set_defaults(run=cmd_free)

    s = sub.add_parser("tensor", parents=[common], help="substitution tensor of two functors")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-n", type=_nat, required=True)
    s.set_defaults(run=cmd_tensor)
    return p


def _emit(payload: dict, lines: list[str], as_json: bool, out):
    if as_json:
        out.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    base = {"schema": SCHEMA, "command": args.command}
    _WARNINGS.clear()
    try:
        payload, lines = args.run(args)
        code = 0 if payload.get("passed", True) else 1
    except (PresentationError, UsageError) as exc:
        payload, lines, code = {"error": str(exc), "kind": type(exc).__name__, "passed": False}, [f"error: {exc}"], 2
    except FAILURES as exc:
        payload, lines, code = {"error": str(exc), "kind": type(exc).__name__, "passed": False}, [f"FAIL {exc}"], 1
    except LawvereError as exc:
        payload, lines, code = {"error": str(exc), "kind": type(exc).__name__, "passed": False}, [f"error: {exc}"], 2
    for w in _WARNINGS:
        err.write(f"warning: {w}\n")
    if _WARNINGS:
        payload["warnings"] = list(_WARNINGS)
    _emit({**base, **payload}, lines, args.json, out if code != 2 or args.json else err)
    return code


if __name__ == "__main__":
    sys.exit(main())
