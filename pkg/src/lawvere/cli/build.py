"""From parsed presentations to the library objects they describe."""

from __future__ import annotations

import os
import subprocess
import sys
from dataclasses import dataclass, field

from ..clone import Clone, CloneMorphism
from ..errors import ArityError, LawViolation, NoPresentation, UnknownSemantics
from ..finfun import (
    FinitaryFunctor,
    builtin_functors,
    constant_functor,
    dual_representable,
    representable,
    unit_functor,
)
from ..library import InitialClone, TableClone, TermClone, builtin_clone, make_normalizer
from ..semantics import morphism_from_terms
from ..terms import Signature, Term, max_var
from .dsl import (
    Builtin,
    Free,
    FunctorPresentation,
    MorphismPresentation,
    Normalizer,
    Tables,
    TheoryPresentation,
    parse_term_text,
    print_term,
)


@dataclass
class Built:
    clone: Clone
    presentation: TheoryPresentation
    warnings: list = field(default_factory=list)


class ExternalNormalizer:
    """A normal-form function served by a child process, one term per line.

    The program reads a term on stdin and answers with its normal form on
    stdout, flushing after each line.  Answers are cached.
    """

    def __init__(self, command: str, arity: dict, cwd: str | None = None):
        path = command if os.path.isabs(command) or cwd is None else os.path.join(cwd, command)
        argv = [sys.executable, path] if path.endswith(".py") else [path]
        self.proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1)
        self.arity = arity
        self.cache: dict = {}

    def __call__(self, t: Term) -> Term:
        if t not in self.cache:
            self.proc.stdin.write(print_term(t) + "\n")
            self.proc.stdin.flush()
            reply = self.proc.stdout.readline().strip()
            if not reply:
                raise UnknownSemantics("external normalizer gave no answer")
            self.cache[t] = parse_term_text(reply, self.arity)
        return self.cache[t]

    def close(self):
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)


def build_clone(P: TheoryPresentation, base_dir: str | None = None, idempotence_samples: int = 200) -> Built:
    """The clone named by the presentation's semantics clause."""
    sig = Signature(list(P.operations))
    eqs = P.equation_contexts()
    warnings = []
    sem = P.semantics
    if isinstance(sem, Free) or (isinstance(sem, Normalizer) and sem.strategy == "free"):
        if eqs:
            warnings.append(f"theory {P.name}: equations are recorded but not quotiented under free semantics")
        if not P.operations:
            return Built(InitialClone(name=P.name), P, warnings)
        return Built(TermClone(sig, None, eqs, name=P.name), P, warnings)
    if isinstance(sem, Builtin):
        C = builtin_clone(sem.id)
        pres = C.require_presentation()
        if P.operations and sorted(P.operations) != sorted(pres.signature.ops):
            raise ArityError(f"theory {P.name} declares {list(P.operations)} but builtin {sem.id} has "
                             f"{list(pres.signature.ops)}")
        for lhs, rhs, k in eqs:
            if C.from_term(lhs, k) != C.from_term(rhs, k):
                raise LawViolation(f"builtin {sem.id} does not satisfy {print_term(lhs)} = {print_term(rhs)}")
        C.name = P.name
        return Built(C, P, warnings)
    if isinstance(sem, Normalizer):
        if sem.command:
            norm = ExternalNormalizer(sem.command, P.arity, base_dir)
        else:
            norm = make_normalizer(sem.strategy, sig)
        C = TermClone(sig, norm, eqs, name=P.name)
        C.check_normalizer(idempotence_samples)
        return Built(C, P, warnings)
    if isinstance(sem, Tables):
        elements = {n: labels for n, labels in sem.homs}
        projections = {(n, i - 1): lab for (n, i), lab in sem.projs}
        table = {(n, g, fs): h for n, g, fs, h in sem.sups}
        if P.operations or eqs:
            warnings.append(f"theory {P.name}: operations and equations are ignored by table semantics")
        return Built(TableClone(elements, projections, table, name=P.name), P, warnings)
    raise UnknownSemantics(f"unknown semantics {sem!r}")


def build_morphism(M: MorphismPresentation, source: Built, target: Built) -> CloneMorphism:
    """The clone morphism fixed by generator images; source equations are checked in the target."""
    for side, built in (("source", source), ("target", target)):
        want = getattr(M, side)
        if built.presentation.name != want:
            raise ArityError(f"morphism {M.name} expects {side} {want}, got {built.presentation.name}")
    S, T = source.clone, target.clone
    try:
        sig = S.require_presentation().signature
    except NoPresentation:
        raise NoPresentation(f"source theory {S.name} has no presentation") from None
    tarity = T.require_presentation().signature.arity
    images = {}
    for op, term in M.images:
        if op not in sig.arity:
            raise ArityError(f"morphism {M.name}: {op} is not an operation of {S.name}")
        if op in images:
            raise ArityError(f"morphism {M.name}: {op} given twice")
        if max_var(term) > sig.arity[op]:
            raise ArityError(f"morphism {M.name}: image of {op} uses variables beyond x{sig.arity[op]}")
        bad = _bad_use(term, tarity)
        if bad:
            raise ArityError(f"morphism {M.name}: {bad}")
        images[op] = term
    return morphism_from_terms(S, T, images, name=M.name)


def _bad_use(t: Term, arity: dict) -> str | None:
    if not hasattr(t, "op"):
        return None
    if t.op not in arity:
        return f"unknown operation {t.op}"
    if arity[t.op] != len(t.args):
        return f"{t.op} has arity {arity[t.op]} but is applied to {len(t.args)} arguments"
    for a in t.args:
        bad = _bad_use(a, arity)
        if bad:
            return bad
    return None


def build_functor(F: FunctorPresentation) -> FinitaryFunctor:
    if F.kind == "representable":
        return representable(F.arg)
    if F.kind == "dual":
        return dual_representable(F.arg)
    if F.kind == "unit":
        return unit_functor()
    if F.kind == "constant":
        return constant_functor(F.arg)
    table = builtin_functors()
    if F.arg not in table:
        raise UnknownSemantics(f"unknown builtin functor {F.arg}")
    return table[F.arg]
