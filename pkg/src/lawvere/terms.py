"""First-order terms over a finitary signature, with variables x1, x2, ...

Variables are stored 0-based (``Var(0)`` prints as ``x1``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

import numpy as np

from . import kernels


@dataclass(frozen=True, order=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        return f"{self.op}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def height(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    return 1 + max((height(a) for a in t.args), default=-1)


def max_var(t: Term) -> int:
    """Largest variable index used plus one (the least context arity)."""
    if isinstance(t, Var):
        return t.index + 1
    return max((max_var(a) for a in t.args), default=0)


def variables(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def substitute(t: Term, env: Sequence[Term]) -> Term:
    if isinstance(t, Var):
        return env[t.index]
    return App(t.op, tuple(substitute(a, env) for a in t.args))


def rename(t: Term, mapping: Sequence[int]) -> Term:
    return substitute(t, [Var(i) for i in mapping])


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


class Signature:
    """Operation symbols with arities, in declaration order."""

    def __init__(self, ops: Sequence[tuple[str, int]]):
        self.ops = tuple((str(s), int(a)) for s, a in ops)
        self.arity = dict(self.ops)
        if len(self.arity) != len(self.ops):
            raise ValueError("duplicate operation symbol")

    def __iter__(self):
        return iter(self.ops)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.ops == other.ops

    def __hash__(self):
        return hash(self.ops)

    def __repr__(self):
        return "Signature(" + ", ".join(f"{s}:{a}" for s, a in self.ops) + ")"

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.ops), default=0)

    def check(self, t: Term, n: int | None = None) -> None:
        if isinstance(t, Var):
            if n is not None and t.index >= n:
                raise ValueError(f"variable {t} outside context of arity {n}")
            return
        if t.op not in self.arity:
            raise ValueError(f"unknown operation {t.op}")
        if len(t.args) != self.arity[t.op]:
            raise ValueError(f"{t.op} expects {self.arity[t.op]} arguments, got {len(t.args)}")
        for a in t.args:
            self.check(a, n)

    def terms_finite(self, n: int) -> bool:
        """Whether the set of terms in n variables is finite."""
        if any(a > 0 for _, a in self.ops):
            return n == 0 and not any(a == 0 for _, a in self.ops)
        return True

    def terms_by_height(self, n: int) -> Iterator[list[Term]]:
        """Yield the list of terms of height exactly h, for h = 0, 1, ...

        Within a level the order is: operations in declaration order, then
        the first argument position reaching height h-1, then the
        lexicographic order of argument tuples.
        """
        levels: list[list[Term]] = []
        level0 = [Var(i) for i in range(n)] + [App(s, ()) for s, a in self.ops if a == 0]
        if not level0:
            return
        levels.append(level0)
        yield level0
        while True:
            h = len(levels)
            below = [t for lev in levels[:-1] for t in lev]  # height < h-1
            upto = below + levels[-1]  # height <= h-1
            top = levels[-1]
            out = []
            for s, a in self.ops:
                if a == 0:
                    continue
                for p in range(a):
                    pools = [below] * p + [top] + [upto] * (a - p - 1)
                    for args in itertools.product(*pools):
                        out.append(App(s, args))
            if not out:
                return
            levels.append(out)
            yield out

    def enumerate_terms(self, n: int) -> Iterator[Term]:
        for level in self.terms_by_height(n):
            yield from level


def parse_term(text: str) -> Term:
    """Parse ``f(x1,g(x2))`` style terms.  Constants may be written ``c()`` or ``c``."""
    from .cli.dsl import parse_term_text

    return parse_term_text(text)


# --------------------------------------------------------------------------
# compiled evaluation over finite tables


def compile_term(t: Term, op_index: dict[str, int]):
    """Postfix program for :func:`kernels.eval_program`."""
    kinds, args = [], []

    def walk(u):
        if isinstance(u, Var):
            kinds.append(kernels.OP_VAR)
            args.append(u.index)
            return
        for a in u.args:
            walk(a)
        kinds.append(kernels.OP_APPLY)
        args.append(op_index[u.op])

    walk(t)
    return np.array(kinds, dtype=kernels.INDEX), np.array(args, dtype=kernels.INDEX)


class TableLayout:
    """Packing of one table per operation, for a carrier of size q, into one row."""

    def __init__(self, signature: Signature, q: int):
        self.signature = signature
        self.q = q
        self.op_index = {s: i for i, (s, _) in enumerate(signature.ops)}
        self.arity = np.array([a for _, a in signature.ops], dtype=kernels.INDEX)
        widths = [q ** a for _, a in signature.ops]
        self.offset = np.array([0] + list(itertools.accumulate(widths))[:-1], dtype=kernels.INDEX)
        self.width = sum(widths)
        self.widths = widths

    def evaluate(self, t: Term, tables: np.ndarray, nvars: int, impl=None) -> np.ndarray:
        """Value table of ``t`` on X^nvars for each candidate row of ``tables``."""
        tables = np.asarray(tables, dtype=kernels.INDEX)
        if tables.ndim == 1:
            tables = tables[None, :]
        if tables.shape[0] == 0 or self.q ** nvars == 0:
            return np.zeros((tables.shape[0], self.q ** nvars), dtype=kernels.INDEX)
        return kernels.eval_program(
            compile_term(t, self.op_index), self.arity, self.offset, tables, self.q, nvars, impl
        )

    def split(self, row) -> dict[str, np.ndarray]:
        row = np.asarray(row)
        return {s: row[o:o + w] for (s, _), o, w in zip(self.signature.ops, self.offset.tolist(), self.widths)}


def evaluate_term(t: Term, interp: dict[str, Callable], env: Sequence):
    """Evaluate a term given operation implementations and a variable environment."""
    if isinstance(t, Var):
        return env[t.index]
    return interp[t.op](*[evaluate_term(a, interp, env) for a in t.args])
