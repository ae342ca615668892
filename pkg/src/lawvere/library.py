"""Closed-form builtin clones, alongside term-backed and table-backed ones."""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Sequence

from .clone import Clone, Presentation
from .errors import ArityOverflow, LawViolation, NormalizerNonIdempotent, SearchSpaceTooLarge
from .finfun import POINT, EnumerableSet, nonempty_subsets, subsets
from .terms import App, Signature, Term, Var, max_var, substitute

x1, x2, x3 = Var(0), Var(1), Var(2)


def _eq(lhs, rhs):
    return (lhs, rhs, max(max_var(lhs), max_var(rhs)))


class InitialClone(Clone):
    """Projections only: hom(n) = {0..n-1}, element i standing for x_{i+1}."""

    def __init__(self, name="initial"):
        super().__init__()
        self.name = name
        self.presentation = Presentation(Signature([]), (), lambda t, n: Var(t))

    def _hom(self, n):
        return EnumerableSet.finite(range(n), f"{self.name}({n})")

    def proj(self, n, i):
        return i

    def superpose(self, g, fs, n):
        return fs[g]


class PointedClone(Clone):
    """One constant: hom(n) = {POINT, 0, ..., n-1}."""

    def __init__(self, name="pointed", symbol="pt"):
        super().__init__()
        self.name = name
        self.symbol = symbol
        self.presentation = Presentation(
            Signature([(symbol, 0)]), (), lambda t, n: App(symbol, ()) if t == POINT else Var(t)
        )

    def _hom(self, n):
        return EnumerableSet.finite((POINT,) + tuple(range(n)), f"{self.name}({n})")

    def proj(self, n, i):
        return i

    def superpose(self, g, fs, n):
        return POINT if g == POINT else fs[g]

    def generator(self, op):
        if op != self.symbol:
            return super().generator(op)
        return POINT


class SemilatticeClone(Clone):
    """Semilattice operations as the sets of variables they mention.

    The bounded variant also allows the empty set, standing for the top
    constant.
    """

    def __init__(self, bounded=False, name=None, meet="meet", top="top"):
        super().__init__()
        self.bounded = bounded
        self.meet, self.top = meet, top
        self.name = name or ("bounded-semilattice" if bounded else "semilattice")
        ops = [(meet, 2)] + ([(top, 0)] if bounded else [])
        m = lambda a, b: App(meet, (a, b))
        eqs = [_eq(m(x1, x1), x1), _eq(m(x1, x2), m(x2, x1)), _eq(m(m(x1, x2), x3), m(x1, m(x2, x3)))]
        if bounded:
            eqs.append(_eq(m(x1, App(top, ())), x1))
        self.presentation = Presentation(Signature(ops), tuple(eqs), self._to_term)

    def _to_term(self, t, n):
        if not t:
            return App(self.top, ())
        term = Var(t[0])
        for i in t[1:]:
            term = App(self.meet, (term, Var(i)))
        return term

    def _hom(self, n):
        elems = subsets(n) if self.bounded else nonempty_subsets(n)
        return EnumerableSet.finite(elems, f"{self.name}({n})")

    def proj(self, n, i):
        return (i,)

    def superpose(self, g, fs, n):
        out = set()
        for i in g:
            out.update(fs[i])
        return tuple(sorted(out))

    def generator(self, op):
        if op == self.meet:
            return (0, 1)
        if op == self.top and self.bounded:
            return ()
        return super().generator(op)


class MonoidActionClone(Clone):
    """The clone of left M-sets for a finite monoid M.

    Elements of hom(n) are pairs (m, i) meaning m . x_{i+1}.  ``table[a][b]``
    is the product a*b of monoid elements 0..|M|-1; 0 is the unit.
    ``generators`` names the monoid elements used as unary operations.
    """

    def __init__(self, table, generators: dict[str, int], equations=(), name="M-set"):
        super().__init__()
        self.table = tuple(tuple(r) for r in table)
        self.size = len(self.table)
        self.generators = dict(generators)
        self.name = name
        self.words = self._words()
        sig = Signature([(g, 1) for g in self.generators])
        self.presentation = Presentation(sig, tuple(equations), self._to_term)

    def _words(self):
        # shortest words, exploring generators in declaration order
        words = {0: []}
        queue = deque([0])
        while queue:
            m = queue.popleft()
            for name, g in self.generators.items():
                gm = self.table[g][m]
                if gm not in words:
                    words[gm] = [name] + words[m]
                    queue.append(gm)
        if len(words) != self.size:
            raise ValueError("generators do not generate the monoid")
        return words

    def _to_term(self, t, n):
        m, i = t
        term = Var(i)
        for name in reversed(self.words[m]):
            term = App(name, (term,))
        return term

    def _hom(self, n):
        return EnumerableSet.finite(itertools.product(range(self.size), range(n)), f"{self.name}({n})")

    def proj(self, n, i):
        return (0, i)

    def superpose(self, g, fs, n):
        m, i = g
        m2, j = fs[i]
        return (self.table[m][m2], j)

    def generator(self, op):
        if op in self.generators:
            return (self.generators[op], 0)
        return super().generator(op)


def z2_set_clone() -> MonoidActionClone:
    """Sets with an involution s."""
    s = lambda t: App("s", (t,))
    return MonoidActionClone([[0, 1], [1, 0]], {"s": 1}, [_eq(s(s(x1)), x1)], name="z2-set")


def idempotent_set_clone() -> MonoidActionClone:
    """Sets with an idempotent endomap e."""
    e = lambda t: App("e", (t,))
    return MonoidActionClone([[0, 1], [1, 1]], {"e": 1}, [_eq(e(e(x1)), e(x1))], name="idempotent-set")


# --------------------------------------------------------------------------
# normal forms for term clones


def term_key(t: Term):
    if isinstance(t, Var):
        return (0, t.index)
    return (1, t.op, tuple(term_key(a) for a in t.args))


def _flatten(t: Term, op: str, out: list):
    if isinstance(t, App) and t.op == op:
        for a in t.args:
            _flatten(a, op, out)
    else:
        out.append(t)


def _rebuild(op, parts):
    term = parts[0]
    for p in parts[1:]:
        term = App(op, (term, p))
    return term


def make_normalizer(strategy: str, signature: Signature) -> Callable[[Term], Term]:
    """Rewriting strategies: free, ac, aci, involution, idempotent.

    ``ac``/``aci`` treat every binary operation as associative and
    commutative (and idempotent); ``involution``/``idempotent`` act on every
    unary one.
    """
    binary = {s for s, a in signature if a == 2}
    unary = {s for s, a in signature if a == 1}
    if strategy == "free":
        return lambda t: t
    if strategy not in ("ac", "aci", "involution", "idempotent"):
        raise KeyError(strategy)

    def root(t: App) -> Term:
        if strategy in ("ac", "aci") and t.op in binary:
            parts: list = []
            _flatten(t, t.op, parts)
            parts.sort(key=term_key)
            if strategy == "aci":
                parts = [p for k, p in enumerate(parts) if k == 0 or p != parts[k - 1]]
            return _rebuild(t.op, parts)
        if strategy in ("involution", "idempotent") and t.op in unary:
            inner = t.args[0]
            if isinstance(inner, App) and inner.op == t.op:
                return inner.args[0] if strategy == "involution" else inner
        return t

    def normalize(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        return root(App(t.op, tuple(normalize(a) for a in t.args)))

    return normalize


def term_model_closure(signature: Signature, normalize: Callable[[Term], Term], n: int, cap: int = 5000) -> list[Term]:
    """All normal forms in n variables, by closing generators under the operations.

    Raises SearchSpaceTooLarge if more than ``cap`` normal forms appear.
    """
    found = {}
    for t in [Var(i) for i in range(n)] + [App(s, ()) for s, a in signature if a == 0]:
        found.setdefault(normalize(t), None)
    frontier = list(found)
    while frontier:
        current = list(found)
        frontier_set = set(frontier)
        fresh = []
        for s, a in signature:
            if a == 0:
                continue
            for args in itertools.product(current, repeat=a):
                if not any(arg in frontier_set for arg in args):
                    continue
                t = normalize(App(s, args))
                if t not in found:
                    found[t] = None
                    fresh.append(t)
                    if len(found) > cap:
                        raise SearchSpaceTooLarge(f"more than {cap} normal forms in arity {n}")
        frontier = fresh
    return list(found)


class TermClone(Clone):
    """Terms modulo a normal-form function; superposition is substitution.

    hom(n) is finite when the term closure terminates within ``closure_cap``
    normal forms, and a lazy height-ordered enumeration otherwise.
    """

    def __init__(self, signature: Signature, normalize=None, equations=(), name="terms", closure_cap=2000,
                 check_idempotent: int = 0):
        super().__init__()
        self.signature = signature
        self.normalize = normalize or (lambda t: t)
        self.is_free = normalize is None
        self.name = name
        self.closure_cap = closure_cap
        self.presentation = Presentation(signature, tuple(equations), lambda t, n: t)
        if check_idempotent:
            self.check_normalizer(check_idempotent)

    def check_normalizer(self, samples: int = 200, max_arity: int = 2):
        for n in range(max_arity + 1):
            for t in itertools.islice(self.signature.enumerate_terms(n), samples):
                once = self.normalize(t)
                if self.normalize(once) != once:
                    raise NormalizerNonIdempotent(f"normalizer is not idempotent on {t}: {once} -> {self.normalize(once)}")

    def _hom(self, n):
        sig = self.signature
        if self.is_free and sig.terms_finite(n):
            return EnumerableSet.finite(sig.enumerate_terms(n), f"{self.name}({n})")
        if not self.is_free:
            try:
                elems = term_model_closure(sig, self.normalize, n, self.closure_cap)
                return EnumerableSet.finite(elems, f"{self.name}({n})")
            except SearchSpaceTooLarge:
                pass

        def enum():
            seen = set()
            for t in sig.enumerate_terms(n):
                u = self.normalize(t)
                if u not in seen:
                    seen.add(u)
                    yield u

        return EnumerableSet.lazy(enum, description=f"{self.name}({n})")

    def proj(self, n, i):
        return Var(i)

    def superpose(self, g, fs, n):
        return self.normalize(substitute(g, list(fs)))

    def generator(self, op):
        a = self.signature.arity[op]
        return self.normalize(App(op, tuple(Var(i) for i in range(a))))


def free_binary_clone(symbol="f") -> TermClone:
    return TermClone(Signature([(symbol, 2)]), name="free-binary")


class TableClone(Clone):
    """A clone given by explicit finite tables up to ``max_arity``.

    ``elements[n]`` lists labels of hom(n); ``projections[(n, i)]`` is a
    label; ``table[(n, g, fs)]`` is the label of the superposition.
    """

    def __init__(self, elements: dict, projections: dict, table: dict, name="tables"):
        super().__init__()
        self.elements = {n: tuple(v) for n, v in elements.items()}
        self.max_arity = max(self.elements, default=-1)
        self.projections = dict(projections)
        self.table = dict(table)
        self.name = name

    def _guard(self, n):
        if n > self.max_arity or n not in self.elements:
            raise ArityOverflow(f"{self.name}: arity {n} exceeds tabulated arity {self.max_arity}")

    def _hom(self, n):
        self._guard(n)
        return EnumerableSet.finite(self.elements[n], f"{self.name}({n})")

    def proj(self, n, i):
        self._guard(n)
        return self.projections[(n, i)]

    def superpose(self, g, fs, n):
        self._guard(n)
        self._guard(len(fs))
        key = (n, g, tuple(fs))
        if key not in self.table:
            raise LawViolation(f"{self.name}: no table entry for {g}({', '.join(fs)}) at arity {n}")
        return self.table[key]

    def missing_entries(self) -> list:
        out = []
        for n in range(self.max_arity + 1):
            for m in range(self.max_arity + 1):
                for g in self.elements.get(m, ()):
                    for fs in itertools.product(self.elements.get(n, ()), repeat=m):
                        if (n, g, fs) not in self.table:
                            out.append((n, g, fs))
        return out


def builtin_clones() -> dict[str, Clone]:
    """Fresh instances of the built-in clones, keyed by their DSL identifiers."""
    return {
        "initial": InitialClone(),
        "pointed": PointedClone(),
        "semilattice": SemilatticeClone(),
        "bounded-semilattice": SemilatticeClone(bounded=True),
        "z2-set": z2_set_clone(),
        "idempotent-set": idempotent_set_clone(),
        "free-binary": free_binary_clone(),
    }


BUILTIN_NAMES = ("initial", "pointed", "semilattice", "bounded-semilattice", "z2-set", "idempotent-set", "free-binary")


def builtin_clone(name: str) -> Clone:
    return builtin_clones()[name]
