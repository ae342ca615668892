"""Tensors by representables and the completion of a clone to its Lawvere theory.

In :class:`LawvereTheoryCat` the object ``n`` stands for X^(n) and

    hom(k, n, m) = C(n*k)^m

Variables of C(n*k) are ordered in k blocks of n: block ``b`` holds the
coordinates of the b-th argument.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .clone import (
    Clone,
    CloneMorphism,
    FSetCategory,
    FSetFunctor,
    LawReport,
    SubClone,
    as_category,
    check_clone_iso,
    check_functor,
    linear_compose,
    reindex,
    show,
)
from .errors import NotFinite, NotFound, PowerMissing, SearchSpaceTooLarge
from .finfun import EnumerableSet, injection, product_set

EXACT_CAP = 1 << 18
SEARCH_CAP = 1 << 16


@dataclass
class TensorWitness:
    """An element ``i`` of hom(n, X, Z) meant to exhibit Z as the tensor of X by y_n."""

    base: Any
    exponent: int
    vertex: Any
    i: Any
    projections: list | None = None


class LawvereTheoryCat(FSetCategory):
    """The completion L of a clone under tensors by representables."""

    def __init__(self, clone: Clone, max_object: int = 3):
        self.clone = clone
        self.max_object = max_object
        self.name = f"L({clone.name})"
        self._homs = {}

    @property
    def objects(self):
        return list(range(self.max_object + 1))

    distinguished = 1

    def hom(self, k, n, m):
        key = (k, n, m)
        if key not in self._homs:
            self._homs[key] = product_set([self.clone.hom(n * k)] * m, f"L_{k}({n},{m})")
        return self._homs[key]

    def proj(self, k, i, n):
        C = self.clone
        return tuple(C.proj(n * k, i * n + c) for c in range(n))

    def compose(self, g, fs, q, X, Y, Z):
        flat = [f[c] for f in fs for c in range(Y)]
        return tuple(self.clone.superpose(g_r, flat, X * q) for g_r in g)

    def componentwise_hom(self, k, Z, Y):
        return (1, Y)

    def split_components(self, f, Y):
        return [(c,) for c in f]

    def join_components(self, parts, Y):
        return tuple(p[0] for p in parts)

    def tensor(self, X, n):
        C = self.clone
        v = X * n
        i = tuple(C.proj(v, r) for r in range(v))
        ps = [tuple(C.proj(v, j * X + c) for c in range(X)) for j in range(n)]
        return TensorWitness(X, n, v, i, ps)

    def pairing(self, gs, k, Y, X):
        """The map into X^(X*len(gs)) with components gs (each in hom(k, Y, X))."""
        return tuple(c for g in gs for c in g)


def complete(C: Clone, max_object: int = 3) -> LawvereTheoryCat:
    return LawvereTheoryCat(C, max_object)


# --------------------------------------------------------------------------
# tensors


def _factor(M: FSetCategory, k, Z, Y):
    comp = M.componentwise_hom(k, Z, Y)
    return (Y, 1) if comp is None else comp


def _finite_small(s: EnumerableSet, cap: int) -> bool:
    return s.is_finite and len(s) <= cap


def _search(s: EnumerableSet, predicate, cap: int):
    if not s.is_finite:
        raise NotFinite("search over an infinite hom-set")
    if len(s) > cap:
        raise SearchSpaceTooLarge(f"search over {len(s)} candidates exceeds {cap}")
    for g in s:
        if predicate(g):
            return g
    raise NotFound("no element satisfies the universal property")


def power_from_tensor(M, w: TensorWitness, cap: int = SEARCH_CAP, use_chosen: bool = False) -> list:
    """p_1..p_n in hom(1, Z, X) with p_j o i = pi_j, found from the universal property.

    The search is run per component when the category reports that
    hom(1, Z, X) splits.  With ``use_chosen`` the witness's own projections
    are returned when present.
    """
    M = as_category(M)
    X, n, Z, i = w.base, w.exponent, w.vertex, w.i
    if use_chosen and w.projections is not None:
        return list(w.projections)
    comp = M.componentwise_hom(1, Z, X)
    X1 = X if comp is None else comp[0]
    candidates = M.hom(1, Z, X1)
    out = []
    for j in range(n):
        target = M.proj(n, j, X)
        parts = [target] if comp is None else M.split_components(target, X)
        found = [_search(candidates, lambda g, part=part: M.compose(g, [i], n, X, Z, X1) == part, cap)
                 for part in parts]
        out.append(found[0] if comp is None else M.join_components(found, X))
    return out


def tensor_from_power(M, X, n: int, Z, ps: Sequence, cap: int = SEARCH_CAP) -> TensorWitness:
    """The i in hom(n, X, Z) with p_j o i = pi_j for all j."""
    M = as_category(M)

    def ok(i):
        return all(M.compose(p, [i], n, X, Z, X) == M.proj(n, j, X) for j, p in enumerate(ps))

    pis = [M.proj(n, j, X) for j in range(n)]
    if hasattr(M, "pairing"):
        cand = M.pairing(pis, n, X, X)
        if ok(cand):
            return TensorWitness(X, n, Z, cand, list(ps))
    return TensorWitness(X, n, Z, _search(M.hom(n, X, Z), ok, cap), list(ps))


def copower_equations(M, w: TensorWitness, ps: Sequence) -> LawReport:
    """i o (p_1, ..., p_n) = 1_Z and p_k o i = pi_k."""
    M = as_category(M)
    X, n, Z, i = w.base, w.exponent, w.vertex, w.i
    name = "copower equations"
    if len(ps) != n:
        return LawReport(name, False, 0, ("wrong number of projections", len(ps), n))
    if M.compose(i, list(ps), 1, Z, X, Z) != M.identity(Z):
        return LawReport(name, False, 1, ("i o (p) != 1_Z",))
    for k, p in enumerate(ps):
        if M.compose(p, [i], n, X, Z, X) != M.proj(n, k, X):
            return LawReport(name, False, 2 + k, ("p o i != pi", k))
    return LawReport(name, True, n + 1)


def verify_tensor(M, w: TensorWitness, bound: int = 2, objects=None, cap: int = EXACT_CAP,
                  sample_limit: int = 200) -> LawReport:
    """Check that g -> g (x) (i, ..., i) maps hom(k, Z, Y) bijectively onto hom(k n, X, Y).

    Runs over Y in ``objects`` and k <= bound.  Hom-sets up to ``cap``
    elements (per component, where homs split) are checked exactly;
    larger ones by a two-sided inverse on samples.  The equational
    characterisation is checked as well.
    """
    M = as_category(M)
    X, n, Z, i = w.base, w.exponent, w.vertex, w.i
    objects = list(M.objects if objects is None else objects)
    name = f"tensor {X} by y_{n} -> {Z}"
    checked = 0
    exhaustive = True
    try:
        ps = power_from_tensor(M, w, use_chosen=False)
    except (NotFound, SearchSpaceTooLarge, NotFinite):
        ps = list(w.projections) if w.projections is not None else None
    if ps is None:
        return LawReport(name, False, 0, ("no projections satisfy the universal property",), True)
    eqs = copower_equations(M, w, ps)
    if not eqs.passed:
        return LawReport(name, False, eqs.checked, eqs.counterexample, True)
    checked += eqs.checked

    moved = {}

    def forward(g, k, Y1):
        # g (x) (i, ..., i), with the reindexed copies of i computed once per k
        if k not in moved:
            moved[k] = [reindex(M, injection([n] * k, c), i, X, Z) for c in range(k)]
        return M.compose(g, moved[k], k * n, X, Z, Y1)

    def backward(h, k, Y1):
        # position c*n + j receives p_j o pi_c
        args = [M.compose(ps[j], [M.proj(k, c, Z)], k, Z, Z, X) for c in range(k) for j in range(n)]
        return M.compose(h, args, k, Z, X, Y1)

    done = set()
    skipped = []
    for Y in objects:
        for k in range(bound + 1):
            Y1, _ = _factor(M, k, Z, Y)
            if (k, Y1) in done:
                continue
            done.add((k, Y1))
            try:
                src, tgt = M.hom(k, Z, Y1), M.hom(k * n, X, Y1)
            except PowerMissing:
                skipped.append((str(Y), k))
                continue
            if _finite_small(src, cap) and _finite_small(tgt, cap):
                if len(src) != len(tgt):
                    return LawReport(name, False, checked, ("cardinality", Y, k, len(src), len(tgt)), exhaustive)
                images = set()
                for g in src:
                    h = forward(g, k, Y1)
                    checked += 1
                    if h not in tgt:
                        return LawReport(name, False, checked, ("image outside hom", Y, k, show(g)), exhaustive)
                    images.add(h)
                if len(images) != len(src):
                    return LawReport(name, False, checked, ("not injective", Y, k), exhaustive)
            else:
                exhaustive = False
                for g in src.take(sample_limit):
                    checked += 1
                    if backward(forward(g, k, Y1), k, Y1) != g:
                        return LawReport(name, False, checked, ("left inverse", Y, k, show(g)), exhaustive)
                for h in tgt.take(sample_limit):
                    checked += 1
                    if forward(backward(h, k, Y1), k, Y1) != h:
                        return LawReport(name, False, checked, ("right inverse", Y, k, show(h)), exhaustive)
    return LawReport(name, True, checked, None, exhaustive,
                     {"bound": bound, "objects": [str(o) for o in objects], "skipped": skipped})


def compose_witnesses(M, w1: TensorWitness, w2: TensorWitness) -> TensorWitness:
    """From Z1 = y_n (x) X and Z2 = y_m (x) Z1, a witness of Z2 as y_{nm} (x) X.

    The composite is i2 (x) (i1, ..., i1) read in arity m*n, the same
    block order used everywhere else.
    """
    M = as_category(M)
    if w2.base != w1.vertex:
        raise ValueError("witnesses do not compose")
    n, m = w1.exponent, w2.exponent
    i = linear_compose(M, w2.i, [w1.i] * m, [n] * m, w1.base, w1.vertex, w2.vertex)
    ps = None
    if w1.projections is not None and w2.projections is not None:
        # position a*n + b reads coordinate b of block a
        ps = [M.compose(w1.projections[b], [w2.projections[a]], 1, w2.vertex, w1.vertex, w1.base)
              for a in range(m) for b in range(n)]
    return TensorWitness(w1.base, n * m, w2.vertex, i, ps)


# --------------------------------------------------------------------------
# reflection and one-object restriction


def reflection_unit(C: Clone, L: LawvereTheoryCat | None = None) -> FSetFunctor:
    """The functor from C (one object) to L(C) sending the object to X^(1)."""
    L = L or complete(C)
    return FSetFunctor(C, L, lambda X: 1, lambda n, X, Y, t: (t,), f"unit[{C.name}]")


def check_fully_faithful(C: Clone, bound: int = 4, sample_limit: int = 200) -> LawReport:
    """hom(k, 1, 1) in L(C) is exactly {(t,) : t in C(k)}."""
    L = complete(C)
    name = f"unit fully faithful {C.name}"
    checked = 0
    exhaustive = True
    for k in range(bound + 1):
        src, tgt = C.hom(k), L.hom(k, 1, 1)
        if src.is_finite:
            images = {(t,) for t in src}
            checked += len(images)
            if len(images) != len(src) or images != set(tgt):
                return LawReport(name, False, checked, ("hom mismatch", k))
        else:
            exhaustive = False
            window = set(tgt.take(sample_limit * 4))
            for t in src.take(sample_limit):
                checked += 1
                if (t,) not in window:
                    return LawReport(name, False, checked, ("missing", k, show(t)), exhaustive)
    functor = check_functor(reflection_unit(C, L), max_arity=2, sample_limit=50)
    return LawReport.combine(name, [LawReport("hom bijection", True, checked, None, exhaustive), functor])


def one_object_restriction(L: LawvereTheoryCat) -> Clone:
    """The clone at the distinguished object X^(1); elements are 1-tuples."""
    return SubClone(L, L.distinguished, name=f"{L.name}|1")


def check_restriction_roundtrip(C: Clone, max_arity: int = 3, sample_limit: int = 100) -> LawReport:
    """one_object_restriction(complete(C)) is isomorphic to C via t <-> (t,)."""
    R = one_object_restriction(complete(C))
    there = CloneMorphism(C, R, lambda n, t: (t,), name="wrap")
    back = CloneMorphism(R, C, lambda n, t: t[0], name="unwrap")
    report = check_clone_iso(there, back, max_arity, sample_limit)
    report.name = f"restriction o complete = id on {C.name}"
    return report


def check_completion_roundtrip(L: LawvereTheoryCat, max_object: int = 3, max_arity: int = 2,
                               cap: int = EXACT_CAP, sample_limit: int = 100) -> LawReport:
    """complete(one_object_restriction(L)) is isomorphic to L, identity on objects.

    The comparison strips the 1-tuples of the restricted clone in each
    component; it is checked bijective per component and functorial.
    """
    L2 = complete(one_object_restriction(L), max_object)
    name = f"complete o restriction = id on {L.name}"
    objects = list(range(max_object + 1))
    checked = 0
    exhaustive = True
    for k in range(max_arity + 1):
        for n in objects:
            a, b = L2.clone.hom(n * k), L.clone.hom(n * k)
            if _finite_small(a, cap) and _finite_small(b, cap):
                images = {t[0] for t in a}
                checked += len(a)
                if len(images) != len(a) or images != set(b):
                    return LawReport(name, False, checked, ("component bijection", k, n))
            else:
                exhaustive = False
                checked += sample_limit
                if [t[0] for t in a.take(sample_limit)] != b.take(sample_limit):
                    return LawReport(name, False, checked, ("component enumeration", k, n), False)
    F = FSetFunctor(L2, L, lambda X: X, lambda k, X, Y, f: tuple(c[0] for c in f), "strip")
    G = FSetFunctor(L, L2, lambda X: X, lambda k, X, Y, f: tuple((c,) for c in f), "wrap")
    small = [o for o in objects if o <= 2]
    parts = [
        LawReport("components", True, checked, None, exhaustive),
        check_functor(F, small, max_arity=max_arity, sample_limit=20),
        check_functor(G, small, max_arity=max_arity, sample_limit=20),
    ]
    for k in range(max_arity + 1):
        for n, m in itertools.product(small, repeat=2):
            for f in L.hom(k, n, m).take(sample_limit):
                checked += 1
                if F.on_hom(k, n, m, G.on_hom(k, n, m, f)) != f:
                    return LawReport(name, False, checked, ("not inverse", k, n, m, show(f)))
    return LawReport.combine(name, parts)


def check_lawvere_condition(L: LawvereTheoryCat, bound: int = 3) -> LawReport:
    """Every object n is the tensor of the distinguished object by y_n."""
    checked = 0
    for n in range(bound + 1):
        w = L.tensor(L.distinguished, n)
        checked += 1
        if w.vertex != n:
            return LawReport("lawvere condition", False, checked, ("vertex", n, w.vertex))
        report = copower_equations(L, w, w.projections)
        if not report.passed:
            return LawReport("lawvere condition", False, checked, report.counterexample)
    return LawReport("lawvere condition", True, checked)
