"""Finite categories with chosen finite powers, and the passage to and from [F,Set]-categories.

``R(C)`` has hom(n, X, Y) = C(X^n, Y); ``V(M)`` keeps the arity-1 homs and
takes chosen tensors as powers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Sequence

from . import kernels
from .clone import FSetCategory, LawReport, show
from .completion import TensorWitness, _factor, _finite_small, power_from_tensor
from .errors import NotFinite, PowerMissing, SearchSpaceTooLarge
from .finfun import EnumerableSet, FinMap, all_maps, compose as compose_maps, identity as id_map

EXACT_CAP = 1 << 16


@dataclass
class Power:
    """A chosen power X^n with its projections and the pairing ``pair(fs, source)``."""

    base: Any
    exponent: int
    vertex: Any
    projections: list
    pair: Callable[[Sequence, Any], Any]


class FPCategory:
    """A finite category with chosen powers.  ``compose(g, f, X, Y, Z)`` is g o f."""

    name = "fp-category"

    @property
    def objects(self) -> list:
        raise NotImplementedError

    def mor(self, X, Y) -> EnumerableSet:
        raise NotImplementedError

    def compose(self, g, f, X, Y, Z):
        raise NotImplementedError

    def identity(self, X):
        raise NotImplementedError

    def power(self, X, n: int) -> Power:
        raise NotImplementedError

    def has_power(self, X, n: int) -> bool:
        try:
            self.power(X, n)
            return True
        except PowerMissing:
            return False

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _map_set(n: int, m: int) -> EnumerableSet:
    size = m ** n
    if size <= 50000:
        return EnumerableSet.finite(all_maps(n, m), f"Set({n},{m})")
    return EnumerableSet.lazy(lambda: all_maps(n, m), size=size, description=f"Set({n},{m})")


@lru_cache(maxsize=None)
def _digit_columns(q: int, n: int) -> tuple:
    d = kernels.digits(q, n)
    return tuple(tuple(int(v) for v in d[:, i]) for i in range(n))


class FinSetCategory(FPCategory):
    """Skeletal finite sets {0..N}; X^n is the cardinal X**n with lexicographic projections."""

    def __init__(self, bound: int = 4, power_bound: int | None = None):
        self.bound = bound
        self.power_bound = bound if power_bound is None else power_bound
        self.name = f"FinSet<={bound}"

    @property
    def objects(self):
        return list(range(self.bound + 1))

    def mor(self, X, Y):
        return _map_set(X, Y)

    def compose(self, g, f, X=None, Y=None, Z=None):
        return compose_maps(g, f)

    def identity(self, X):
        return id_map(X)

    def power(self, X, n):
        v = X ** n
        if v > self.power_bound:
            raise PowerMissing(f"{X}^{n} = {v} exceeds {self.name}")
        cols = _digit_columns(X, n)
        ps = [FinMap(v, X, cols[i]) for i in range(n)]

        def pair(fs, source):
            if len(fs) != n:
                raise ValueError("pairing needs one map per projection")
            vals = []
            for s in range(source):
                code = 0
                for f in fs:
                    code = code * X + f.values[s]
                vals.append(code)
            return FinMap(source, v, tuple(vals))

        return Power(X, n, v, ps, pair)


class OppositeFinSet(FPCategory):
    """FinSet^op: a map X -> Y is a function Y -> X; powers are coproducts n*X."""

    def __init__(self, bound: int = 4):
        self.bound = bound
        self.name = f"FinSet^op<={bound}"

    @property
    def objects(self):
        return list(range(self.bound + 1))

    def mor(self, X, Y):
        return _map_set(Y, X)

    def compose(self, g, f, X=None, Y=None, Z=None):
        return compose_maps(f, g)

    def identity(self, X):
        return id_map(X)

    def power(self, X, n):
        v = n * X
        if v > self.bound:
            raise PowerMissing(f"{n}*{X} exceeds {self.name}")
        ps = [FinMap(X, v, tuple(range(i * X, (i + 1) * X))) for i in range(n)]

        def pair(fs, source):
            return FinMap(v, source, tuple(fs[i].values[x] for i in range(n) for x in range(X)))

        return Power(X, n, v, ps, pair)


class TerminalCategory(FPCategory):
    name = "terminal"

    @property
    def objects(self):
        return ["*"]

    def mor(self, X, Y):
        return EnumerableSet.finite(["id"])

    def compose(self, g, f, X=None, Y=None, Z=None):
        return "id"

    def identity(self, X):
        return "id"

    def power(self, X, n):
        return Power(X, n, "*", ["id"] * n, lambda fs, source: "id")


class TableCategory(FPCategory):
    """A finite category given by explicit tables.

    Morphisms are string labels with ``src``/``tgt``; ``table[(g, f)]`` is
    g o f.  Powers list a vertex and projection labels; pairings are found
    by search, which also validates the universal property.
    """

    def __init__(self, objects, morphisms: dict, identities: dict, table: dict, powers: dict, name="tables"):
        self._objects = list(objects)
        self.src = {m: s for m, (s, t) in morphisms.items()}
        self.tgt = {m: t for m, (s, t) in morphisms.items()}
        self.identities = dict(identities)
        self.table = dict(table)
        self.powers = {(X, int(n)): (v, list(ps)) for (X, n), (v, ps) in powers.items()}
        self.name = name
        self._mors = {}
        for m in morphisms:
            self._mors.setdefault((self.src[m], self.tgt[m]), []).append(m)

    @classmethod
    def from_json(cls, text: str) -> "TableCategory":
        data = json.loads(text)
        morphisms = {m["name"]: (m["src"], m["tgt"]) for m in data["morphisms"]}
        table = {(g, f): h for g, f, h in data["compose"]}
        powers = {(p["base"], p["n"]): (p["vertex"], p["projections"]) for p in data.get("powers", [])}
        return cls(data["objects"], morphisms, data["identities"], table, powers, data.get("name", "tables"))

    @property
    def objects(self):
        return list(self._objects)

    def mor(self, X, Y):
        return EnumerableSet.finite(sorted(self._mors.get((X, Y), [])))

    def compose(self, g, f, X=None, Y=None, Z=None):
        return self.table[(g, f)]

    def identity(self, X):
        return self.identities[X]

    def power(self, X, n):
        if (X, n) not in self.powers:
            raise PowerMissing(f"{self.name} has no chosen power {X}^{n}")
        v, ps = self.powers[(X, n)]

        def pair(fs, source):
            for h in self.mor(source, v):
                if all(self.compose(p, h) == f for p, f in zip(ps, fs)):
                    return h
            raise PowerMissing(f"no pairing into {v} for {list(fs)}")

        return Power(X, n, v, ps, pair)


def check_fp_category(C: FPCategory, max_power: int = 2, cap: int = 200000) -> LawReport:
    """Category laws on composable triples and the universal property of chosen powers."""
    name = f"fp-category laws {C.name}"
    objs = C.objects
    checked = 0
    for X, Y in itertools.product(objs, repeat=2):
        for f in C.mor(X, Y):
            checked += 2
            if C.compose(C.identity(Y), f, X, Y, Y) != f or C.compose(f, C.identity(X), X, X, Y) != f:
                return LawReport(name, False, checked, ("unit", X, Y, show(f)))
    exhaustive = True
    for W, X, Y, Z in itertools.product(objs, repeat=4):
        fs, gs, hs = C.mor(W, X), C.mor(X, Y), C.mor(Y, Z)
        if len(fs) * len(gs) * len(hs) > cap:
            exhaustive = False
            fs, gs, hs = fs.take(20), gs.take(20), hs.take(20)
        for f in fs:
            for g in gs:
                gf = C.compose(g, f, W, X, Y)
                for h in hs:
                    checked += 1
                    if C.compose(h, gf, W, Y, Z) != C.compose(C.compose(h, g, X, Y, Z), f, W, X, Z):
                        return LawReport(name, False, checked, ("associativity", show(f), show(g), show(h)), exhaustive)
    for X in objs:
        for n in range(max_power + 1):
            try:
                P = C.power(X, n)
            except PowerMissing:
                continue
            for Y in objs:
                src = C.mor(Y, P.vertex)
                base = C.mor(Y, X)
                if len(src) != len(base) ** n:
                    return LawReport(name, False, checked, ("power cardinality", X, n, Y), exhaustive)
                images = set()
                for h in src:
                    checked += 1
                    images.add(tuple(C.compose(p, h, Y, P.vertex, X) for p in P.projections))
                if len(images) != len(src):
                    return LawReport(name, False, checked, ("power not injective", X, n, Y), exhaustive)
                for fs in itertools.islice(itertools.product(base, repeat=n), 500):
                    checked += 1
                    h = P.pair(list(fs), Y)
                    if tuple(C.compose(p, h, Y, P.vertex, X) for p in P.projections) != fs:
                        return LawReport(name, False, checked, ("pairing", X, n, Y), exhaustive)
    return LawReport(name, True, checked, None, exhaustive)


# --------------------------------------------------------------------------
# R and V


class RCategory(FSetCategory):
    """R(C): hom(n, X, Y) = C(X^n, Y), composition g o <f_1, ..., f_m>."""

    def __init__(self, C: FPCategory):
        self.base = C
        self.name = f"R({C.name})"

    @property
    def objects(self):
        return self.base.objects

    def hom(self, n, X, Y):
        return self.base.mor(self.base.power(X, n).vertex, Y)

    def proj(self, n, i, X):
        return self.base.power(X, n).projections[i]

    def compose(self, g, fs, n, X, Y, Z):
        C = self.base
        src = C.power(X, n).vertex
        P = C.power(Y, len(fs))
        return C.compose(g, P.pair(list(fs), src), src, P.vertex, Z)

    def tensor(self, X, n):
        C = self.base
        P = C.power(X, n)
        Z = P.vertex
        Z1 = C.power(Z, 1)
        unwrap = Z1.projections[0]
        ps = [C.compose(p, unwrap, Z1.vertex, Z, X) for p in P.projections]
        return TensorWitness(X, n, Z, C.identity(Z), ps)

    def pairing(self, gs, k, Y, X):
        C = self.base
        src = C.power(Y, k).vertex
        return C.power(X, len(gs)).pair(list(gs), src)


def R(C: FPCategory) -> RCategory:
    return RCategory(C)


class VCategory(FPCategory):
    """V(M): arity-1 homs of M, with chosen tensors of M as powers when available."""

    def __init__(self, M: FSetCategory, objects=None):
        self.M = M
        self._objects = list(M.objects if objects is None else objects)
        self.name = f"V({M.name})"

    @property
    def objects(self):
        return list(self._objects)

    def mor(self, X, Y):
        return self.M.hom(1, X, Y)

    def compose(self, g, f, X, Y, Z):
        return self.M.compose(g, [f], 1, X, Y, Z)

    def identity(self, X):
        return self.M.identity(X)

    def power(self, X, n):
        w = self.M.tensor(X, n)
        if w is None:
            raise PowerMissing(f"{self.M.name} has no chosen tensor of {X} by y_{n}")
        ps = power_from_tensor(self.M, w, use_chosen=True)
        M = self.M

        def pair(fs, source):
            return M.compose(w.i, list(fs), 1, source, X, w.vertex)

        return Power(X, n, w.vertex, ps, pair)


def V(M: FSetCategory, objects=None) -> VCategory:
    return VCategory(M, objects)


def check_VR(C: FPCategory, cap: int = EXACT_CAP) -> LawReport:
    """V(R(C)) is isomorphic to C by f -> f o (X -> X^1), identity on objects."""
    VR = V(R(C))
    name = f"VR = 1 on {C.name}"
    objs = C.objects
    checked = 0
    unit = {X: C.power(X, 1).pair([C.identity(X)], X) for X in objs}

    def phi(f, X):
        return C.compose(f, unit[X], X, C.power(X, 1).vertex, None)

    for X, Y in itertools.product(objs, repeat=2):
        src, tgt = VR.mor(X, Y), C.mor(X, Y)
        images = {phi(f, X) for f in src}
        checked += len(src)
        if len(src) != len(tgt) or images != set(tgt):
            return LawReport(name, False, checked, ("hom bijection", X, Y))
    for X in objs:
        checked += 1
        if phi(VR.identity(X), X) != C.identity(X):
            return LawReport(name, False, checked, ("identity", X))
    for X, Y, Z in itertools.product(objs, repeat=3):
        fs, gs = VR.mor(X, Y), VR.mor(Y, Z)
        if len(fs) * len(gs) > cap:
            fs, gs = fs.take(50), gs.take(50)
        for f in fs:
            for g in gs:
                checked += 1
                lhs = phi(VR.compose(g, f, X, Y, Z), X)
                rhs = C.compose(phi(g, Y), phi(f, X), X, Y, Z)
                if lhs != rhs:
                    return LawReport(name, False, checked, ("composition", show(f), show(g)))
    return LawReport(name, True, checked)


def compare_RV(M: FSetCategory, objects=None, max_arity: int = 3, witnesses=None, cap: int = 1 << 18,
               sample_limit: int = 100) -> LawReport:
    """The comparison R(V(M)) -> M, identity on objects, g -> g o i on homs.

    Checked bijective on hom(n, X, Y) for X, Y in ``objects`` and n <= max_arity
    (per component where homs split), and checked to preserve projections and
    composition on samples.  ``witnesses(X, n)`` overrides the chosen tensors.
    """
    objects = list(M.objects if objects is None else objects)
    witness = witnesses or M.tensor
    name = f"RV -> 1 on {M.name}"
    checked = 0
    exhaustive = True
    skipped = []
    for X in objects:
        for n in range(max_arity + 1):
            try:
                w = witness(X, n)
            except PowerMissing:
                w = None
            if w is None:
                skipped.append((X, n))
                continue
            Z, i = w.vertex, w.i
            try:
                ps = power_from_tensor(M, w, use_chosen=False)
            except Exception:
                return LawReport(name, False, checked, ("projections not recovered", X, n))
            for Y in objects:
                Y1, _ = _factor(M, 1, Z, Y)
                src, tgt = M.hom(1, Z, Y1), M.hom(n, X, Y1)
                if _finite_small(src, cap) and _finite_small(tgt, cap):
                    images = set()
                    for g in src:
                        checked += 1
                        images.add(M.compose(g, [i], n, X, Z, Y1))
                    if len(images) != len(src) or len(src) != len(tgt) or not images <= set(tgt):
                        return LawReport(name, False, checked, ("hom bijection", X, n, Y))
                else:
                    exhaustive = False
                    for h in tgt.take(sample_limit):
                        checked += 1
                        g = M.compose(h, ps, 1, Z, X, Y1)
                        if M.compose(g, [i], n, X, Z, Y1) != h:
                            return LawReport(name, False, checked, ("inverse", X, n, Y, show(h)), False)
            for j, p in enumerate(ps):
                checked += 1
                if M.compose(p, [i], n, X, Z, X) != M.proj(n, j, X):
                    return LawReport(name, False, checked, ("projection", X, n, j))
            # composition: g o <f_1..f_m> in RV M against g' o (f'_1..f'_m) in M
            for m in range(min(max_arity, 2) + 1):
                for Y in objects:
                    try:
                        wy = witness(Y, m)
                    except PowerMissing:
                        wy = None
                    if wy is None:
                        continue
                    for Wt in objects[:2]:
                        gs = M.hom(1, wy.vertex, Wt).take(5)
                        fs_pool = M.hom(1, Z, Y).take(5)
                        for g in gs:
                            for fs in itertools.islice(itertools.product(fs_pool, repeat=m), 10):
                                checked += 1
                                paired = M.compose(wy.i, list(fs), 1, Z, Y, wy.vertex)
                                lhs = M.compose(M.compose(g, [paired], 1, Z, wy.vertex, Wt), [i], n, X, Z, Wt)
                                g_m = M.compose(g, [wy.i], m, Y, wy.vertex, Wt)
                                rhs = M.compose(g_m, [M.compose(f, [i], n, X, Z, Y) for f in fs], n, X, Y, Wt)
                                if lhs != rhs:
                                    return LawReport(name, False, checked, ("composition", X, n, Y, m), False)
    return LawReport(name, True, checked, None, exhaustive, {"skipped": skipped})
