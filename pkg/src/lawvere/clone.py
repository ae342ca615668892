"""Abstract clones, many-object [F,Set]-categories, functors and transformations.

A clone has sets ``hom(n)`` of n-ary operations, projections ``proj(n, i)``
and superposition ``superpose(g, fs, n)`` (``g`` of arity ``len(fs)``, each
``f`` of arity ``n``).  An :class:`FSetCategory` is the many-object version,
with ``hom(n, X, Y)`` and ``compose(g, fs, n, X, Y, Z)``.

All indices are 0-based.  Linear composition places the j-th argument block
at variables ``offset_j .. offset_j + n_j - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import kernels
from .errors import LawViolation, NoPresentation, NotFinite
from .finfun import (
    EnumerableSet,
    FinitaryFunctor,
    FinMap,
    all_maps,
    compose as compose_maps,
    fair_product,
    injection,
)
from .terms import App, Signature, Term, Var

EXHAUSTIVE_CAP = 1 << 22


# --------------------------------------------------------------------------
# reports


@dataclass
class LawReport:
    """Outcome of a law check: pass/fail, instances checked, first counterexample."""

    name: str
    passed: bool
    checked: int = 0
    counterexample: Any = None
    exhaustive: bool = True
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "exhaustive": self.exhaustive,
            "counterexample": None if self.counterexample is None else _plain(self.counterexample),
            "details": _plain(self.details),
        }

    @classmethod
    def combine(cls, name: str, reports: Sequence["LawReport"], **details) -> "LawReport":
        bad = next((r for r in reports if not r.passed), None)
        return cls(
            name,
            bad is None,
            sum(r.checked for r in reports),
            None if bad is None else {"law": bad.name, "witness": bad.counterexample},
            all(r.exhaustive for r in reports),
            {"parts": [r.name for r in reports], **details},
        )

    def raise_if_failed(self):
        if not self.passed:
            raise LawViolation(f"{self.name} failed: {self.counterexample}", self)
        return self


def _plain(x):
    """Convert a witness into JSON-friendly data."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, np.integer):
        return int(x)
    return str(x)


def show(x) -> str:
    """Short printable form of an element (terms, tuples, maps)."""
    if isinstance(x, tuple):
        return "(" + ", ".join(show(v) for v in x) + ")"
    if isinstance(x, FinMap):
        return str(list(x.values))
    return str(x)


# --------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """Generators and equations for a clone, plus a way to name its elements by terms.

    ``to_term(t, n)`` gives some term denoting ``t``; ``equations`` are
    triples ``(lhs, rhs, arity)``.
    """

    signature: Signature
    equations: tuple = ()
    to_term: Callable[[Any, int], Term] | None = None

    @property
    def generating_arity(self) -> int:
        return self.signature.max_arity

    @property
    def equation_arity(self) -> int:
        return max((a for _, _, a in self.equations), default=0)


# --------------------------------------------------------------------------
# clones


class Clone:
    """Base class.  Subclasses implement ``_hom``, ``proj`` and ``superpose``."""

    name = "clone"
    presentation: Presentation | None = None

    def __init__(self):
        self._homs: dict[int, EnumerableSet] = {}

    def hom(self, n: int) -> EnumerableSet:
        if n < 0:
            raise ValueError("negative arity")
        if n not in self._homs:
            self._homs[n] = self._hom(n)
        return self._homs[n]

    def _hom(self, n: int) -> EnumerableSet:
        raise NotImplementedError

    def proj(self, n: int, i: int):
        raise NotImplementedError

    def superpose(self, g, fs: Sequence, n: int):
        raise NotImplementedError

    def identity(self):
        return self.proj(1, 0)

    def require_presentation(self) -> Presentation:
        if self.presentation is None:
            raise NoPresentation(f"clone {self.name} has no finite presentation")
        return self.presentation

    def generator(self, op: str):
        """The element op(x1, ..., xr) of hom(r)."""
        raise NoPresentation(f"clone {self.name} has no generator {op}")

    def from_term(self, t: Term, n: int):
        if isinstance(t, Var):
            if t.index >= n:
                raise ValueError(f"variable {t} outside arity {n}")
            return self.proj(n, t.index)
        return self.superpose(self.generator(t.op), [self.from_term(a, n) for a in t.args], n)

    def to_term(self, t, n: int) -> Term:
        pres = self.require_presentation()
        return pres.to_term(t, n)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def reindex_clone(C: Clone, phi: FinMap, g):
    """phi_*(g) = g(x_phi(1), ..., x_phi(n)) for phi: n -> m."""
    return C.superpose(g, [C.proj(phi.cod, v) for v in phi.values], phi.cod)


# --------------------------------------------------------------------------
# many-object [F,Set]-categories


class FSetCategory:
    """Base class for [F,Set]-categories given by projections and composition."""

    name = "fset-category"

    @property
    def objects(self) -> list:
        raise NotImplementedError

    def hom(self, n: int, X, Y) -> EnumerableSet:
        raise NotImplementedError

    def proj(self, n: int, i: int, X):
        raise NotImplementedError

    def compose(self, g, fs: Sequence, n: int, X, Y, Z):
        raise NotImplementedError

    def identity(self, X):
        return self.proj(1, 0, X)

    def componentwise_hom(self, k: int, Z, Y):
        """Return ``(Y1, b)`` if hom(k, Z, Y) is hom(k, Z, Y1)^b with composition acting per factor."""
        return None

    def split_components(self, f, Y) -> list:
        raise NotImplementedError

    def join_components(self, parts, Y):
        raise NotImplementedError

    def tensor(self, X, n: int):
        """Chosen tensor of X by y_n, or None when unknown."""
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class OneObject(FSetCategory):
    """A clone seen as a one-object [F,Set]-category; the object is ``'*'``."""

    OBJECT = "*"

    def __init__(self, clone: Clone):
        self.clone = clone
        self.name = f"one-object({clone.name})"

    @property
    def objects(self):
        return [self.OBJECT]

    def hom(self, n, X=OBJECT, Y=OBJECT):
        return self.clone.hom(n)

    def proj(self, n, i, X=OBJECT):
        return self.clone.proj(n, i)

    def compose(self, g, fs, n, X=OBJECT, Y=OBJECT, Z=OBJECT):
        return self.clone.superpose(g, fs, n)


def as_category(M) -> FSetCategory:
    return OneObject(M) if isinstance(M, Clone) else M


class SubClone(Clone):
    """The one-object full sub-[F,Set]-category of M on the object X."""

    def __init__(self, M: FSetCategory, X, name: str | None = None):
        super().__init__()
        self.category = M
        self.object = X
        self.name = name or f"{M.name}|{X}"

    def _hom(self, n):
        return self.category.hom(n, self.object, self.object)

    def proj(self, n, i):
        return self.category.proj(n, i, self.object)

    def superpose(self, g, fs, n):
        X = self.object
        return self.category.compose(g, fs, n, X, X, X)


def reindex(M, phi: FinMap, g, X=OneObject.OBJECT, Y=OneObject.OBJECT):
    """phi_*(g) = g o (pi_phi(0), ..., pi_phi(n-1)) for g in hom(n, X, Y)."""
    M = as_category(M)
    return M.compose(g, [M.proj(phi.cod, v, X) for v in phi.values], phi.cod, X, X, Y)


def linear_compose(M, g, fs: Sequence, arities: Sequence[int], X=OneObject.OBJECT, Y=OneObject.OBJECT, Z=OneObject.OBJECT):
    """g (x) (f_1, ..., f_m) with f_j of arity ``arities[j]``, landing in arity sum(arities)."""
    M = as_category(M)
    if len(fs) != len(arities):
        raise ValueError(f"{len(fs)} arguments given for {len(arities)} arities")
    total = sum(arities)
    moved = [reindex(M, injection(arities, j), f, X, Y) for j, f in enumerate(fs)]
    return M.compose(g, moved, total, X, Y, Z)


def codiagonal(m: int, n: int) -> FinMap:
    """The fold map m*n -> n sending block position j*n + i to i."""
    return FinMap(m * n, n, tuple(i for _ in range(m) for i in range(n)))


def compose_via_linear(M, g, fs: Sequence, n: int, X=OneObject.OBJECT, Y=OneObject.OBJECT, Z=OneObject.OBJECT):
    """Ordinary composition rebuilt from linear composition and reindexing."""
    return reindex(as_category(M), codiagonal(len(fs), n), linear_compose(M, g, fs, [n] * len(fs), X, Y, Z), X, Z)


# --------------------------------------------------------------------------
# law checking


def _samples(s: EnumerableSet, limit: int | None):
    return list(s.elements) if limit is None else s.take(limit)


def _tuples(s: EnumerableSet, k: int, limit: int | None):
    """k-tuples of elements of s; all of them if finite and limit is None."""
    if limit is None:
        return list(itertools.product(s.elements, repeat=k))
    return list(itertools.islice(fair_product([s] * k), limit))


def _finite_tables(C: Clone, max_arity: int, cap: int):
    sizes = []
    for n in range(max_arity + 1):
        h = C.hom(n)
        if not h.is_finite or len(h) > cap:
            return None
        sizes.append(len(h))
    return sizes


def _superposition_tables(C: Clone, max_arity: int):
    """sup[a, b][g, code] = index of superpose(g, fs, b); raises on closure failure."""
    elems = [C.hom(n).elements for n in range(max_arity + 1)]
    sup = {}
    for a in range(max_arity + 1):
        for b in range(max_arity + 1):
            s_b = len(elems[b])
            table = np.empty((len(elems[a]), s_b ** a), dtype=kernels.INDEX)
            target = C.hom(b)
            for gi, g in enumerate(elems[a]):
                for code, fs in enumerate(itertools.product(elems[b], repeat=a)):
                    h = C.superpose(g, list(fs), b)
                    try:
                        table[gi, code] = target.index(h)
                    except ValueError:
                        raise _Closure(("closure", b, show(g), [show(f) for f in fs], show(h))) from None
            sup[a, b] = table
    return elems, sup


class _Closure(Exception):
    pass


def _decode(code: int, base: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        code, r = divmod(code, base)
        out.append(r)
    return out[::-1]


def check_clone_laws(C: Clone, max_arity: int = 3, sample_limit: int | None = None, exhaustive=None,
                     cap: int = EXHAUSTIVE_CAP, impl=None) -> LawReport:
    """Check projection laws and associativity of superposition up to ``max_arity``.

    Finite homs are tabulated and checked exhaustively; otherwise at most
    ``sample_limit`` instances per law and arity combination are drawn in a
    fair enumeration order.  ``exhaustive=True`` on a lazy clone raises
    NotFinite.
    """
    sizes = _finite_tables(C, max_arity, cap)
    if exhaustive and sizes is None:
        raise NotFinite(f"{C.name}: exhaustive check requested on an infinite hom-set")
    if sizes is not None and exhaustive is not False:
        work = sum(sizes[j] * sizes[k] ** j * sizes[n] ** k
                   for j in range(max_arity + 1) for k in range(max_arity + 1) for n in range(max_arity + 1))
        if work <= cap or exhaustive:
            return _check_clone_tables(C, max_arity, impl)
    return _check_clone_sampled(C, max_arity, sample_limit if sample_limit is not None else 100)


def _check_clone_tables(C: Clone, N: int, impl=None) -> LawReport:
    name = f"clone laws {C.name}"
    try:
        elems, sup = _superposition_tables(C, N)
    except _Closure as exc:
        return LawReport(name, False, 0, exc.args[0], True)
    sizes = [len(e) for e in elems]
    index = [C.hom(n) for n in range(N + 1)]
    checked = 0
    # projections: pi_i o (f_1..f_a) = f_i
    for a in range(N + 1):
        for b in range(N + 1):
            dig = kernels.digits(sizes[b], a)
            for i in range(a):
                p = index[a].index(C.proj(a, i))
                row = sup[a, b][p]
                checked += row.size
                bad = np.flatnonzero(row != dig[:, i])
                if bad.size:
                    fs = [elems[b][v] for v in dig[bad[0]]]
                    return LawReport(name, False, checked, ("projection", a, i, [show(f) for f in fs]), True)
    # identity: g o (pi_1..pi_n) = g
    for n in range(N + 1):
        code = 0
        for i in range(n):
            code = code * sizes[n] + index[n].index(C.proj(n, i))
        col = sup[n, n][:, code]
        checked += col.size
        bad = np.flatnonzero(col != np.arange(sizes[n]))
        if bad.size:
            return LawReport(name, False, checked, ("identity", n, show(elems[n][bad[0]])), True)
    # associativity
    for j in range(N + 1):
        for k in range(N + 1):
            for n in range(N + 1):
                hit = kernels.assoc_mismatch(sup[j, n], sup[k, n], sup[j, k], sizes[k], sizes[n], j, impl)
                n_cg, n_cf = sizes[k] ** j, sizes[n] ** k
                if hit >= 0:
                    h, rest = divmod(hit, n_cg * n_cf)
                    cg, cf = divmod(rest, n_cf)
                    gs = [show(elems[k][v]) for v in _decode(cg, sizes[k], j)]
                    fs = [show(elems[n][v]) for v in _decode(cf, sizes[n], k)]
                    checked += hit + 1
                    return LawReport(name, False, checked, ("associativity", show(elems[j][h]), gs, fs), True)
                checked += sizes[j] * n_cg * n_cf
    return LawReport(name, True, checked, None, True, {"max_arity": N})


def _check_clone_sampled(C: Clone, N: int, limit: int) -> LawReport:
    name = f"clone laws {C.name}"
    checked = 0
    for a in range(N + 1):
        for b in range(N + 1):
            for fs in _tuples(C.hom(b), a, limit):
                for i in range(a):
                    checked += 1
                    if C.superpose(C.proj(a, i), list(fs), b) != fs[i]:
                        return LawReport(name, False, checked, ("projection", a, i, [show(f) for f in fs]), False)
    for n in range(N + 1):
        ps = [C.proj(n, i) for i in range(n)]
        for g in _samples(C.hom(n), limit):
            checked += 1
            if C.superpose(g, ps, n) != g:
                return LawReport(name, False, checked, ("identity", n, show(g)), False)
    for j in range(N + 1):
        for k in range(N + 1):
            for n in range(N + 1):
                inst = fair_product([C.hom(j), _lazy_tuples(C.hom(k), j), _lazy_tuples(C.hom(n), k)])
                for h, gs, fs in itertools.islice(inst, limit):
                    checked += 1
                    lhs = C.superpose(h, [C.superpose(g, list(fs), n) for g in gs], n)
                    rhs = C.superpose(C.superpose(h, list(gs), k), list(fs), n)
                    if lhs != rhs:
                        return LawReport(name, False, checked,
                                         ("associativity", show(h), [show(g) for g in gs], [show(f) for f in fs]), False)
    return LawReport(name, True, checked, None, False, {"max_arity": N, "sample_limit": limit})


class _lazy_tuples:
    """Re-iterable fair enumeration of k-tuples."""

    def __init__(self, s, k):
        self.s, self.k = s, k

    def __iter__(self):
        return fair_product([self.s] * self.k)


def check_reindexing(M, max_arity: int = 2, sample_limit: int = 20, objects=None) -> LawReport:
    """Reindexing is functorial: psi_* phi_* g = (psi phi)_* g and id_* g = g."""
    M = as_category(M)
    objects = list(M.objects if objects is None else objects)
    checked = 0
    name = f"reindexing {M.name}"
    for X in objects:
        for Y in objects:
            for n in range(max_arity + 1):
                gs = _samples(M.hom(n, X, Y), sample_limit)
                for g in gs:
                    checked += 1
                    if reindex(M, FinMap(n, n, tuple(range(n))), g, X, Y) != g:
                        return LawReport(name, False, checked, ("identity", n, show(g)), False)
                for m in range(max_arity + 1):
                    for p in range(max_arity + 1):
                        for phi in all_maps(n, m):
                            for psi in all_maps(m, p):
                                for g in gs:
                                    checked += 1
                                    lhs = reindex(M, psi, reindex(M, phi, g, X, Y), X, Y)
                                    rhs = reindex(M, compose_maps(psi, phi), g, X, Y)
                                    if lhs != rhs:
                                        return LawReport(name, False, checked, ("functoriality", phi, psi, show(g)), False)
    return LawReport(name, True, checked, None, False)


def check_category_laws(M: FSetCategory, objects=None, max_arity: int = 2, sample_limit: int = 30) -> LawReport:
    """The [F,Set]-category axioms, checked on sampled homs."""
    objects = list(M.objects if objects is None else objects)
    name = f"fset-category laws {M.name}"
    checked = 0
    N = max_arity
    for X in objects:
        for Y in objects:
            for a in range(N + 1):
                for b in range(N + 1):
                    for fs in _tuples(M.hom(b, X, Y), a, sample_limit):
                        for i in range(a):
                            checked += 1
                            if M.compose(M.proj(a, i, Y), list(fs), b, X, Y, Y) != fs[i]:
                                return LawReport(name, False, checked, ("projection", X, Y, a, i), False)
            for n in range(N + 1):
                ps = [M.proj(n, i, X) for i in range(n)]
                for g in _samples(M.hom(n, X, Y), sample_limit):
                    checked += 1
                    if M.compose(g, ps, n, X, X, Y) != g:
                        return LawReport(name, False, checked, ("identity", X, Y, n, show(g)), False)
    for X, Y, Z, W in itertools.product(objects, repeat=4):
        for j in range(N + 1):
            for k in range(N + 1):
                for n in range(N + 1):
                    inst = fair_product([M.hom(j, Z, W), _lazy_tuples(M.hom(k, Y, Z), j), _lazy_tuples(M.hom(n, X, Y), k)])
                    for h, gs, fs in itertools.islice(inst, sample_limit):
                        checked += 1
                        lhs = M.compose(h, [M.compose(g, list(fs), n, X, Y, Z) for g in gs], n, X, Z, W)
                        rhs = M.compose(M.compose(h, list(gs), k, Y, Z, W), list(fs), n, X, Y, W)
                        if lhs != rhs:
                            return LawReport(name, False, checked, ("associativity", (X, Y, Z, W), j, k, n), False)
    return LawReport(name, True, checked, None, False, {"objects": [str(o) for o in objects]})


# --------------------------------------------------------------------------
# functors, transformations, clone morphisms


class FSetFunctor:
    """An [F,Set]-functor given by an object map and hom maps ``on_hom(n, X, Y, f)``."""

    def __init__(self, source, target, on_ob: Callable, on_hom: Callable, name: str = "F"):
        self.source = as_category(source)
        self.target = as_category(target)
        self.on_ob = on_ob
        self.on_hom = on_hom
        self.name = name


def check_functor(F: FSetFunctor, objects=None, max_arity: int = 2, sample_limit: int = 30) -> LawReport:
    """Preservation of projections and composition on sampled homs."""
    S, T = F.source, F.target
    objects = list(S.objects if objects is None else objects)
    name = f"functor laws {F.name}"
    checked = 0
    for X in objects:
        FX = F.on_ob(X)
        for n in range(max_arity + 1):
            for i in range(n):
                checked += 1
                if F.on_hom(n, X, X, S.proj(n, i, X)) != T.proj(n, i, FX):
                    return LawReport(name, False, checked, ("projection", X, n, i), False)
    for X, Y, Z in itertools.product(objects, repeat=3):
        FX, FY, FZ = F.on_ob(X), F.on_ob(Y), F.on_ob(Z)
        for m in range(max_arity + 1):
            for n in range(max_arity + 1):
                inst = fair_product([S.hom(m, Y, Z), _lazy_tuples(S.hom(n, X, Y), m)])
                for g, fs in itertools.islice(inst, sample_limit):
                    checked += 1
                    lhs = F.on_hom(n, X, Z, S.compose(g, list(fs), n, X, Y, Z))
                    rhs = T.compose(F.on_hom(m, Y, Z, g), [F.on_hom(n, X, Y, f) for f in fs], n, FX, FY, FZ)
                    if lhs != rhs:
                        return LawReport(name, False, checked, ("composition", (X, Y, Z), show(g), [show(f) for f in fs]), False)
    return LawReport(name, True, checked, None, False)


@dataclass
class FSetTransformation:
    """Components alpha_X in hom_T(1, F X, G X)."""

    F: FSetFunctor
    G: FSetFunctor
    components: Callable
    name: str = "alpha"


def check_transformation(alpha: FSetTransformation, max_arity: int = 2, sample_limit: int | None = 50, objects=None) -> LawReport:
    """alpha_Y o F f = G f o (alpha_X o pi_1, ..., alpha_X o pi_n) for sampled f."""
    F, G = alpha.F, alpha.G
    S, T = F.source, F.target
    objects = list(S.objects if objects is None else objects)
    name = f"transformation {alpha.name}"
    checked = 0
    exhaustive = True
    for X, Y in itertools.product(objects, repeat=2):
        FX, FY, GX, GY = F.on_ob(X), F.on_ob(Y), G.on_ob(X), G.on_ob(Y)
        aX, aY = alpha.components(X), alpha.components(Y)
        for n in range(max_arity + 1):
            hs = S.hom(n, X, Y)
            limit = sample_limit
            if hs.is_finite and (sample_limit is None or len(hs) <= sample_limit):
                limit = None
            else:
                exhaustive = False
            whiskers = [T.compose(aX, [T.proj(n, i, FX)], n, FX, FX, GX) for i in range(n)]
            for f in _samples(hs, limit):
                checked += 1
                lhs = T.compose(aY, [F.on_hom(n, X, Y, f)], n, FX, FY, GY)
                rhs = T.compose(G.on_hom(n, X, Y, f), whiskers, n, FX, GX, GY)
                if lhs != rhs:
                    return LawReport(name, False, checked, ("naturality", X, Y, n, show(f)), exhaustive)
    return LawReport(name, True, checked, None, exhaustive)


class CloneMorphism:
    """A family of maps source.hom(n) -> target.hom(n).

    Usually determined by images of generators, in which case ``images``
    maps each source operation to an element of the target.
    """

    def __init__(self, source: Clone, target: Clone, map_fn: Callable | None = None, images: dict | None = None,
                 name: str = "F"):
        self.source = source
        self.target = target
        self.images = images
        self.name = name
        if map_fn is None:
            if images is None:
                raise ValueError("give map_fn or generator images")
            map_fn = self._from_images
        self._map = map_fn
        self._cache: dict = {}

    def _from_images(self, n, t):
        term = self.source.to_term(t, n)
        return self._interpret(term, n)

    def _interpret(self, term, n):
        T = self.target
        if isinstance(term, Var):
            return T.proj(n, term.index)
        return T.superpose(self.images[term.op], [self._interpret(a, n) for a in term.args], n)

    def __call__(self, n: int, t):
        key = (n, t)
        if key not in self._cache:
            self._cache[key] = self._map(n, t)
        return self._cache[key]

    def then(self, other: "CloneMorphism") -> "CloneMorphism":
        """Diagrammatic composite self ; other."""
        return CloneMorphism(self.source, other.target, lambda n, t: other(n, self(n, t)),
                             name=f"{self.name};{other.name}")

    def as_functor(self) -> FSetFunctor:
        return FSetFunctor(self.source, self.target, lambda X: X, lambda n, X, Y, f: self(n, f), self.name)


def identity_morphism(C: Clone) -> CloneMorphism:
    return CloneMorphism(C, C, lambda n, t: t, name=f"id_{C.name}")


def check_clone_morphism(F: CloneMorphism, max_arity: int = 2, sample_limit: int = 50) -> LawReport:
    """F preserves projections and superposition."""
    S, T = F.source, F.target
    name = f"clone morphism {F.name}"
    checked = 0
    for n in range(max_arity + 1):
        for i in range(n):
            checked += 1
            if F(n, S.proj(n, i)) != T.proj(n, i):
                return LawReport(name, False, checked, ("projection", n, i), False)
    exhaustive = True
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            gs, fs_all = S.hom(m), S.hom(n)
            small = gs.is_finite and fs_all.is_finite and len(gs) * len(fs_all) ** m <= sample_limit * 20
            if small:
                inst = itertools.product(gs.elements, itertools.product(fs_all.elements, repeat=m))
            else:
                exhaustive = False
                inst = itertools.islice(fair_product([gs, _lazy_tuples(fs_all, m)]), sample_limit)
            for g, fs in inst:
                checked += 1
                lhs = F(n, S.superpose(g, list(fs), n))
                rhs = T.superpose(F(m, g), [F(n, f) for f in fs], n)
                if lhs != rhs:
                    return LawReport(name, False, checked, ("superposition", show(g), [show(f) for f in fs]), exhaustive)
    return LawReport(name, True, checked, None, exhaustive)


def check_clone_iso(F: CloneMorphism, G: CloneMorphism, max_arity: int = 3, sample_limit: int = 100) -> LawReport:
    """F and G are clone morphisms and mutually inverse on hom(n), n <= max_arity."""
    parts = [check_clone_morphism(F, min(max_arity, 2), sample_limit), check_clone_morphism(G, min(max_arity, 2), sample_limit)]
    checked = 0
    name = f"iso {F.name} / {G.name}"
    exhaustive = True
    for n in range(max_arity + 1):
        for H, K, side in ((F, G, F.source), (G, F, G.source)):
            hs = side.hom(n)
            if hs.is_finite:
                elems = hs.elements
                images = [H(n, t) for t in elems]
                target = H.target.hom(n)
                if len(target) != len(elems) or len(set(images)) != len(images):
                    return LawReport(name, False, checked, ("not bijective", n, H.name), exhaustive)
            else:
                exhaustive = False
                elems = hs.take(sample_limit)
            for t in elems:
                checked += 1
                if K(n, H(n, t)) != t:
                    return LawReport(name, False, checked, ("not inverse", n, show(t)), exhaustive)
    return LawReport.combine(name, parts + [LawReport("inverse", True, checked, None, exhaustive)])


# --------------------------------------------------------------------------
# clones vs monoids in [F,Set]


@dataclass
class MonoidData:
    """A monoid (T, e, m) in [F,Set] given by element maps.

    ``unit(n, i)`` is e_n(i) in T(n); ``mult(n, t)`` takes t in (T (x) T)(n) =
    T(|T(n)|) to T(n).
    """

    functor: FinitaryFunctor
    unit: Callable[[int, int], Any]
    mult: Callable[[int, Any], Any]


class MonoidClone(Clone):
    def __init__(self, data: MonoidData, name: str = "monoid"):
        super().__init__()
        self.data = data
        self.name = name

    def _hom(self, n):
        return self.data.functor(n)

    def proj(self, n, i):
        return self.data.unit(n, i)

    def superpose(self, g, fs, n):
        T = self.data.functor
        base = T(n)
        phi = FinMap(len(fs), len(base), tuple(base.index(f) for f in fs))
        return self.data.mult(n, T.on_mor(phi)(g))


def clone_from_monoid(T: FinitaryFunctor, unit, mult, name: str = "monoid", check_arity: int = 2) -> Clone:
    """The clone with hom(n) = T(n), projections from the unit and superposition from the multiplication."""
    C = MonoidClone(MonoidData(T, unit, mult), name)
    report = check_clone_laws(C, check_arity, sample_limit=50)
    if not report.passed:
        raise LawViolation(f"monoid laws fail for {name}: {report.counterexample}", report)
    return C


def monoid_from_clone(C: Clone) -> MonoidData:
    """T(n) = hom(n) acted on by reindexing; unit from projections; multiplication from superposition."""
    T = FinitaryFunctor(C.hom, lambda phi: lambda g: reindex_clone(C, phi, g), f"T[{C.name}]")

    def mult(n, g):
        return C.superpose(g, list(C.hom(n).elements), n)

    return MonoidData(T, C.proj, mult)
