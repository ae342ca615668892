"""Finite cardinals, finitary functors F -> Set and their monoidal structure.

The category F has objects the cardinals ``n = {0, ..., n-1}`` and morphisms
:class:`FinMap`.  A :class:`FinitaryFunctor` is a functor F -> Set given by an
object part returning :class:`EnumerableSet` values and a morphism part
returning element maps.  Functors are infinite objects, so they are only ever
compared with :func:`agree_up_to`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import NotFinite, TruncationTooSmall, Unsupported

DEFAULT_BOUND = 4


@dataclass(frozen=True, order=True)
class FinMap:
    """A function ``{0..dom-1} -> {0..cod-1}`` stored as its value tuple."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.dom:
            raise ValueError(f"FinMap with dom {self.dom} given {len(self.values)} values")
        for v in self.values:
            if not 0 <= v < self.cod:
                raise ValueError(f"FinMap value {v} outside codomain {self.cod}")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def then(self, other: "FinMap") -> "FinMap":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return compose(other, self)

    def __repr__(self):
        return f"FinMap({self.dom}->{self.cod}, {list(self.values)})"


def identity(n: int) -> FinMap:
    return FinMap(n, n, tuple(range(n)))


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g . f``."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose {g} after {f}")
    return FinMap(f.dom, g.cod, tuple(g.values[v] for v in f.values))


def all_maps(n: int, m: int) -> Iterator[FinMap]:
    """All maps n -> m in lexicographic order of value tuples."""
    for values in itertools.product(range(m), repeat=n):
        yield FinMap(n, m, values)


def injection(sizes: Sequence[int], j: int) -> FinMap:
    """The j-th coproduct injection ``sizes[j] -> sum(sizes)``."""
    offset = sum(sizes[:j])
    return FinMap(sizes[j], sum(sizes), tuple(range(offset, offset + sizes[j])))


# --------------------------------------------------------------------------
# enumerable sets


class EnumerableSet:
    """A set with a fixed, deterministic enumeration order.

    Finite sets store their elements; lazy sets store an enumerator factory,
    so each consumer gets an independent iterator.  ``size`` may be known
    for lazy sets that are finite but too big to materialise.
    """

    __slots__ = ("_elements", "_enumerator", "_size", "_index", "description")

    def __init__(self, elements=None, *, enumerator=None, size=None, description=""):
        if (elements is None) == (enumerator is None):
            raise ValueError("give exactly one of elements / enumerator")
        self._elements = tuple(elements) if elements is not None else None
        self._enumerator = enumerator
        self._size = len(self._elements) if self._elements is not None else size
        self._index = None
        self.description = description

    @classmethod
    def finite(cls, elements: Iterable, description: str = "") -> "EnumerableSet":
        return cls(elements, description=description)

    @classmethod
    def lazy(cls, enumerator: Callable[[], Iterator], size: int | None = None, description: str = ""):
        return cls(enumerator=enumerator, size=size, description=description)

    @property
    def is_finite(self) -> bool:
        return self._size is not None

    @property
    def is_materialised(self) -> bool:
        return self._elements is not None

    def __iter__(self):
        if self._elements is not None:
            return iter(self._elements)
        return iter(self._enumerator())

    def __len__(self):
        if self._size is None:
            raise NotFinite(f"set {self.description or '<lazy>'} is not known to be finite")
        return self._size

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            if self._size is None:
                raise NotFinite(f"cannot materialise lazy set {self.description or '<lazy>'}")
            self._elements = tuple(self._enumerator())
        return self._elements

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, x) -> int:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        try:
            return self._index[x]
        except KeyError:
            raise ValueError(f"{x!r} is not an element of {self.description or 'set'}") from None

    def __contains__(self, x):
        if self.is_finite:
            try:
                self.index(x)
                return True
            except ValueError:
                return False
        raise NotFinite("membership in a lazy set is not decidable by enumeration")

    def take(self, k: int) -> list:
        return list(itertools.islice(iter(self), k))

    def __repr__(self):
        size = self._size if self._size is not None else "inf"
        return f"EnumerableSet({self.description or '?'}, size={size})"


def product_set(factors: Sequence[EnumerableSet], description: str = "") -> EnumerableSet:
    """Cartesian product; lexicographic if all factors are finite, fair otherwise."""
    factors = list(factors)
    if all(f.is_finite for f in factors):
        size = 1
        for f in factors:
            size *= len(f)

        def enum():
            return itertools.product(*[list(f) if f.is_materialised else f.elements for f in factors])

        if size <= 20000:
            return EnumerableSet.finite(enum(), description=description)
        return EnumerableSet.lazy(enum, size=size, description=description)
    return EnumerableSet.lazy(lambda: fair_product(factors), description=description)


def power_set(base: EnumerableSet, k: int, description: str = "") -> EnumerableSet:
    return product_set([base] * k, description=description)


def fair_product(factors: Sequence[Iterable]) -> Iterator[tuple]:
    """Enumerate a product of possibly infinite iterables so every tuple appears.

    Tuples are produced in order of the largest coordinate index used, and
    lexicographically within a level.
    """
    k = len(factors)
    if k == 0:
        yield ()
        return
    iters = [iter(f) for f in factors]
    seen: list[list] = [[] for _ in range(k)]
    done = [False] * k

    def pull(i, upto):
        while not done[i] and len(seen[i]) <= upto:
            try:
                seen[i].append(next(iters[i]))
            except StopIteration:
                done[i] = True

    level = 0
    while True:
        for i in range(k):
            pull(i, level)
        if any(not seen[i] for i in range(k)):
            return
        if level > 0 and all(len(seen[i]) <= level for i in range(k)):
            return
        # tuples whose max index is exactly `level`
        ranges = [range(min(level, len(seen[i]) - 1) + 1) for i in range(k)]
        for idx in itertools.product(*ranges):
            if max(idx) == level:
                yield tuple(seen[i][j] for i, j in enumerate(idx))
        level += 1


def sample(s: EnumerableSet, limit: int | None) -> list:
    if limit is None:
        return list(s.elements)
    return s.take(limit)


# --------------------------------------------------------------------------
# finitary functors


class FinitaryFunctor:
    """A functor F -> Set.

    ``on_ob(n)`` returns an :class:`EnumerableSet`; ``on_mor(f)`` returns a
    callable from ``on_ob(f.dom)`` to ``on_ob(f.cod)``.  Object values are
    memoised since they are immutable.
    """

    def __init__(self, on_ob: Callable[[int], EnumerableSet], on_mor: Callable[[FinMap], Callable], name: str = ""):
        self._on_ob = lru_cache(maxsize=None)(on_ob)
        self._on_mor = on_mor
        self.name = name or "functor"

    def on_ob(self, n: int) -> EnumerableSet:
        return self._on_ob(n)

    def on_mor(self, f: FinMap) -> Callable:
        return self._on_mor(f)

    def __call__(self, n: int) -> EnumerableSet:
        return self.on_ob(n)

    def index_map(self, f: FinMap) -> FinMap:
        """The action of ``f`` as a FinMap between enumeration indices."""
        src, dst = self.on_ob(f.dom), self.on_ob(f.cod)
        act = self.on_mor(f)
        return FinMap(len(src), len(dst), tuple(dst.index(act(a)) for a in src))

    def __repr__(self):
        return f"FinitaryFunctor({self.name})"


def unit_functor() -> FinitaryFunctor:
    """The inclusion I: F -> Set."""
    return FinitaryFunctor(lambda n: EnumerableSet.finite(range(n), f"I({n})"), lambda f: f.values.__getitem__, "I")


def representable(k: int) -> FinitaryFunctor:
    """y_k = F(k, -), acting by postcomposition."""
    F = FinitaryFunctor(
        lambda m: EnumerableSet.finite(all_maps(k, m), f"y_{k}({m})"),
        lambda f: lambda a: compose(f, a),
        f"y_{k}",
    )
    F.representable_index = k
    return F


def dual_representable(k: int) -> FinitaryFunctor:
    """h_k = k x (-), the left dual of y_k."""
    return FinitaryFunctor(
        lambda m: EnumerableSet.finite(itertools.product(range(k), range(m)), f"h_{k}({m})"),
        lambda f: lambda a: (a[0], f.values[a[1]]),
        f"h_{k}",
    )


def constant_functor(size: int) -> FinitaryFunctor:
    return FinitaryFunctor(
        lambda m: EnumerableSet.finite(range(size), f"const{size}"), lambda f: lambda a: a, f"const_{size}"
    )


def nonempty_subsets(n: int) -> tuple[tuple[int, ...], ...]:
    """Nonempty subsets of n as sorted tuples, in lexicographic order."""
    subsets = [
        c for r in range(1, n + 1) for c in itertools.combinations(range(n), r)
    ]
    return tuple(sorted(subsets))


def subsets(n: int) -> tuple[tuple[int, ...], ...]:
    return ((),) + nonempty_subsets(n)


def image(f: FinMap, a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted({f.values[i] for i in a}))


def semilattice_functor() -> FinitaryFunctor:
    """n -> nonempty subsets of n: the underlying functor of the free-semilattice monad."""
    return FinitaryFunctor(
        lambda n: EnumerableSet.finite(nonempty_subsets(n), f"P+({n})"),
        lambda f: lambda a: image(f, a),
        "semilattice",
    )


POINT = -1


def pointed_functor() -> FinitaryFunctor:
    """n -> n + 1 with the extra point written ``POINT`` and enumerated first."""
    return FinitaryFunctor(
        lambda n: EnumerableSet.finite((POINT,) + tuple(range(n)), f"{n}+1"),
        lambda f: lambda a: a if a == POINT else f.values[a],
        "pointed",
    )


def builtin_functors() -> dict[str, FinitaryFunctor]:
    """Functors with finite values used by the test suites and the CLI."""
    return {
        "unit": unit_functor(),
        "y0": representable(0),
        "y1": representable(1),
        "y2": representable(2),
        "h2": dual_representable(2),
        "const1": constant_functor(1),
        "semilattice": semilattice_functor(),
        "pointed": pointed_functor(),
    }


# --------------------------------------------------------------------------
# extensional comparison


@dataclass
class Agreement:
    ok: bool
    checked: int
    witness: Any = None

    def __bool__(self):
        return self.ok


def agree_up_to(A: FinitaryFunctor, B: FinitaryFunctor, bound: int = DEFAULT_BOUND, iso=None) -> Agreement:
    """Check that ``iso`` (default: identity) is a natural bijection A -> B on n <= bound.

    ``iso(n, a)`` maps an element of A(n) to B(n).  Naturality is tested on
    every FinMap with dom, cod <= bound.
    """
    iso = iso or (lambda n, a: a)
    checked = 0
    for n in range(bound + 1):
        a_set, b_set = A(n), B(n)
        if not (a_set.is_finite and b_set.is_finite):
            raise NotFinite(f"agree_up_to needs finite values at {n}")
        if len(a_set) != len(b_set):
            return Agreement(False, checked, ("size", n, len(a_set), len(b_set)))
        images = [iso(n, a) for a in a_set]
        if set(images) != set(b_set):
            return Agreement(False, checked, ("not a bijection", n))
        checked += len(images)
    for n in range(bound + 1):
        for m in range(bound + 1):
            for f in all_maps(n, m):
                fa, fb = A.on_mor(f), B.on_mor(f)
                for a in A(n):
                    checked += 1
                    if iso(m, fa(a)) != fb(iso(n, a)):
                        return Agreement(False, checked, ("naturality", f, a))
    return Agreement(True, checked)


def check_functoriality(A: FinitaryFunctor, bound: int = DEFAULT_BOUND) -> Agreement:
    checked = 0
    for n in range(bound + 1):
        act = A.on_mor(identity(n))
        for a in A(n):
            checked += 1
            if act(a) != a:
                return Agreement(False, checked, ("identity", n, a))
    for n in range(bound + 1):
        for m in range(bound + 1):
            for p in range(bound + 1):
                for f in all_maps(n, m):
                    ff = A.on_mor(f)
                    for g in all_maps(m, p):
                        gf = A.on_mor(compose(g, f))
                        gg = A.on_mor(g)
                        for a in A(n):
                            checked += 1
                            if gf(a) != gg(ff(a)):
                                return Agreement(False, checked, ("composition", g, f, a))
    return Agreement(True, checked)


# --------------------------------------------------------------------------
# monoidal structure


def _finite_value(B: FinitaryFunctor, n: int) -> EnumerableSet:
    value = B(n)
    if not value.is_finite:
        raise NotFinite(f"{B.name}({n}) is not known to be finite")
    return value


def tensor(A: FinitaryFunctor, B: FinitaryFunctor) -> FinitaryFunctor:
    """The substitution tensor: (A (x) B)(n) = A(|B(n)|).

    An element ``a`` of A(|B(n)|) stands for the class of ``(a, B(n))`` with
    B(n) listed in enumeration order.
    """

    def on_ob(n):
        return A(len(_finite_value(B, n)))

    def on_mor(f):
        return A.on_mor(B.index_map(f))

    return FinitaryFunctor(on_ob, on_mor, f"({A.name} (x) {B.name})")


def tensor_iso_representables(n: int, m: int):
    """The canonical iso y_n (x) y_m -> y_{nm} as an ``iso`` for :func:`agree_up_to`.

    ``a: n -> |y_m(p)|`` picks maps ``m -> p``; the result sends ``i*m + j``
    to the value at ``j`` of the map chosen at ``i``.
    """
    inner = representable(m)

    def iso(p, a):
        maps = inner(p)
        return FinMap(n * m, p, tuple(maps[a.values[i]].values[j] for i in range(n) for j in range(m)))

    return iso


def as_cardinal(X) -> int:
    if isinstance(X, int):
        return X
    return len(X)


def diamond_action(A: FinitaryFunctor, X) -> EnumerableSet:
    """A <> X computed as A(|X|), X read in its given order."""
    return A(as_cardinal(X))


def diamond_comparison(A: FinitaryFunctor, X, n: int, a, xs: Sequence[int]):
    """Send the pair (a in A(n), xs in X^n) to A(xs)(a) in A(|X|)."""
    return A.on_mor(FinMap(n, as_cardinal(X), tuple(xs)))(a)


class CoendQuotient(EnumerableSet):
    """The quotient set of a coend; elements are least representatives (n, a, xs)."""

    __slots__ = ("classes",)

    def __init__(self, representatives, classes):
        super().__init__(representatives, description="coend quotient")
        self.classes = classes


def coend_quotient_oracle(A: FinitaryFunctor, X, truncation: int, impl=None) -> CoendQuotient:
    """Brute-force the coend of A(n) x X^n over n <= truncation.

    Nodes are all triples ``(n, a, xs)``; for every phi: n -> m with
    n, m <= truncation, every a in A(n) and every ys in X^m we identify
    ``(m, A(phi)(a), ys)`` with ``(n, a, ys . phi)``.  Classes come from
    union-find; enumeration is by least node.
    """
    q = as_cardinal(X)
    if truncation < q:
        raise TruncationTooSmall(f"truncation {truncation} < |X| = {q}")
    values = [_finite_value(A, n) for n in range(truncation + 1)]
    offsets = [0]
    for n in range(truncation + 1):
        offsets.append(offsets[-1] + len(values[n]) * q ** n)
    uf = kernels.UnionFind(offsets[-1], impl)
    chunk = 1 << 21
    for n in range(truncation + 1):
        size_n = len(values[n])
        if size_n == 0:
            continue
        for m in range(truncation + 1):
            ys = kernels.digits(q, m)  # (q**m, m)
            width = ys.shape[0]
            if width == 0:
                continue
            pv_n = kernels.place_values(q, n)
            base_m = np.arange(width, dtype=kernels.INDEX)
            maps = list(all_maps(n, m))
            if not maps:
                continue
            per_map = size_n * width
            batch = max(1, chunk // max(per_map, 1))
            for start in range(0, len(maps), batch):
                group = maps[start:start + batch]
                phi = np.array([f.values for f in group], dtype=kernels.INDEX).reshape(len(group), n)
                moved = np.array([values[m].index(A.on_mor(f)(a)) for f in group for a in values[n]],
                                 dtype=kernels.INDEX).reshape(len(group), size_n)
                # code of ys . phi for each phi and ys: (G, width)
                pulled = (ys[:, phi] * pv_n).sum(axis=-1).T if n else np.zeros((len(group), width), dtype=kernels.INDEX)
                left = offsets[m] + moved[:, :, None] * width + base_m[None, None, :]
                right = offsets[n] + np.arange(size_n)[None, :, None] * q ** n + pulled[:, None, :]
                uf.union_edges(left.reshape(-1), right.reshape(-1))
    labels = uf.labels()
    reps = np.unique(labels)

    tuples = [kernels.digits(q, n).tolist() for n in range(truncation + 1)]
    bounds = np.array(offsets[1:])

    def decode(node):
        n = int(np.searchsorted(bounds, node, side="right"))
        a_idx, x_code = divmod(node - offsets[n], q ** n)
        return (n, values[n][a_idx], tuple(tuples[n][x_code]))

    representatives = [decode(int(r)) for r in reps]
    classes = {}
    for node, lab in enumerate(labels.tolist()):
        classes.setdefault(lab, []).append(node)
    decoded_classes = {decode(lab): [decode(v) for v in members] for lab, members in classes.items()}
    return CoendQuotient(representatives, decoded_classes)


def check_diamond_oracle(A: FinitaryFunctor, X, truncation: int | None = None, impl=None) -> Agreement:
    """The comparison (a, xs) -> A(xs)(a) is constant on coend classes and bijective."""
    q = as_cardinal(X)
    truncation = q + 2 if truncation is None else truncation
    quotient = coend_quotient_oracle(A, X, truncation, impl)
    direct = diamond_action(A, X)
    images = []
    checked = 0
    for rep, members in quotient.classes.items():
        target = diamond_comparison(A, X, *rep)
        for member in members:
            checked += 1
            if diamond_comparison(A, X, *member) != target:
                return Agreement(False, checked, ("not constant on class", rep, member))
        images.append(target)
    if len(set(images)) != len(images):
        return Agreement(False, checked, ("not injective",))
    if len(images) != len(direct):
        return Agreement(False, checked, ("not surjective", len(images), len(direct)))
    return Agreement(True, checked)


def hom_from_representable(k: int, C: FinitaryFunctor, m: int) -> EnumerableSet:
    """[y_k, C](m) = C(m k)."""
    return C(m * k)


def internal_hom(B: FinitaryFunctor, C: FinitaryFunctor, m: int) -> EnumerableSet:
    rep = getattr(B, "representable_index", None)
    if rep is None:
        raise Unsupported("internal hom is only computed for a representable first argument")
    return hom_from_representable(rep, C, m)


def enrichment_hom(X, Y, n: int) -> EnumerableSet:
    """<X, Y>(n) = Set(X^n, Y); a function is the tuple of its values on X^n in lexicographic order."""
    q, r = as_cardinal(X), as_cardinal(Y)
    width = q ** n
    size = r ** width
    enum = lambda: itertools.product(range(r), repeat=width)
    if size <= 20000:
        return EnumerableSet.finite(enum(), f"Set({q}^{n},{r})")
    return EnumerableSet.lazy(enum, size=size, description=f"Set({q}^{n},{r})")
