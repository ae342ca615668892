"""Algebras of clones and models of their Lawvere theories in finite-power categories.

An algebra of T on X is a clone morphism T -> End(X), fixed by the images of
the generating operations of T's presentation.  A model of L(T) is a
power-preserving functor L(T) -> R(C) sending X^(1) to X; it is fixed by its
values on the arity-1 homs and is found by checking functoriality, not
the equations.  The two searches share only the candidate space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import kernels
from .clone import (
    Clone,
    CloneMorphism,
    FSetFunctor,
    LawReport,
    SubClone,
    show,
)
from .completion import LawvereTheoryCat, complete
from .errors import LawViolation, NonPreserving, PowerMissing, SearchSpaceTooLarge
from .finfun import FinMap, fair_product
from .fpcat import FinSetCategory, FPCategory, R
from .terms import App, TableLayout, Term, Var

SEARCH_CAP = 1 << 22


def end_clone(C: FPCategory, X) -> Clone:
    """End(X): n -> C(X^n, X), superposition from composition in R(C)."""
    return SubClone(R(C), X, name=f"End({X})")


# --------------------------------------------------------------------------
# algebras


@dataclass
class Algebra:
    """A T-algebra: generator images ``ops[o]`` in C(X^r, X)."""

    clone: Clone
    ambient: FPCategory
    carrier: Any
    ops: dict

    def __post_init__(self):
        self._end_clone = None
        self._cache = {}

    @property
    def _end(self) -> Clone:
        if self._end_clone is None:
            self._end_clone = end_clone(self.ambient, self.carrier)
        return self._end_clone

    @property
    def key(self):
        return tuple((o, _mkey(self.ops[o])) for o in sorted(self.ops))

    def interpret(self, term: Term, n: int):
        E = self._end
        if isinstance(term, Var):
            return E.proj(n, term.index)
        return E.superpose(self.ops[term.op], [self.interpret(a, n) for a in term.args], n)

    def action(self, n: int, t):
        """The operation X^n -> X named by t in T(n)."""
        k = (n, t)
        if k not in self._cache:
            self._cache[k] = self.interpret(self.clone.to_term(t, n), n)
        return self._cache[k]

    def as_morphism(self) -> CloneMorphism:
        return CloneMorphism(self.clone, self._end, self.action, name=f"alg[{self.carrier}]")

    def as_functor(self) -> FSetFunctor:
        """The one-object functor from T into R(C)."""
        X = self.carrier
        return FSetFunctor(self.clone, R(self.ambient), lambda _: X, lambda n, A, B, t: self.action(n, t), "algebra")

    def structure_map(self, n: int) -> dict:
        """t -> table of the operation X^n -> X, for each t in T(n)."""
        return {t: self.action(n, t) for t in self.clone.hom(n)}

    def describe(self) -> dict:
        return {o: show(self.ops[o]) for o in sorted(self.ops)}


def _mkey(f):
    return f.values if isinstance(f, FinMap) else f


def _candidate_tables(layout: TableLayout, cap: int) -> np.ndarray:
    """Every packing of one table per operation, in lexicographic order."""
    q = layout.q
    total = 1
    for w in layout.widths:
        total *= q ** w
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} candidate structures exceed the cap {cap}")
    per_op = [kernels.digits(q, w) for w in layout.widths]
    if not per_op:
        return np.zeros((1, 0), dtype=kernels.INDEX)
    if total == 0:
        return np.zeros((0, layout.width), dtype=kernels.INDEX)
    grids = np.indices(tuple(t.shape[0] for t in per_op)).reshape(len(per_op), -1)
    return np.concatenate([t[g] for t, g in zip(per_op, grids)], axis=1).astype(kernels.INDEX)


def _rows_to_ops(layout: TableLayout, row) -> dict:
    q = layout.q
    out = {}
    for s, part in layout.split(row).items():
        a = layout.signature.arity[s]
        out[s] = FinMap(q ** a, q, tuple(int(v) for v in part))
    return out


def _equations_hold(layout, cands, equations, impl=None, chunk=1 << 16):
    keep = np.ones(cands.shape[0], dtype=bool)
    for lhs, rhs, arity in equations:
        for start in range(0, cands.shape[0], chunk):
            block = cands[start:start + chunk]
            sel = keep[start:start + chunk]
            if not sel.any():
                continue
            a = layout.evaluate(lhs, block, arity, impl)
            b = layout.evaluate(rhs, block, arity, impl)
            sel &= np.all(a == b, axis=1)
    return keep


def enumerate_algebras(T: Clone, C: FPCategory, X, cap: int = SEARCH_CAP, impl=None) -> list[Algebra]:
    """All algebras of T on X, in lexicographic order of generator tables.

    Driven by T's presentation: candidate generator images are filtered by
    the presentation's equations.
    """
    pres = T.require_presentation()
    sig = pres.signature
    if isinstance(C, FinSetCategory):
        for _, a in sig:
            C.power(X, a)
        layout = TableLayout(sig, X)
        cands = _candidate_tables(layout, cap)
        keep = _equations_hold(layout, cands, pres.equations, impl)
        return [Algebra(T, C, X, _rows_to_ops(layout, row)) for row in cands[keep]]
    return _enumerate_algebras_generic(T, C, X, cap)


def _enumerate_algebras_generic(T: Clone, C: FPCategory, X, cap: int) -> list[Algebra]:
    pres = T.require_presentation()
    ops = pres.signature.ops
    pools = [list(C.mor(C.power(X, a).vertex, X)) for _, a in ops]
    total = 1
    for p in pools:
        total *= len(p)
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} candidate structures exceed the cap {cap}")
    out = []
    for choice in itertools.product(*pools):
        alg = Algebra(T, C, X, {s: f for (s, _), f in zip(ops, choice)})
        if all(alg.interpret(l, a) == alg.interpret(r, a) for l, r, a in pres.equations):
            out.append(alg)
    return out


def check_algebra(A: Algebra, max_arity: int = 2, sample_limit: int = 50) -> LawReport:
    """The action is a clone morphism T -> End(X) (checked on sampled homs)."""
    from .clone import check_clone_morphism

    return check_clone_morphism(A.as_morphism(), max_arity, sample_limit)


# --------------------------------------------------------------------------
# models


@dataclass
class Model:
    """A power-preserving functor L(T) -> R(C) with X^(1) -> X, strict on chosen powers.

    ``basic(n, t)`` is the value on (t,) in L_1(n, 1); it determines the rest.
    """

    theory: LawvereTheoryCat
    ambient: FPCategory
    carrier: Any
    basic: Callable
    key: Any = None
    generator_values: dict | None = None

    def on_ob(self, n):
        return self.ambient.power(self.carrier, n).vertex

    def on_hom(self, k, n, m, f):
        """f in C(n k)^m goes to (X^n)^k -> X^m, pairing the component values."""
        C, X = self.ambient, self.carrier
        Xn = self.on_ob(n)
        src = C.power(Xn, k).vertex
        flat = flatten_iso(C, X, n, k)
        comps = [C.compose(self.basic(n * k, c), flat, src, C.power(X, n * k).vertex, X) for c in f]
        return C.power(X, m).pair(comps, src)

    def as_functor(self) -> FSetFunctor:
        return FSetFunctor(self.theory, R(self.ambient), self.on_ob, self.on_hom, "model")

    def restrict(self) -> Algebra:
        """Restriction along the unit T -> L(T)."""
        T = self.theory.clone
        if self.generator_values is not None:
            return Algebra(T, self.ambient, self.carrier, dict(self.generator_values))
        ops = {}
        for s, a in T.require_presentation().signature:
            ops[s] = self.basic(a, T.generator(s))
        return Algebra(T, self.ambient, self.carrier, ops)


def flatten_iso(C: FPCategory, X, n: int, k: int):
    """(X^n)^k -> X^(n k) built from projections, block order."""
    Pn = C.power(X, n)
    Pk = C.power(Pn.vertex, k)
    Pnk = C.power(X, n * k)
    comps = [C.compose(Pn.projections[c], Pk.projections[b], Pk.vertex, Pn.vertex, X) for b in range(k) for c in range(n)]
    return Pnk.pair(comps, Pk.vertex)


def _functoriality_instances(T: Clone, gen_arity: int, arg_arity: int, sample_limit: int):
    """Pairs (g, fs, n): g in T(m) for m <= gen_arity, fs in T(n)^m for n <= arg_arity."""
    out = []
    for m in range(gen_arity + 1):
        for n in range(arg_arity + 1):
            gm, fn = T.hom(m), T.hom(n)
            if gm.is_finite and fn.is_finite and len(gm) * len(fn) ** m <= 20000:
                inst = itertools.product(gm.elements, itertools.product(fn.elements, repeat=m))
            else:
                inst = itertools.islice(fair_product([gm, _Tuples(fn, m)]), sample_limit)
            out.extend((g, tuple(fs), n) for g, fs in inst)
    return out


class _Tuples:
    def __init__(self, s, k):
        self.s, self.k = s, k

    def __iter__(self):
        return fair_product([self.s] * self.k)


def enumerate_models(L: LawvereTheoryCat, C: FPCategory, X, cap: int = SEARCH_CAP, sample_limit: int = 100,
                     impl=None) -> list[Model]:
    """All strict power-preserving functors L -> R(C) sending the distinguished object to X.

    A candidate is an assignment of operations X^r -> X to the generators,
    extended to every (t,) in L_1(n, 1) through a term for t.  It is kept
    when the extension is functorial on the instances from
    ``_functoriality_instances``; no equation of the presentation is consulted.
    """
    T = L.clone
    pres = T.require_presentation()
    sig = pres.signature
    arg_arity = max(pres.generating_arity, pres.equation_arity, 1)
    instances = _functoriality_instances(T, pres.generating_arity, arg_arity, sample_limit)
    if isinstance(C, FinSetCategory):
        return _models_finset(L, C, X, cap, instances, impl)
    return _models_generic(L, C, X, cap, instances)


def _models_finset(L, C, X, cap, instances, impl):
    T = L.clone
    sig = T.require_presentation().signature
    for _, a in sig:
        C.power(X, a)
    layout = TableLayout(sig, X)
    cands = _candidate_tables(layout, cap)
    q = X
    values = {}
    rows = cands

    def value(t, n):
        k = (n, t)
        if k not in values:
            values[k] = layout.evaluate(T.to_term(t, n), rows, n, impl)
        return values[k]

    # survivors are compacted after every instance; most candidates die early
    for g, fs, n in instances:
        if rows.shape[0] == 0 or q ** n == 0:
            continue
        m = len(fs)
        lhs = value(T.superpose(g, list(fs), n), n)
        if m:
            stack = np.stack([value(f, n) for f in fs], axis=1)
        else:
            stack = np.zeros((rows.shape[0], 0, q ** n), dtype=kernels.INDEX)
        ok = np.all(lhs == kernels.compose_tables(value(g, m), stack, q, impl), axis=1)
        if not ok.all():
            rows = rows[ok]
            values = {k: v[ok] for k, v in values.items()}
    return [_finset_model(L, C, X, layout, row) for row in rows]


def _finset_model(L, C, X, layout, row):
    T = L.clone
    cache = {}
    ops = _rows_to_ops(layout, row)

    def basic(n, t):
        k = (n, t)
        if k not in cache:
            vals = layout.evaluate(T.to_term(t, n), row[None, :], n)[0]
            cache[k] = FinMap(X ** n, X, tuple(int(v) for v in vals))
        return cache[k]

    # the value on a generator (g,) is the generator's own table
    return Model(L, C, X, basic, key=tuple((o, ops[o].values) for o in sorted(ops)), generator_values=ops)


def _models_generic(L, C, X, cap, instances):
    T = L.clone
    pres = T.require_presentation()
    ops = pres.signature.ops
    pools = [list(C.mor(C.power(X, a).vertex, X)) for _, a in ops]
    total = 1
    for p in pools:
        total *= len(p)
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} candidate structures exceed the cap {cap}")
    E = end_clone(C, X)
    out = []
    for choice in itertools.product(*pools):
        images = {s: f for (s, _), f in zip(ops, choice)}
        cache = {}

        def basic(n, t, images=images, cache=cache):
            k = (n, t)
            if k not in cache:
                cache[k] = _interp(E, images, T.to_term(t, n), n)
            return cache[k]

        if all(basic(n, T.superpose(g, list(fs), n)) == E.superpose(basic(len(fs), g), [basic(n, f) for f in fs], n)
               for g, fs, n in instances):
            out.append(Model(L, C, X, basic, key=tuple((s, _mkey(images[s])) for s in sorted(images))))
    return out


def _interp(E, images, term, n):
    if isinstance(term, Var):
        return E.proj(n, term.index)
    return E.superpose(images[term.op], [_interp(E, images, a, n) for a in term.args], n)


def check_model(Mo: Model, objects=(0, 1, 2), max_arity: int = 2, sample_limit: int = 20) -> LawReport:
    """The model is an [F,Set]-functor and sends chosen tensors to chosen tensors."""
    from .clone import check_functor
    from .completion import verify_tensor

    F = Mo.as_functor()
    parts = [check_functor(F, list(objects), max_arity, sample_limit)]
    RC = R(Mo.ambient)
    checked = 0
    for n in objects:
        for m in range(max_arity + 1):
            w = Mo.theory.tensor(n, m)
            try:
                image = F.on_hom(m, n, w.vertex, w.i)
                rw = RC.tensor(F.on_ob(n), m)
            except PowerMissing:
                continue
            checked += 1
            if F.on_ob(w.vertex) != rw.vertex or image != rw.i:
                parts.append(LawReport("tensor preservation", False, checked, ("witness", n, m)))
    parts.append(LawReport("tensor preservation", True, checked))
    return LawReport.combine("model", parts)


# --------------------------------------------------------------------------
# morphisms


def algebra_morphisms(A: Algebra, B: Algebra, impl=None) -> list:
    """Maps h: X -> Y with h o op_A = op_B o h^r for every generator op."""
    C = A.ambient
    if isinstance(C, FinSetCategory):
        q_src, q_dst = A.carrier, B.carrier
        maps = kernels.digits(q_dst, q_src)
        ok = np.ones(maps.shape[0], dtype=bool)
        for s, a in A.clone.require_presentation().signature:
            if maps.shape[0] == 0:
                break
            if q_src ** a == 0:
                continue
            ok &= kernels.hom_filter(maps, A.ops[s].values, B.ops[s].values, q_src, q_dst, a, impl)
        return [FinMap(q_src, q_dst, tuple(int(v) for v in row)) for row in maps[ok]]
    return [h for h in C.mor(A.carrier, B.carrier) if is_algebra_morphism(h, A, B)]


def _power_map(C: FPCategory, h, X, Y, n):
    PX, PY = C.power(X, n), C.power(Y, n)
    comps = [C.compose(h, p, PX.vertex, X, Y) for p in PX.projections]
    return PY.pair(comps, PX.vertex)


def is_algebra_morphism(h, A: Algebra, B: Algebra, max_arity: int | None = None) -> bool:
    C = A.ambient
    X, Y = A.carrier, B.carrier
    for s, a in A.clone.require_presentation().signature:
        PX, PY = C.power(X, a), C.power(Y, a)
        lhs = C.compose(h, A.ops[s], PX.vertex, X, Y)
        rhs = C.compose(B.ops[s], _power_map(C, h, X, Y, a), PX.vertex, PY.vertex, Y)
        if lhs != rhs:
            return False
    return True


def naturality_tests(T: Clone, arity: int = 2, sample_limit: int = 40) -> list:
    """(n, t) with t in T(n), n <= arity: all of a finite hom, a prefix of a lazy one."""
    tests = []
    for n in range(arity + 1):
        hs = T.hom(n)
        tests.extend((n, t) for t in (hs.elements if hs.is_finite else hs.take(sample_limit)))
    return tests


def model_morphisms(M1: Model, M2: Model, arity: int = 2, sample_limit: int = 40, tests=None) -> list:
    """Maps h: X -> Y whose powers h^n form a transformation M1 => M2.

    Naturality is tested on (t,) in L_1(n, 1) for the ``naturality_tests``.
    """
    C = M1.ambient
    X, Y = M1.carrier, M2.carrier
    if tests is None:
        tests = naturality_tests(M1.theory.clone, arity, sample_limit)
    if isinstance(C, FinSetCategory):
        maps = kernels.digits(Y, X)
        ok = np.ones(maps.shape[0], dtype=bool)
        for n, t in tests:
            if maps.shape[0] == 0 or X ** n == 0:
                continue
            ok &= kernels.hom_filter(maps, M1.basic(n, t).values, M2.basic(n, t).values, X, Y, n)
        return [FinMap(X, Y, tuple(int(v) for v in row)) for row in maps[ok]]
    out = []
    for h in C.mor(X, Y):
        good = True
        for n, t in tests:
            PX, PY = C.power(X, n), C.power(Y, n)
            lhs = C.compose(h, M1.basic(n, t), PX.vertex, X, Y)
            rhs = C.compose(M2.basic(n, t), _power_map(C, h, X, Y, n), PX.vertex, PY.vertex, Y)
            if lhs != rhs:
                good = False
                break
        if good:
            out.append(h)
    return out


# --------------------------------------------------------------------------
# Alg = Mod


def _spread_pairs(n_a: int, n_b: int, cap: int) -> list[tuple[int, int]]:
    total = n_a * n_b
    if total <= cap:
        return [(i, j) for i in range(n_a) for j in range(n_b)]
    step = total / cap
    return [divmod(int(c * step), n_b) for c in range(cap)]


def alg_mod_equivalence(T: Clone, C: FPCategory, bound: int = 3, pair_cap: int = 400, carriers=None,
                        impl=None) -> LawReport:
    """For each carrier X <= bound: restriction Mod -> Alg is bijective, and so on morphisms.

    Morphism sets are compared for every pair of structures when there are
    at most ``pair_cap`` of them per carrier pair, otherwise on an evenly
    spaced deterministic selection (reported in ``details``).
    """
    L = complete(T)
    name = f"Alg = Mod for {T.name} in {C.name}"
    checked = 0
    counts = {}
    sampled_pairs = False
    algs, mods = {}, {}
    if carriers is None:
        carriers = range(bound + 1) if isinstance(C, FinSetCategory) else C.objects
    for X in carriers:
        algs[X] = enumerate_algebras(T, C, X, impl=impl)
        mods[X] = enumerate_models(L, C, X, impl=impl)
        counts[str(X)] = {"algebras": len(algs[X]), "models": len(mods[X])}
        restricted = [Mo.restrict().key for Mo in mods[X]]
        alg_keys = [A.key for A in algs[X]]
        checked += len(restricted)
        if len(set(restricted)) != len(restricted):
            return LawReport(name, False, checked, ("restriction not injective", X), details={"counts": counts})
        if set(restricted) != set(alg_keys):
            return LawReport(name, False, checked, ("restriction not onto", X, len(alg_keys), len(restricted)),
                             details={"counts": counts})
    by_key = {X: {Mo.restrict().key: Mo for Mo in mods[X]} for X in mods}
    tests = naturality_tests(T)
    for X in algs:
        for Y in algs:
            chosen = _spread_pairs(len(algs[X]), len(algs[Y]), pair_cap)
            sampled_pairs |= len(chosen) < len(algs[X]) * len(algs[Y])
            for a, b in chosen:
                A, B = algs[X][a], algs[Y][b]
                checked += 1
                am = [_mkey(h) for h in algebra_morphisms(A, B, impl)]
                mm = [_mkey(h) for h in model_morphisms(by_key[X][A.key], by_key[Y][B.key], tests=tests)]
                if am != mm:
                    return LawReport(name, False, checked, ("morphisms", X, Y, A.describe(), B.describe(), len(am), len(mm)),
                                     details={"counts": counts})
    return LawReport(name, True, checked, None, not sampled_pairs, {"counts": counts})


# --------------------------------------------------------------------------
# functors between semantics


def morphism_from_terms(S: Clone, T: Clone, images: dict, name: str = "F", check: bool = True) -> CloneMorphism:
    """The clone morphism sending each generator of S to the given T-term; S's equations are checked."""
    pres = S.require_presentation()
    elems = {}
    for s, a in pres.signature:
        if s not in images:
            raise LawViolation(f"morphism {name} gives no image for {s}")
        term = images[s]
        elems[s] = T.from_term(term, a) if isinstance(term, (Var, App)) else term
    F = CloneMorphism(S, T, images=elems, name=name)
    if check:
        for lhs, rhs, a in pres.equations:
            if F._interpret(lhs, a) != F._interpret(rhs, a):
                raise LawViolation(f"morphism {name} does not respect {lhs} = {rhs}")
    return F


def unit_morphism(T: Clone) -> CloneMorphism:
    from .library import InitialClone

    return CloneMorphism(InitialClone(), T, images={}, name=f"unit[{T.name}]")


def algebraic_functor(F: CloneMorphism, C: FPCategory | None = None) -> Callable[[Algebra], Algebra]:
    """Precomposition: a T-algebra becomes an S-algebra along F: S -> T."""
    S = F.source

    def apply(A: Algebra) -> Algebra:
        ops = {}
        for s, a in S.require_presentation().signature:
            ops[s] = A.action(a, F(a, S.generator(s)))
        return Algebra(S, A.ambient, A.carrier, ops)

    return apply


@dataclass
class FPFunctor:
    """An ordinary functor between finite-power categories."""

    source: FPCategory
    target: FPCategory
    on_ob: Callable
    on_mor: Callable
    name: str = "G"


def identity_fp_functor(C: FPCategory) -> FPFunctor:
    return FPFunctor(C, C, lambda X: X, lambda f, X, Y: f, "id")


def inclusion_functor(C: FinSetCategory, D: FinSetCategory) -> FPFunctor:
    return FPFunctor(C, D, lambda X: X, lambda f, X, Y: f, f"{C.name} -> {D.name}")


def product_functor(C: FinSetCategory, K: int, D: FinSetCategory | None = None) -> FPFunctor:
    """X -> X x K, f -> f x id (codes x*K + k).  Does not preserve powers for K > 1."""
    D = D or FinSetCategory(C.bound * K, C.power_bound * K)

    def on_mor(f, X, Y):
        return FinMap(X * K, Y * K, tuple(f.values[x] * K + k for x in range(X) for k in range(K)))

    return FPFunctor(C, D, lambda X: X * K, on_mor, f"- x {K}")


def _power_comparison_inverse(G: FPFunctor, X, n):
    C, D = G.source, G.target
    P = C.power(X, n)
    GX = G.on_ob(X)
    Q = D.power(GX, n)
    src = G.on_ob(P.vertex)
    comp = Q.pair([G.on_mor(p, P.vertex, X) for p in P.projections], src)
    if isinstance(comp, FinMap):
        if comp.dom != comp.cod or len(set(comp.values)) != comp.dom:
            raise NonPreserving(f"{G.name} does not preserve the power {X}^{n}: comparison {comp}")
        inv = [0] * comp.dom
        for a, b in enumerate(comp.values):
            inv[b] = a
        return FinMap(comp.cod, comp.dom, tuple(inv))
    for h in D.mor(Q.vertex, src):
        if D.compose(h, comp, src, Q.vertex, src) == D.identity(src) and D.compose(comp, h, Q.vertex, src, Q.vertex) == D.identity(Q.vertex):
            return h
    raise NonPreserving(f"{G.name} does not preserve the power {X}^{n}")


def postcompose_semantics(G: FPFunctor, max_arity: int | None = None) -> Callable[[Algebra], Algebra]:
    """An algebra on X in C becomes one on GX in D: op -> G(op) o (comparison)^-1.

    Raises NonPreserving when a power-comparison map is not invertible.
    """

    def apply(A: Algebra) -> Algebra:
        X = A.carrier
        sig = A.clone.require_presentation().signature
        top = max(sig.max_arity, 1) if max_arity is None else max_arity
        inverses = {n: _power_comparison_inverse(G, X, n) for n in range(top + 1)}
        D = G.target
        GX = G.on_ob(X)
        ops = {}
        for s, a in sig:
            Pa = A.ambient.power(X, a)
            image = G.on_mor(A.ops[s], Pa.vertex, X)
            ops[s] = D.compose(image, inverses[a], D.power(GX, a).vertex, G.on_ob(Pa.vertex), GX)
        return Algebra(A.clone, D, GX, ops)

    return apply
