"""Acceptance criteria 1-10, one test each, each printing a PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` for the summary only.
"""

import itertools

import pytest

import oracles
from conftest import run_cli
from lawvere import (
    FinSetCategory,
    alg_mod_equivalence,
    builtin_clone,
    builtin_clones,
    check_adjunction,
    check_clone_laws,
    compare_RV,
    complete,
    free_algebra,
    verify_tensor,
)
from lawvere.completion import check_completion_roundtrip, check_restriction_roundtrip
from lawvere.finfun import builtin_functors, check_diamond_oracle
from lawvere.fpcat import check_VR
from lawvere.kan import check_nerve_roundtrip, module_from_functor, regular_module
from lawvere.library import InitialClone
from lawvere.semantics import Algebra, unit_morphism
from lawvere.terms import Var, height

BUILTINS = list(builtin_clones())


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def as_tuple(t):
    if isinstance(t, Var):
        return ("var", t.index)
    return (t.op,) + tuple(as_tuple(a) for a in t.args)


# 1 -----------------------------------------------------------------------

def test_criterion_01_clone_laws(verdict):
    bad = []
    for name, C in builtin_clones().items():
        r = check_clone_laws(C, 3, 100)
        finite = all(C.hom(n).is_finite for n in range(4))
        if not r.passed or (finite and not r.exhaustive):
            bad.append((name, r.counterexample, r.exhaustive))
    verdict(1, not bad, f"clone laws at arity <= 3 for {len(BUILTINS)} built-ins {bad or ''}")


# 2 -----------------------------------------------------------------------

def free_term_count(n, h):
    # terms of height <= h in n variables over one binary symbol
    a = n
    for _ in range(h):
        a = n + a * a
    return a


def test_criterion_02_completion_sizes(verdict):
    bad = []
    for name, C in builtin_clones().items():
        L = complete(C)
        for n in range(4):
            classes = oracles.term_classes(name, n)
            hom = C.hom(n)
            if classes is None:
                if hom.is_finite:
                    bad.append((name, n, "expected infinite"))
                    continue
                for h in range(3):
                    prefix = hom.take(free_term_count(n, h))
                    if len(set(prefix)) != len(prefix) or any(height(t) > h for t in prefix):
                        bad.append((name, n, "height order", h))
            else:
                got = {oracles.normal_form(name, as_tuple(C.to_term(t, n))) for t in hom}
                if len(hom) != len(classes) or got != set(classes):
                    bad.append((name, n, len(hom), len(classes)))
        for k, n, m in itertools.product(range(3), range(4), range(4)):
            size = oracles.term_model_size(name, n * k)
            hom = L.hom(k, n, m)
            if size is None and m > 0:
                if hom.is_finite:
                    bad.append((name, k, n, m, "expected infinite"))
                continue
            expected = 1 if m == 0 else size ** m
            if len(hom) != expected:
                bad.append((name, k, n, m, len(hom), expected))
    sl = complete(builtin_clone("semilattice"))
    pt = complete(builtin_clone("pointed"))
    spot = [len(sl.hom(1, n, 1)) == 2 ** n - 1 and len(pt.hom(1, n, 1)) == n + 1 for n in range(4)]
    verdict(2, not bad and all(spot), f"hom sizes vs term model, n,m <= 3 {bad or ''}")


# 3 -----------------------------------------------------------------------

def test_criterion_03_tensor_universal_property(verdict):
    bad = []
    count = 0
    for name, C in builtin_clones().items():
        L = complete(C)
        for X, n in itertools.product(range(4), repeat=2):
            r = verify_tensor(L, L.tensor(X, n), bound=2, objects=range(4))
            count += 1
            if not r.passed:
                bad.append((name, X, n, r.counterexample))
    verdict(3, not bad, f"{count} canonical witnesses {bad or ''}")


# 4 -----------------------------------------------------------------------

def test_criterion_04_round_trips(verdict):
    bad = []
    for name, C in builtin_clones().items():
        a = check_restriction_roundtrip(C, max_arity=3)
        b = check_completion_roundtrip(complete(C), max_object=3, max_arity=3)
        if not (a.passed and b.passed):
            bad.append((name, a.counterexample, b.counterexample))
    verdict(4, not bad, f"restriction/completion both ways {bad or ''}")


# 5 -----------------------------------------------------------------------

def test_criterion_05_R_V(verdict):
    vr = check_VR(FinSetCategory(3))
    rv = [compare_RV(complete(builtin_clone(n))) for n in ("pointed", "semilattice")]
    ok = vr.passed and all(r.passed for r in rv)
    verdict(5, ok, f"VR on FinSet<=3: {vr.passed}; RV: {[r.passed for r in rv]}")


# 6 -----------------------------------------------------------------------

def test_criterion_06_alg_mod(verdict):
    bad = []
    counts = {}
    for name, C in builtin_clones().items():
        r = alg_mod_equivalence(C, FinSetCategory(3, 27), bound=3)
        got = [r.details["counts"][str(q)] for q in range(4)]
        expected = [len(oracles.brute_force_algebras(name, q)) for q in range(4)]
        counts[name] = expected
        if not r.passed or [g["algebras"] for g in got] != expected or [g["models"] for g in got] != expected:
            bad.append((name, r.counterexample, got, expected))
    ok = not bad and counts["semilattice"][2] == 2
    verdict(6, ok, f"Alg = Mod on carriers <= 3 {bad or ''}")


# 7 -----------------------------------------------------------------------

def test_criterion_07_coend_oracle(verdict):
    bad = []
    for fname, A in builtin_functors().items():
        for q in range(4):
            a = check_diamond_oracle(A, q)
            if not a.ok:
                bad.append((fname, q, a.witness))
    verdict(7, not bad, f"diamond action vs coend quotient {bad or ''}")


# 8 -----------------------------------------------------------------------

def test_criterion_08_nerve(verdict):
    bad = []
    modules = [regular_module(C) for C in builtin_clones().values()]
    modules += [module_from_functor(A) for A in builtin_functors().values()]
    for M in modules:
        r = check_nerve_roundtrip(M, max_arity=3)
        if not r.passed:
            bad.append((M.name, r.counterexample))
    verdict(8, not bad, f"{len(modules)} modules round-trip {bad or ''}")


# 9 -----------------------------------------------------------------------

def matches_subset_model(fa):
    """The free structure is the nonempty-subset semilattice with x -> {x}."""
    Z = fa.algebra.carrier
    meet = fa.algebra.ops["meet"].values
    elems, table = oracles.free_semilattice(len(fa.unit.values))
    p = {z: frozenset([x]) for x, z in enumerate(fa.unit.values)}
    grew = True
    while grew:
        grew = False
        for a, b in itertools.product(list(p), repeat=2):
            z, val = meet[a * Z + b], p[a] | p[b]
            if z in p and p[z] != val:
                return False
            if z not in p:
                p[z], grew = val, True
    if len(p) != Z or set(p.values()) != set(elems):
        return False
    index = {e: i for i, e in enumerate(elems)}
    return all(table[index[p[a]] * Z + index[p[b]]] == index[p[meet[a * Z + b]]] for a in range(Z) for b in range(Z))


def test_criterion_09_free_algebras(verdict):
    ambient = FinSetCategory(64, 1 << 16)
    X = Algebra(InitialClone(), ambient, 2, {})
    results = {}
    for name in ("semilattice", "pointed"):
        F = unit_morphism(builtin_clone(name))
        fa = free_algebra(F, X)
        adj = check_adjunction(F, X, bound=3, free=fa)
        dist = [r for r in fa.tensor.reports if r.name.startswith("distributes")]
        results[name] = (fa.algebra.carrier, adj.passed, len(dist) == 3 and all(dist))
        if name == "semilattice":
            results["subsets"] = matches_subset_model(fa)
    ok = (results["semilattice"] == (3, True, True) and results["pointed"] == (3, True, True)
          and results["subsets"])
    verdict(9, ok, f"{results}")


# 10 ----------------------------------------------------------------------

CLI_RUNS = [
    ("check", "SL.thy"),
    ("check", "corrupted.thy"),
    ("--json", "check", "SL_terms.thy"),
    ("homset", "magma.thy", "-n", "2", "--limit", "8"),
    ("law", "SL.thy", "--objects", "2", "-k", "1", "--limit", "4"),
    ("models", "BSL.thy", "--carrier", "2"),
    ("algebras", "SL.thy", "--carrier", "3"),
    ("--json", "compare-alg-mod", "z2.thy", "--carrier", "3"),
    ("free", "--source", "empty.thy", "--target", "SL.thy", "--morphism", "free_sl.map", "--carrier", "2"),
    ("--json", "tensor", "-n", "2", "y2.fun", "y3.fun"),
]


def test_criterion_10_determinism(verdict):
    bad = []
    for args in CLI_RUNS:
        outs = [run_cli(*args) for _ in range(3)]
        if any(o != outs[0] for o in outs[1:]) or not outs[0][1]:
            bad.append(args)
    verdict(10, not bad, f"{len(CLI_RUNS)} commands x 3 runs byte-identical {bad or ''}")


if __name__ == "__main__":
    import subprocess
    import sys

    # a fresh interpreter, so pytest sees hypothesis before anything imports it
    sys.exit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q", "-p", "no:cacheprovider"]))
