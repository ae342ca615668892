import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from lawvere.clone import (
    CloneMorphism,
    MonoidClone,
    check_clone_iso,
    check_clone_laws,
    check_clone_morphism,
    clone_from_monoid,
    compose_via_linear,
    identity_morphism,
    linear_compose,
    monoid_from_clone,
    reindex_clone,
)
from lawvere.errors import LawViolation, NormalizerNonIdempotent, NotFinite
from lawvere.finfun import FinMap, semilattice_functor
from lawvere.library import (
    MonoidActionClone,
    PointedClone,
    SemilatticeClone,
    TableClone,
    TermClone,
    builtin_clone,
    builtin_clones,
    make_normalizer,
    term_model_closure,
)
from lawvere.semantics import morphism_from_terms, unit_morphism
from lawvere.terms import App, Signature, Var, height, rename, substitute

NAMES = sorted(builtin_clones())


# terms ---------------------------------------------------------------------

MAGMA = Signature([("f", 2), ("c", 0)])


def test_enumeration_is_height_ordered_and_repetition_free():
    ts = list(itertools.islice(MAGMA.enumerate_terms(2), 400))
    assert len(set(ts)) == len(ts)
    assert [height(t) for t in ts] == sorted(height(t) for t in ts)
    assert ts[:3] == [Var(0), Var(1), App("c", ())]


def test_signature_rules():
    with pytest.raises(ValueError):
        Signature([("f", 1), ("f", 2)])
    with pytest.raises(ValueError):
        MAGMA.check(App("f", (Var(0),)))
    assert Signature([("u", 1)]).terms_finite(0) and not Signature([("u", 1)]).terms_finite(3)
    assert not MAGMA.terms_finite(0)
    assert Signature([("f", 2)]).terms_finite(0)


def test_substitution():
    t = App("f", (Var(0), Var(1)))
    assert substitute(t, [Var(1), App("c", ())]) == App("f", (Var(1), App("c", ())))
    assert rename(t, [2, 2]) == App("f", (Var(2), Var(2)))


# built-in clones -----------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_hom_sizes_match_term_model(name):
    C = builtin_clone(name)
    for n in range(5):
        size = oracles.term_model_size(name, n)
        if size is None:
            assert not C.hom(n).is_finite
        else:
            assert len(C.hom(n)) == size


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("impl", ["numpy", None])
def test_clone_laws_backends(name, impl):
    report = check_clone_laws(builtin_clone(name), 3, 100, impl=impl)
    assert report.passed, report.counterexample


def test_exhaustive_on_lazy_clone_refused():
    with pytest.raises(NotFinite):
        check_clone_laws(builtin_clone("free-binary"), 2, exhaustive=True)


@pytest.mark.parametrize("name", NAMES)
def test_generators_and_terms_agree(name):
    C = builtin_clone(name)
    for n in range(3):
        for t in C.hom(n).take(50):
            assert C.from_term(C.to_term(t, n), n) == t


@pytest.mark.parametrize("name", NAMES)
def test_linear_composition_rebuilds_superposition(name):
    C = builtin_clone(name)
    for g in C.hom(2).take(6):
        for fs in itertools.product(C.hom(2).take(4), repeat=2):
            assert compose_via_linear(C, g, list(fs), 2) == C.superpose(g, list(fs), 2)


# negative controls ---------------------------------------------------------

def tabulate(C, N):
    label = lambda n, t: str(C.to_term(t, n))
    elements = {n: [label(n, t) for t in C.hom(n)] for n in range(N + 1)}
    projections = {(n, i): label(n, C.proj(n, i)) for n in range(N + 1) for i in range(n)}
    table = {}
    for n, m in itertools.product(range(N + 1), repeat=2):
        for g in C.hom(m):
            for fs in itertools.product(C.hom(n), repeat=m):
                table[(n, label(m, g), tuple(label(n, f) for f in fs))] = label(n, C.superpose(g, list(fs), n))
    return elements, projections, table


def test_table_clone_laws():
    elements, projections, table = tabulate(PointedClone(), 2)
    assert check_clone_laws(TableClone(elements, projections, table), 2)
    table[(1, "x1", ("pt()",))] = "x1"
    bad = check_clone_laws(TableClone(elements, projections, table), 2)
    assert not bad.passed and bad.counterexample[0] == "projection"
    del table[(1, "x1", ("pt()",))]
    with pytest.raises(LawViolation):
        check_clone_laws(TableClone(elements, projections, table), 2)


def test_broken_superposition_caught():
    class Broken(SemilatticeClone):
        def superpose(self, g, fs, n):
            out = super().superpose(g, fs, n)
            return out if len(g) < 2 else tuple(fs[g[0]])

    report = check_clone_laws(Broken(), 3)
    assert not report.passed and report.exhaustive


def test_normalizer_must_be_idempotent():
    sig = Signature([("u", 1)])
    with pytest.raises(NormalizerNonIdempotent):
        TermClone(sig, lambda t: App("u", (t,)) if isinstance(t, App) else t, check_idempotent=20)


def test_non_monoid_rejected():
    T = semilattice_functor()
    with pytest.raises(LawViolation):
        clone_from_monoid(T, lambda n, i: (i,), lambda n, g: T(n)[0], name="collapse")


# normalizers ---------------------------------------------------------------

STRATEGY_FOR = {"semilattice": "aci", "z2-set": "involution", "idempotent-set": "idempotent"}


@pytest.mark.parametrize("name", sorted(STRATEGY_FOR))
def test_term_clone_iso_to_builtin(name):
    B = builtin_clone(name)
    sig = B.require_presentation().signature
    T = TermClone(sig, make_normalizer(STRATEGY_FOR[name], sig), B.require_presentation().equations, name="terms")
    there = CloneMorphism(B, T, lambda n, t: T.normalize(B.to_term(t, n)), name="name")
    back = CloneMorphism(T, B, lambda n, t: B.from_term(t, n), name="eval")
    assert check_clone_iso(there, back, 3, 100)


@given(st.sampled_from(["ac", "aci", "involution", "idempotent", "free"]), st.integers(0, 300))
def test_normalizers_idempotent(strategy, k):
    sig = Signature([("m", 2), ("u", 1)])
    norm = make_normalizer(strategy, sig)
    t = next(itertools.islice(sig.enumerate_terms(2), k, None))
    assert norm(norm(t)) == norm(t)


def test_unknown_strategy():
    with pytest.raises(KeyError):
        make_normalizer("magic", MAGMA)


def test_closure_counts_semilattice_terms():
    sig = Signature([("meet", 2)])
    assert [len(term_model_closure(sig, make_normalizer("aci", sig), n)) for n in range(5)] == [0, 1, 3, 7, 15]


# morphisms and monoids -----------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_monoid_round_trip(name):
    C = builtin_clone(name)
    if not C.hom(3).is_finite:
        pytest.skip("monoid view needs finite values")
    M = MonoidClone(monoid_from_clone(C), name="monoid")
    assert check_clone_laws(M, 2)
    same = lambda n, t: t
    assert check_clone_iso(CloneMorphism(C, M, same), CloneMorphism(M, C, same), 3)


@pytest.mark.parametrize("name", NAMES)
def test_unit_and_identity_morphisms(name):
    C = builtin_clone(name)
    assert check_clone_morphism(unit_morphism(C), 3)
    assert check_clone_morphism(identity_morphism(C), 2)


def test_generator_images_checked_against_equations():
    SL, BSL = builtin_clone("semilattice"), builtin_clone("bounded-semilattice")
    F = morphism_from_terms(SL, BSL, {"meet": App("meet", (Var(0), Var(1)))})
    assert check_clone_morphism(F, 3)
    with pytest.raises(LawViolation):
        morphism_from_terms(SL, builtin_clone("free-binary"), {"meet": App("f", (Var(0), Var(1)))})
    # meet -> x1 is a left-zero band, not commutative
    with pytest.raises(LawViolation):
        morphism_from_terms(SL, BSL, {"meet": Var(0)})


def test_composite_morphism():
    P = PointedClone()
    BSL = builtin_clone("bounded-semilattice")
    F = morphism_from_terms(P, BSL, {"pt": App("top", ())})
    G = unit_morphism(P).then(F)
    assert check_clone_morphism(G, 3)
    assert G(2, 1) == (1,)


def test_reindexing_is_functorial():
    C = builtin_clone("bounded-semilattice")
    f, g = FinMap(2, 3, (2, 0)), FinMap(3, 2, (1, 1, 0))
    for t in C.hom(2):
        assert reindex_clone(C, g, reindex_clone(C, f, t)) == reindex_clone(C, f.then(g), t)


def test_linear_composition_block_order():
    C = builtin_clone("semilattice")
    # meet (x) (x1, meet(x1,x2)) lands in arity 3 with the second block shifted
    assert linear_compose(C, (0, 1), [(0,), (0, 1)], [1, 2]) == (0, 1, 2)
    Z = MonoidActionClone([[0, 1], [1, 0]], {"s": 1})
    assert linear_compose(Z, (1, 0), [(1, 1)], [2]) == (0, 1)
