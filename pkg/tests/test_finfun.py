import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from lawvere.errors import NotFinite, TruncationTooSmall, Unsupported
from lawvere.finfun import (
    EnumerableSet,
    FinitaryFunctor,
    FinMap,
    agree_up_to,
    all_maps,
    builtin_functors,
    check_diamond_oracle,
    check_functoriality,
    coend_quotient_oracle,
    compose,
    diamond_action,
    enrichment_hom,
    fair_product,
    identity,
    injection,
    internal_hom,
    product_set,
    representable,
    semilattice_functor,
    tensor,
    tensor_iso_representables,
    unit_functor,
)


def finmaps(dom, cod):
    return st.lists(st.integers(0, cod - 1), min_size=dom, max_size=dom).map(lambda v: FinMap(dom, cod, tuple(v)))


@given(st.integers(0, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_composition_is_associative_and_unital(a, b, c, d, data):
    f, g, h = data.draw(finmaps(a, b)), data.draw(finmaps(b, c)), data.draw(finmaps(c, d))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(identity(b), f) == f == compose(f, identity(a))
    assert f.then(g) == compose(g, f)


def test_finmap_validation():
    with pytest.raises(ValueError):
        FinMap(2, 2, (0,))
    with pytest.raises(ValueError):
        FinMap(1, 2, (2,))
    with pytest.raises(ValueError):
        compose(identity(2), identity(3))


def test_all_maps_and_injections():
    assert [len(list(all_maps(n, m))) for n, m in [(0, 0), (0, 3), (2, 0), (2, 3)]] == [1, 1, 0, 9]
    assert injection([2, 3, 1], 1).values == (2, 3, 4)


@given(st.lists(st.lists(st.integers(), max_size=4, unique=True), max_size=3))
def test_fair_product_on_finite_factors_is_the_product(factors):
    got = list(fair_product(factors))
    assert sorted(got) == sorted(itertools.product(*factors))
    assert len(set(got)) == len(got)


def test_fair_product_reaches_every_tuple_of_infinite_factors():
    prefix = list(itertools.islice(fair_product([itertools.count(), itertools.count()]), 25))
    assert set(prefix) == set(itertools.product(range(5), repeat=2))


def test_lazy_sets():
    lazy = EnumerableSet.lazy(itertools.count)
    assert not lazy.is_finite and lazy.take(3) == [0, 1, 2]
    with pytest.raises(NotFinite):
        len(lazy)
    with pytest.raises(NotFinite):
        5 in lazy
    big = product_set([EnumerableSet.finite(range(200))] * 2)
    assert big.is_finite and not big.is_materialised and len(big) == 40000
    assert big.take(2) == [(0, 0), (0, 1)]


@pytest.mark.parametrize("name", sorted(builtin_functors()))
def test_builtin_functors_are_functors(name):
    assert check_functoriality(builtin_functors()[name], bound=3)


def test_broken_functor_is_caught():
    # sends every map to the constant 0 on 2-subsets: not compatible with identities
    P = semilattice_functor()
    bad = FinitaryFunctor(P.on_ob, lambda f: (lambda a: a) if f.dom != f.cod else (lambda a: P(f.cod)[0]), "bad")
    assert not check_functoriality(bad, bound=2)


@pytest.mark.parametrize("n, m", [(0, 2), (1, 1), (1, 2), (2, 1), (2, 2)])
def test_tensor_of_representables(n, m):
    assert agree_up_to(tensor(representable(n), representable(m)), representable(n * m), bound=3,
                       iso=tensor_iso_representables(n, m))


@pytest.mark.parametrize("name", sorted(builtin_functors()))
def test_tensor_units(name):
    A = builtin_functors()[name]
    I = unit_functor()
    assert agree_up_to(tensor(A, I), A, bound=3)
    assert agree_up_to(tensor(I, A), A, bound=3, iso=lambda n, i: A(n)[i])


@pytest.mark.parametrize("name", ["unit", "y0", "y2", "h2", "semilattice", "pointed"])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_coend_quotient_against_naive_closure(name, q):
    A = builtin_functors()[name]
    quotient = coend_quotient_oracle(A, q, truncation=q)
    naive = oracles.coend_size(lambda n: list(A(n)), lambda f, m, a: A.on_mor(FinMap(len(f), m, f))(a), q, q)
    assert len(quotient) == naive == len(diamond_action(A, q))


def test_coend_truncation_below_carrier_rejected():
    with pytest.raises(TruncationTooSmall):
        coend_quotient_oracle(unit_functor(), 3, truncation=2)


@pytest.mark.parametrize("impl", ["numpy", None])
def test_diamond_oracle_backends(impl):
    for A in builtin_functors().values():
        assert check_diamond_oracle(A, 3, impl=impl)


def test_internal_hom_and_enrichment():
    P = semilattice_functor()
    assert [len(internal_hom(representable(2), P, m)) for m in range(3)] == [0, 3, 15]
    with pytest.raises(Unsupported):
        internal_hom(P, P, 1)
    assert len(enrichment_hom(2, 3, 2)) == 3 ** 4
    assert not enrichment_hom(3, 3, 3).is_materialised
