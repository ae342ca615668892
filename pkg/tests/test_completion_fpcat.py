import json

import pytest

from lawvere import builtin_clone, builtin_clones, complete, verify_tensor
from lawvere.clone import check_category_laws
from lawvere.completion import (
    TensorWitness,
    check_fully_faithful,
    check_lawvere_condition,
    compose_witnesses,
    copower_equations,
    power_from_tensor,
    tensor_from_power,
)
from lawvere.errors import PowerMissing
from lawvere.fpcat import (
    FinSetCategory,
    OppositeFinSet,
    R,
    TableCategory,
    TerminalCategory,
    V,
    check_fp_category,
    check_VR,
    compare_RV,
)

NAMES = sorted(builtin_clones())


@pytest.mark.parametrize("name", NAMES)
def test_unit_fully_faithful_and_lawvere_condition(name):
    C = builtin_clone(name)
    assert check_fully_faithful(C, bound=3)
    assert check_lawvere_condition(complete(C), bound=3)


def test_duplicated_component_is_not_a_tensor():
    L = complete(builtin_clone("semilattice"))
    w = L.tensor(2, 2)
    C = L.clone
    bad = TensorWitness(2, 2, 4, (C.proj(4, 0), C.proj(4, 0), C.proj(4, 2), C.proj(4, 3)), w.projections)
    assert verify_tensor(L, w, objects=range(3))
    assert not verify_tensor(L, bad, objects=range(3))
    assert not copower_equations(L, bad, w.projections)


def test_permuted_tensor_is_still_a_tensor():
    # universality does not care which iso is chosen
    L = complete(builtin_clone("pointed"))
    C = L.clone
    swapped = TensorWitness(1, 2, 2, (C.proj(2, 1), C.proj(2, 0)))
    assert verify_tensor(L, swapped, objects=range(3))
    ps = power_from_tensor(L, swapped)
    assert ps == [(C.proj(2, 1),), (C.proj(2, 0),)]


@pytest.mark.parametrize("name", ["semilattice", "z2-set", "free-binary"])
def test_witnesses_compose(name):
    L = complete(builtin_clone(name))
    w = compose_witnesses(L, L.tensor(1, 2), L.tensor(2, 2))
    assert (w.base, w.exponent, w.vertex) == (1, 4, 4)
    assert verify_tensor(L, w, bound=1, objects=range(3))


def test_tensor_from_power_recovers_chosen_witness():
    L = complete(builtin_clone("bounded-semilattice"))
    w = L.tensor(1, 3)
    assert tensor_from_power(L, 1, 3, 3, w.projections).i == w.i


# fp categories --------------------------------------------------------------

TWO = {
    "name": "point",
    "objects": ["1"],
    "morphisms": [{"name": "id", "src": "1", "tgt": "1"}],
    "identities": {"1": "id"},
    "compose": [["id", "id", "id"]],
    "powers": [{"base": "1", "n": 0, "vertex": "1", "projections": []},
               {"base": "1", "n": 2, "vertex": "1", "projections": ["id", "id"]}],
}


@pytest.mark.parametrize("C", [FinSetCategory(3, 9), OppositeFinSet(3), TerminalCategory(),
                               TableCategory.from_json(json.dumps(TWO))], ids=str)
def test_fp_category_laws(C):
    assert check_fp_category(C, max_power=2)


def test_false_power_in_table_category_caught():
    data = dict(TWO, objects=["0", "1"],
                morphisms=[{"name": "i0", "src": "0", "tgt": "0"}, {"name": "i1", "src": "1", "tgt": "1"},
                           {"name": "z", "src": "0", "tgt": "1"}],
                identities={"0": "i0", "1": "i1"},
                compose=[["i0", "i0", "i0"], ["i1", "i1", "i1"], ["z", "i0", "z"], ["i1", "z", "z"]],
                powers=[{"base": "1", "n": 2, "vertex": "0", "projections": ["z", "z"]}])
    C = TableCategory.from_json(json.dumps(data))
    report = check_fp_category(C)
    assert not report.passed and report.counterexample[0].startswith("power")


def test_missing_power():
    with pytest.raises(PowerMissing):
        FinSetCategory(3).power(3, 2)
    assert not OppositeFinSet(3).has_power(2, 2)


@pytest.mark.parametrize("C", [FinSetCategory(2), FinSetCategory(3), OppositeFinSet(3), TerminalCategory()], ids=str)
def test_VR(C):
    assert check_VR(C)


def test_R_is_an_fset_category():
    RC = R(FinSetCategory(3, 27))
    assert check_category_laws(RC, objects=[0, 1, 2], max_arity=2)
    assert verify_tensor(RC, RC.tensor(2, 1), bound=1, objects=[1, 2])


@pytest.mark.parametrize("name", ["initial", "pointed", "semilattice", "z2-set", "idempotent-set"])
def test_RV(name):
    assert compare_RV(complete(builtin_clone(name)), max_arity=2)


def test_RV_rejects_bad_witnesses():
    L = complete(builtin_clone("pointed"))
    C = L.clone

    def broken(X, n):
        w = L.tensor(X, n)
        if X * n < 2:
            return w
        return TensorWitness(X, n, X * n, tuple(C.proj(X * n, 0) for _ in range(X * n)), w.projections)

    assert not compare_RV(L, objects=[0, 1, 2], max_arity=2, witnesses=broken)


def test_V_of_completion_has_powers():
    L = complete(builtin_clone("semilattice"))
    VL = V(L, objects=[0, 1, 2, 3])
    P = VL.power(1, 3)
    assert P.vertex == 3 and len(P.projections) == 3
    assert len(VL.mor(2, 1)) == 3
