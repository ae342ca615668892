import io
import json

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DATA, run_cli
from lawvere.cli.build import build_clone, build_functor, build_morphism
from lawvere.cli.dsl import (
    Builtin,
    Free,
    Normalizer,
    TheoryPresentation,
    parse_functor,
    parse_morphism,
    parse_term_text,
    parse_theory,
    print_term,
    print_theory,
)
from lawvere.cli.main import main
from lawvere.errors import ArityError, TheorySyntaxError, UnknownSemantics
from lawvere.library import InitialClone
from lawvere.terms import App, Var

SCHEMA = json.loads((DATA.parent / "report_schema.json").read_text())


def cli(*args):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(args), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def in_data(monkeypatch):
    monkeypatch.chdir(DATA)


# parsing ---------------------------------------------------------------------

def test_parse_semilattice_file():
    P = parse_theory((DATA / "SL.thy").read_text())
    assert P.name == "SL" and P.operations == (("meet", 2),)
    assert len(P.equations) == 3 and P.semantics == Builtin("semilattice")
    lhs, rhs = P.equations[0]
    assert lhs == App("meet", (Var(0), Var(0))) and rhs == Var(0)


def test_free_theory_without_operations_is_initial():
    built = build_clone(parse_theory("theory E { semantics free; }"))
    assert isinstance(built.clone, InitialClone) and not built.warnings


def test_free_semantics_with_equations_warns():
    built = build_clone(parse_theory("theory M { op f:2; eq f(x1,x1) = x1; semantics free; }"))
    assert built.warnings and "not quotiented" in built.warnings[0]


def test_arity_error_has_position():
    with pytest.raises(ArityError) as exc:
        parse_theory("theory T {\n  op f:2;\n  eq f(x1) = x1;\n}")
    assert (exc.value.line, exc.value.column) == (3, 6)
    assert str(exc.value).startswith("3:6:")


@pytest.mark.parametrize("text", ["theory { }", "theory T { op f 2; }", "theory T { op f:2 }", "theory T { eq x1 = ; }",
                                  "theory T { op f:2; } trailing", "theory T $"])
def test_syntax_errors(text):
    with pytest.raises(TheorySyntaxError):
        parse_theory(text)


def test_unknown_semantics():
    with pytest.raises(UnknownSemantics):
        build_clone(parse_theory("theory T { semantics builtin nothing; }"))
    with pytest.raises(UnknownSemantics):
        parse_functor("wobbly 3")


def test_term_text_round_trip():
    t = parse_term_text("f(x1, g(x3), c)", {"f": 3, "g": 1, "c": 0})
    assert print_term(t) == "f(x1,g(x3),c)"


OPS = [("f", 2), ("g", 1), ("c", 0), ("meet", 2)]


def terms(ops):
    leaves = [st.integers(0, 2).map(Var)] + [st.just(App(o, ())) for o, a in ops if a == 0]
    inner = [o for o in ops if o[1] > 0]

    def extend(sub):
        return st.one_of([st.tuples(*[sub] * a).map(lambda args, o=o: App(o, args)) for o, a in inner])

    return st.recursive(st.one_of(leaves), extend, max_leaves=6) if inner else st.one_of(leaves)


@st.composite
def presentations(draw):
    ops = draw(st.lists(st.sampled_from(OPS), unique=True, max_size=4))
    eqs = draw(st.lists(st.tuples(terms(ops), terms(ops)), max_size=3))
    sem = draw(st.sampled_from([Free(), Builtin("pointed"), Normalizer("aci"), Normalizer(command="norm.py")]))
    name = draw(st.sampled_from(["T", "Magma", "SL_2"]))
    return TheoryPresentation(name, tuple(ops), tuple(eqs), sem)


@given(presentations())
def test_print_then_parse_is_identity(P):
    Q = parse_theory(print_theory(P))
    assert (Q.name, Q.operations, Q.equations) == (P.name, P.operations, P.equations)
    assert print_theory(Q) == print_theory(P)


def test_table_theory_round_trip():
    P = parse_theory((DATA / "pointed_tables.thy").read_text())
    assert parse_theory(print_theory(P)) == P


def test_morphism_and_functor_files():
    M = parse_morphism((DATA / "sl_bsl.map").read_text())
    assert (M.name, M.source, M.target) == ("include", "SL", "BSL")
    S = build_clone(parse_theory((DATA / "SL.thy").read_text()))
    T = build_clone(parse_theory((DATA / "BSL.thy").read_text()))
    F = build_morphism(M, S, T)
    assert F(2, S.clone.hom(2)[0]) in T.clone.hom(2)
    A = build_functor(parse_functor((DATA / "y2.fun").read_text()))
    assert [len(A(n)) for n in range(4)] == [0, 1, 4, 9]


# commands --------------------------------------------------------------------

def test_check_results():
    code, out, _ = cli("check", "SL.thy")
    assert code == 0 and out.startswith("PASS clone laws SL")
    code, out, _ = cli("check", "corrupted.thy")
    assert code == 1 and "projection" in out


def test_external_normalizer_agrees_with_builtin():
    a = json.loads(cli("--json", "check", "SL_external.thy")[1])
    b = json.loads(cli("--json", "check", "SL.thy")[1])
    assert a["passed"] and a["report"]["checked"] == b["report"]["checked"]


def test_homset_and_law():
    code, out, _ = cli("homset", "magma.thy", "-n", "2", "--limit", "4")
    assert code == 0 and out.splitlines()[1:] == ["  x1", "  x2", "  f(x1,x1)", "  f(x1,x2)"]
    code, out, _ = cli("law", "SL.thy", "--objects", "2", "-k", "1", "--limit", "3")
    assert code == 0 and "L_1(2,2): 9" in out


def test_models_and_algebras():
    code, out, _ = cli("models", "BSL.thy", "--carrier", "2")
    assert code == 0 and out.startswith("2 models")
    code, out, _ = cli("algebras", "SL.thy", "--carrier", "3")
    assert code == 0 and out.startswith("9 algebras")
    payload = json.loads(cli("--json", "compare-alg-mod", "z2.thy", "--carrier", "3")[1])
    assert payload["bijection"] and payload["algebras"] == payload["models"] == 4


def test_free_command():
    payload = json.loads(cli("--json", "free", "--source", "empty.thy", "--target", "SL.thy",
                             "--morphism", "free_sl.map", "--carrier", "2", "--adjunction-bound", "2")[1])
    assert payload["passed"] and payload["carrier"] == 3 and payload["unit"] == [0, 1]
    assert payload["adjunction"]["passed"]
    payload = json.loads(cli("--json", "free", "--source", "empty.thy", "--target", "pointed.thy",
                             "--morphism", "free_pointed.map", "--carrier", "2")[1])
    assert payload["carrier"] == 3


def test_tensor_command():
    code, out, _ = cli("tensor", "-n", "2", "y2.fun", "y3.fun")
    assert code == 0 and "(2) has 64 elements" in out


ALL = [
    (0, "check", "SL.thy"),
    (1, "check", "corrupted.thy"),
    (2, "check", "missing.thy"),
    (0, "homset", "magma.thy", "-n", "1", "--limit", "3"),
    (0, "law", "SL.thy", "--objects", "1,2", "-k", "1", "--limit", "2"),
    (0, "models", "pointed.thy", "--carrier", "2"),
    (0, "algebras", "idempotent.thy", "--carrier", "2"),
    (0, "compare-alg-mod", "z2.thy", "--carrier", "2"),
    (0, "free", "--source", "SL.thy", "--target", "BSL.thy", "--morphism", "sl_bsl.map", "--carrier", "2"),
    (0, "tensor", "-n", "2", "pointed.fun", "semilattice.fun"),
]


@pytest.mark.parametrize("row", ALL, ids=lambda a: a[1])
def test_json_reports_match_schema(row):
    expected, *args = row
    code, out, _ = cli("--json", *args)
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    assert payload["command"] == args[0]
    assert code == expected and payload["passed"] == (expected == 0)


def test_json_flag_position_is_free():
    before = cli("--json", "check", "pointed.thy")
    after = cli("check", "pointed.thy", "--json")
    assert before == after and json.loads(before[1])["passed"]


def test_exit_codes():
    assert cli("check", "corrupted.thy")[0] == 1
    code, out, err = cli("check", "missing.thy")
    assert code == 2 and not out and "cannot read" in err
    assert cli("frobnicate")[0] == 2
    assert cli("homset", "SL.thy")[0] == 2


def test_bad_file_is_input_error(tmp_path):
    bad = tmp_path / "bad.thy"
    bad.write_text("theory T { op f:2; eq f(x1) = x1; }")
    code, out, err = cli("--json", "check", str(bad))
    payload = json.loads(out)
    assert code == 2 and payload["kind"] == "ArityError"
    jsonschema.validate(payload, SCHEMA)


def test_warnings_go_to_stderr(tmp_path):
    f = tmp_path / "m.thy"
    f.write_text("theory M { op c:0; eq c = c; semantics free; }")
    code, out, err = cli("check", str(f), "--max-arity", "1")
    assert code == 0 and err.startswith("warning: theory M") and "warning" not in out
    payload = json.loads(cli("--json", "check", str(f), "--max-arity", "1")[1])
    assert payload["warnings"]


def test_installed_entry_point():
    code, out, err = run_cli("check", "pointed.thy")
    assert code == 0 and out.startswith(b"PASS") and not err
    assert run_cli("check", "corrupted.thy")[0] == 1
    assert run_cli("--json", "check", "missing.thy")[0] == 2


def test_backend_does_not_change_output():
    a = run_cli("--json", "algebras", "SL.thy", "--carrier", "3", env={"LAWVERE_NUMBA": "0"})
    b = run_cli("--json", "algebras", "SL.thy", "--carrier", "3", env={"LAWVERE_NUMBA": "1"})
    assert a == b


def test_two_element_semilattices():
    code, out, _ = cli("algebras", "SL.thy", "--carrier", "2")
    assert code == 0 and out.splitlines()[0] == "2 algebras"
    payload = json.loads(cli("--json", "compare-alg-mod", "SL.thy", "--carrier", "2")[1])
    assert {k: payload[k] for k in ("algebras", "models", "bijection")} == {"algebras": 2, "models": 2, "bijection": True}
