"""JSON documents and the command line."""

import io
import json

import pytest

from ainfty.cli import run
from ainfty.dga import cohomology, validate
from ainfty.fields import GF
from ainfty.io import InputError, bundled, bundled_path, dumps, parse_algebra, serialize

E1 = bundled_path("e1")
DEG0 = bundled_path("degree0")
ACYC = bundled_path("acyclic")
QUIVER = bundled_path("quiver4")


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


# -- documents ----------------------------------------------------------------------


def test_e1_document_expands():
    A = parse_algebra(E1)
    assert A.dim == 1 + 4 + 16 + 64
    assert validate(A) == []


def test_degree0_document():
    A = parse_algebra(DEG0)
    T = cohomology(A)
    assert T.homology.dim == A.dim


def test_truncation_one_document():
    doc = {
        "field": "Q",
        "free": {
            "generators": [{"name": g, "degree": 1} for g in "abuv"],
            "d": {"u": {"ab": 1}},
            "truncation": 1,
        },
    }
    A = parse_algebra(doc)
    S = A.space
    assert all(S.degrees[k] <= 0 or (i == A.unit or j == A.unit) for (i, j), v in A.product.values.items() for k in v)
    assert A.differential.is_zero()
    assert validate(A) == []


@pytest.mark.parametrize("name", ["e1", "degree0", "acyclic", "quiver4"])
def test_roundtrip(name):
    A = bundled(name)
    B = parse_algebra(json.loads(dumps(A, name)))
    assert B == A
    assert serialize(B, name) == serialize(A, name)


def test_field_override():
    A = parse_algebra(E1, "Fp:2")
    assert A.field == GF(2)
    assert bundled("e1", GF(3)).field == GF(3)


def test_syntax_error_has_line():
    with pytest.raises(InputError) as e:
        parse_algebra('{"field": "Q",\n "basis": [\n  {"name": "x" "degree": 0}]}')
    assert e.value.line == 3


def test_unknown_name_has_line():
    text = '{"field": "Q",\n "basis": [{"name": "x", "degree": 0}],\n "differential": {"y": {"x": 1}}}'
    with pytest.raises(InputError) as e:
        parse_algebra(text)
    assert e.value.line == 3 and "'y'" in str(e.value)


def test_degree_mismatch():
    doc = {"field": "Q", "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}], "differential": {"x": {"y": 1}}}
    with pytest.raises(InputError, match="degree mismatch"):
        parse_algebra(doc)


def test_schema_violation():
    with pytest.raises(InputError, match="schema"):
        parse_algebra({"field": "Q"})
    with pytest.raises(InputError, match="schema"):
        parse_algebra({"field": "R", "basis": []})


def test_bad_prime():
    with pytest.raises(InputError):
        parse_algebra({"field": "Fp:4", "basis": [{"name": "x", "degree": 0}]})


def test_not_a_dga():
    doc = {
        "field": "Q",
        "basis": [{"name": "x", "degree": 0}, {"name": "y", "degree": 1}],
        "differential": {"x": {"y": 1}},
        "product": [["x", "x", {"x": 1}]],
    }
    with pytest.raises(InputError, match="Leibniz"):
        parse_algebra(doc)
    assert parse_algebra(doc, check=False).dim == 2


def test_rational_coefficients():
    doc = {"field": "Q", "basis": [{"name": "x", "degree": 0}], "product": [["x", "x", {"x": "1/2"}]]}
    A = parse_algebra(doc, check=False)
    assert serialize(A)["product"] == [["x", "x", {"x": "1/2"}]]


# -- command line ----------------------------------------------------------------------


def test_cli_validate():
    code, out = cli("validate", E1)
    assert code == 0 and "[pass]" in out


def test_cli_cohomology():
    code, out = cli("cohomology", E1)
    assert code == 0
    assert "h1_0" in out and "h2_1" in out
    code, out = cli("cohomology", "--json", E1)
    data = json.loads(out)
    assert data["passed"]
    assert [data["betti"][k] for k in sorted(data["betti"], key=int)] == [1, 2, 4, 54]


def test_cli_massey_triple():
    code, out = cli("massey", "h1_0", "h1_1", "h1_0", E1)
    assert code == 0
    assert "nonzero" in out
    code, out = cli("massey", "--json", "h1_0", "h1_1", "h1_0", E1)
    data = json.loads(out)
    s = data["set"]
    assert s["quotient_nonzero"] is True
    assert s["indeterminacy"] == ["h2_0"]


def test_cli_massey_options_between():
    code, out = cli("massey", "h1_0", "h1_1", "h1_0", "--field", "Fp:2", E1)
    assert code == 0 and "nonzero" in out


def test_cli_unknown_label():
    code, out = cli("massey", "h9_9", "h1_0", E1)
    assert code == 2 and "unknown class" in out


def test_cli_bad_file():
    code, out = cli("validate", "/nonexistent.json")
    assert code == 2


def test_cli_bad_usage():
    assert cli("frobnicate")[0] == 2
    assert cli("model", "--max-arity", "1", E1)[0] == 2


def test_cli_model():
    code, out = cli("model", "--max-arity", "4", E1)
    assert code == 0 and "FAIL" not in out


def test_cli_oracle():
    code, out = cli("oracle", "--field", "Fp:2", "h1_0", "h1_1", "h1_0", E1)
    assert code == 0
    code, out = cli("oracle", "--json", "--field", "Fp:2", "h1_0", "h1_1", "h1_0", E1)
    data = json.loads(out)
    assert sorted(data["classes"]) == ["h2_0 +h2_1", "h2_1"]
    assert data["coordinates"] == 8


def test_cli_oracle_bound():
    code, out = cli("oracle", "--bound", "2", "--field", "Fp:2", "h1_0", "h1_1", "h1_0", E1)
    assert code == 2


def test_cli_curvature():
    code, out = cli("curvature", "h1_0", "h1_1", "h1_0", E1)
    assert code == 0


def test_cli_isotopy():
    code, out = cli("isotopy", "--max-arity", "3", E1)
    assert code == 0, out


def test_cli_theorem_check():
    code, out = cli("theorem-check", "--field", "Fp:2", "h1_0", "h1_1", "h1_0", E1)
    assert code == 0, out


def test_cli_theorem_check_undefined():
    code, out = cli("theorem-check", "h1_0", "h1_0", "h1_0", E1)
    assert code == 1
    assert "no defining system" in out


def test_cli_theorem_check_quiver():
    # h1_0, h2_0, h2_1, h1_1 are the classes of a11, a22, a33, a44
    code, out = cli("theorem-check", "--json", "h1_0", "h2_0", "h2_1", "h1_1", QUIVER)
    data = json.loads(out)
    assert code == 0 and data["passed"], out
