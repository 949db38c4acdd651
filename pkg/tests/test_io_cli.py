import json

import pytest

from conftest import GOLDEN, same_by_labels
from respos.cli import main
from respos.corpus import BUILTIN_NAMES, builtin
from respos.errors import SchemaError, SemanticError
from respos.io import (algebra_document, algebra_from_document, document_of, dumps, load,
                       parse_json, save_structure, system_document, system_from_document)
from respos.structure import compose


def golden_text(name):
    return (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_match_golden_bytes(name):
    assert dumps(document_of(builtin(name))) == golden_text(name)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_load_save_is_byte_stable(name, tmp_path):
    obj = load(GOLDEN / f"{name}.json")
    names = None
    if isinstance(obj, tuple):
        obj, names = obj
    assert dumps(document_of(obj, names)) == golden_text(name)


def test_loaded_system_composes_to_same_structure():
    S, _ = system_from_document(json.loads(golden_text("fig3-system")))
    assert same_by_labels(compose(S), builtin("fig2"))


def test_full_order_mode_and_derived_residuals():
    doc = json.loads(golden_text("pz2"))
    del doc["ld"], doc["rd"]
    doc["order_mode"] = "full"
    doc["order"] = [["⊥", "1"], ["⊥", "0"], ["⊥", "⊤"], ["1", "⊤"], ["0", "⊤"]]
    A = algebra_from_document(doc)
    assert A.tables_equal(builtin("pz2"))


def test_declared_residual_mismatch_names_the_cell():
    doc = json.loads(golden_text("pz2"))
    doc["ld"][1][2] = "⊤"
    with pytest.raises(SemanticError) as e:
        algebra_from_document(doc)
    assert "$.ld[1][2]" in str(e.value)


def test_schema_errors_carry_a_path():
    doc = json.loads(golden_text("pz2"))
    doc["mul"][0][0] = "nope"
    with pytest.raises(SchemaError) as e:
        algebra_from_document(doc)
    assert e.value.path == "$.mul[0][0]"
    with pytest.raises(SchemaError):
        algebra_from_document({**doc, "extra": 1})
    with pytest.raises(SchemaError):
        parse_json("{", "x.json")


def test_non_residuated_table_is_semantic_error():
    doc = json.loads(golden_text("pz2"))
    del doc["ld"], doc["rd"]
    doc["mul"][3][3] = "⊥"
    with pytest.raises(SemanticError):
        algebra_from_document(doc)


def test_save_structure(tmp_path):
    target = tmp_path / "chain4.json"
    save_structure(builtin("chain4"), target)
    assert target.read_text(encoding="utf-8") == golden_text("chain4")


def test_system_document_lists_strict_edges_only():
    doc = system_document(builtin("fig3-system"))
    assert list(doc["phi"]) == ["1->p"]


# command line


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def golden_path(name):
    return str(GOLDEN / f"{name}.json")


def test_cli_check_defaults(capsys):
    code, out, _ = run(capsys, "check", golden_path("pz2"))
    assert code == 1
    assert "steady: holds" in out
    assert "integrally-closed: FAILS" in out


def test_cli_check_json(capsys):
    code, out, _ = run(capsys, "check", golden_path("fig2"), "--props", "steady", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["results"][0]["status"] == "fails"
    assert doc["exit"] == 1


def test_cli_check_precondition(capsys):
    code, out, _ = run(capsys, "check", golden_path("fig1"), "--props", "integrally-closed")
    assert code == 3 and "precondition" in out


def test_cli_input_errors(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    assert run(capsys, "check", str(bad))[0] == 2
    assert run(capsys, "check", golden_path("pz2"), "--props", "nope")[0] == 2
    assert run(capsys, "example", "nope")[0] == 2
    assert run(capsys, "enumerate", "--size", "6", "--count")[0] == 2


def test_cli_residuals_witness(capsys, tmp_path):
    doc = json.loads(golden_text("pz2"))
    doc["mul"][3][3] = "⊥"
    f = tmp_path / "broken.json"
    f.write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")
    code, out, _ = run(capsys, "residuals", str(f))
    assert code == 1 and "witness" in out
    code, out, _ = run(capsys, "residuals", golden_path("pz2"))
    assert code == 0 and json.loads(out)["ld"] == json.loads(golden_text("pz2"))["ld"]


def test_cli_decompose_then_compose(capsys, tmp_path):
    sys_file = tmp_path / "sys.json"
    assert run(capsys, "decompose", golden_path("fig2"), "--index", "1,p", "-o", str(sys_file))[0] == 0
    code, out, err = run(capsys, "compose", str(sys_file))
    assert code == 0
    assert same_by_labels(algebra_from_document(json.loads(out)), builtin("fig2"))
    assert "S2: holds" in err


def test_cli_roundtrip(capsys):
    assert run(capsys, "roundtrip", golden_path("chain4"))[0] == 0
    assert run(capsys, "roundtrip", golden_path("fig2"), "--index", "idp")[0] == 3
    assert run(capsys, "roundtrip", golden_path("fig2"), "--index", "zz")[0] == 2


def test_cli_compose_rejects_structure(capsys):
    assert run(capsys, "compose", golden_path("pz2"))[0] == 2


def test_cli_enumerate_count(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--size", "3", "--count")
    assert code == 0 and out.strip() == "16"
    code, out, _ = run(capsys, "enumerate", "--size", "2", "--emit", str(tmp_path / "out"))
    assert out.strip() == "3" and len(list((tmp_path / "out").iterdir())) == 3
    code, out, _ = run(capsys, "enumerate", "--size", "3", "--poset", golden_path("fig1"), "--count")
    assert code == 2


def test_cli_example(capsys):
    code, out, _ = run(capsys, "example", "pz2")
    assert code == 0 and out == golden_text("pz2")


def test_cli_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--suite", "balanced", "--size", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["results"][0]["counterexamples"] == []
    assert run(capsys, "oracle", "--suite", "nope", "--size", "3")[0] == 2
