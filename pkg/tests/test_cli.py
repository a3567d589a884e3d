"""The command-line driver: dispatch, exit codes, formats, outputs."""

import json
from pathlib import Path

import pytest

from bihomsuper import load_document, run_pipeline
from bihomsuper.cli import main

DATA = Path(__file__).parent / "data"


def run(args):
    return main([str(a) for a in args])


def test_verify_pass_and_exit_zero(capsys):
    assert run(["verify", DATA / "abelian.json"]) == 0
    out = capsys.readouterr().out
    assert "status: pass" in out


def test_verify_ternary_document(capsys):
    assert run(["verify", DATA / "ternary_basic.json"]) == 0
    out = capsys.readouterr().out
    assert "ternary-twisted-jacobi" in out


def test_input_error_exit_two(capsys):
    assert run(["verify", DATA / "bad_parity.json"]) == 2
    assert run(["verify", DATA / "no_such_file.json"]) == 2
    err = capsys.readouterr().err
    assert "input error" in err


def test_machine_format_is_json(capsys):
    assert run(["verify", DATA / "abelian.json", "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["status"] == "pass"
    assert tree["command"] == "verify"
    assert "document" in tree["inputs"]


def test_output_file_holds_machine_report(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    assert run(["verify", DATA / "abelian.json", "--output", out_file]) == 0
    capsys.readouterr()
    tree = json.loads(out_file.read_text())
    assert tree["status"] == "pass"


def test_induce_tau_emits_tensor(capsys):
    assert run(["induce-tau", DATA / "line_action.json", "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["status"] == "pass"
    induced = tree["derived"]["induced"]
    assert induced["bracket3"]  # nonzero induced tensor
    assert induced["format"] == "bihom-algebra/1"


def test_induce_tau_zero_form_passes(tmp_path, capsys):
    # abelian document with tau = 0 row
    doc = json.loads((DATA / "abelian.json").read_text())
    doc["maps"] = {"tau": {"row": ["0", "0"]}}
    p = tmp_path / "abelian_tau.json"
    p.write_text(json.dumps(doc))
    assert run(["induce-tau", p, "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["induced"].get("bracket3", []) == []


def test_check_rb_pass_and_fail(capsys):
    # diag(1,0,5) with weight 1/2 satisfies the binary identity on this fixture
    assert run(["check-rb", DATA / "line_action.json"]) == 0
    capsys.readouterr()
    # diag(2,3,5) fails it for this weight, exit 1
    assert run(["check-rb", DATA / "line_action.json", "--map", "N", "--weight", "2"]) == 1


def test_exit_codes_match_library_verdicts_on_scripted_pipelines(capsys):
    # five scripted pipelines, each compared against the direct library result
    from bihomsuper import (
        RotaBaxterOperator,
        check_rb_transfer_criterion,
        check_tau_conditions,
        is_nijenhuis_3,
        is_rb2,
        verify_bihom_jacobi,
        verify_bihom_skewsymmetry,
    )
    from bihomsuper.cli import _binary_algebra, _ternary_algebra

    # 1. verify on the binary fixture
    doc = load_document(str(DATA / "line_action.json"))
    A = _binary_algebra(doc)
    expect = verify_bihom_skewsymmetry(A).passed and verify_bihom_jacobi(A).passed
    assert (run(["verify", DATA / "line_action.json"]) == 0) is expect

    # 2. induce-tau conditions
    witness = check_tau_conditions(A, doc.forms["tau"])
    assert (run(["induce-tau", DATA / "line_action.json"]) == 0) is witness.satisfied

    # 3. check-rb with the document weight
    op = RotaBaxterOperator(doc.maps["R"], doc.scalars["lambda"])
    assert (run(["check-rb", DATA / "line_action.json"]) == 0) is is_rb2(A, op).passed

    # 4. rb-transfer criterion on the central-extension fixture
    doc2 = load_document(str(DATA / "central_pair.json"))
    A2 = _binary_algebra(doc2)
    op2 = RotaBaxterOperator(doc2.maps["R"], doc2.scalars["lambda"])
    ok, _ = check_rb_transfer_criterion(A2, doc2.forms["tau"], op2)
    assert (run(["rb-transfer", DATA / "central_pair.json"]) == 0) is ok

    # 5. check-nijenhuis on the ternary fixture
    doc3 = load_document(str(DATA / "ternary_basic.json"))
    A3 = _ternary_algebra(doc3)
    expect3 = is_nijenhuis_3(A3, doc3.maps["N"]).passed
    assert (run(["check-nijenhuis", DATA / "ternary_basic.json"]) == 0) is expect3
    capsys.readouterr()


def test_derivations_command_reports_dimension(capsys):
    assert run(["derivations", DATA / "ternary_basic.json", "--s", "0", "--r", "0",
                "--parity", "even", "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["dimension"] == 6
    assert len(tree["derived"]["basis"]) == 6


def test_quasiderivation_command(capsys):
    assert run(["quasiderivation", DATA / "ternary_basic.json", "--map", "D",
                "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["is_quasiderivation"] is True


def test_rb_bracket_and_projection_commands(capsys):
    assert run(["rb-bracket", DATA / "ternary_basic.json", "--map", "R",
                "--weight", "0", "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert "induced" in tree["derived"]
    assert run(["rb-projection-twist", DATA / "ternary_basic.json", "--map", "P",
                "--weight", "0"]) == 0
    capsys.readouterr()


def test_rb_inverse_derivation_command(capsys):
    assert run(["rb-inverse-derivation", DATA / "ternary_basic.json", "--map", "R",
                "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["weight0_operator_and_inverse_derivation"] is True
    capsys.readouterr()


def test_n_brackets_and_trivial_deformation(capsys):
    assert run(["n-brackets", DATA / "ternary_basic.json", "--map", "N",
                "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["first"]["bracket3"]
    assert run(["trivial-deformation", DATA / "ternary_basic.json", "--map", "N",
                "--format", "machine"]) == 0
    tree2 = json.loads(capsys.readouterr().out)
    assert tree2["derived"]["omega1"] == tree["derived"]["first"]


def test_deformation_check_command(capsys):
    assert run([
        "deformation-check", DATA / "ternary_basic.json",
        "--omega1", DATA / "ternary_basic_w1.json",
        "--omega2", DATA / "ternary_basic_w2.json",
    ]) == 0
    capsys.readouterr()
    # missing tensor file is an input error
    assert run(["deformation-check", DATA / "ternary_basic.json",
                "--omega1", DATA / "ternary_basic_w1.json"]) == 2
    capsys.readouterr()


def test_transfer_and_equivalence_commands(capsys):
    assert run(["nijenhuis-transfer", DATA / "line_action.json", "--map", "N"]) == 0
    assert run(["nijenhuis-rb-compat", DATA / "ternary_basic.json", "--map", "N",
                "--rb", "R", "--weight", "0"]) == 0
    assert run(["derivation-nijenhuis-rb", DATA / "ternary_basic.json", "--map", "D"]) == 0
    capsys.readouterr()


def test_twist3_command(tmp_path, capsys):
    # build a twistable document: ternary fixture plus diagonal morphisms
    doc = json.loads((DATA / "ternary_basic.json").read_text())
    doc["maps"]["alpha"] = {"parity": 0, "matrix": [["2", "0", "0"], ["0", "3", "0"], ["0", "0", "1/3"]]}
    doc["maps"]["beta"] = {"parity": 0, "matrix": [["5", "0", "0"], ["0", "7", "0"], ["0", "0", "1/7"]]}
    p = tmp_path / "twistable.json"
    p.write_text(json.dumps(doc))
    assert run(["twist3", p, "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["derived"]["twisted"]["bracket3"]


def test_run_pipeline_unknown_command():
    from bihomsuper import DocumentError

    doc = load_document(str(DATA / "abelian.json"))
    with pytest.raises(DocumentError):
        run_pipeline("no-such-command", doc)


def test_fail_fast_flag_reduces_reported_violations(capsys):
    # identity weight-0 operator fails on this ternary fixture
    code_full = run(["check-rb", DATA / "ternary_basic.json", "--map", "N", "--weight", "0",
                     "--format", "machine"])
    full = json.loads(capsys.readouterr().out)
    code_ff = run(["check-rb", DATA / "ternary_basic.json", "--map", "N", "--weight", "0",
                   "--fail-fast", "--format", "machine"])
    ff = json.loads(capsys.readouterr().out)
    assert code_full == code_ff == 1
    n_full = len(full["checks"][0]["violations"])
    n_ff = len(ff["checks"][0]["violations"])
    assert n_ff == 1 <= n_full


def test_induce_tau_override_flag(tmp_path, capsys):
    # tau hitting the bracket image: refused normally, forced with the flag
    doc = json.loads((DATA / "line_action.json").read_text())
    doc["maps"]["tau"] = {"row": ["0", "1", "0"]}
    p = tmp_path / "bad_tau.json"
    p.write_text(json.dumps(doc))
    assert run(["induce-tau", p]) == 1
    capsys.readouterr()
    assert run(["induce-tau", p, "--override-tau-conditions", "--format", "machine"]) == 0
    tree = json.loads(capsys.readouterr().out)
    assert "induced" in tree["derived"]
    assert any("unverified" in n for n in tree["notes"])
