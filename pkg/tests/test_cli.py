import io
import json

import pytest

from crtrans.cli import SCHEMA, main

POWER_DOC = """\
T2 = map(F = z, G = w^2)
M2 = exp_model(2)
M1 = exp_model(1)
checkmap T2 : M2 -> M1
"""


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, argv, stdin=None, monkeypatch=None):
    code, out, err = run(capsys, argv, stdin, monkeypatch)
    return code, json.loads(out), err


def test_classify_blowup_from_stdin(capsys, monkeypatch):
    code, rep, err = run_json(
        capsys, ["classify"], stdin="M = blowup(2,3)\nclassify M\n", monkeypatch=monkeypatch
    )
    assert code == 0
    assert rep["schema"] == SCHEMA
    assert rep["command"] == "classify"
    assert rep["degree"] == 10 and rep["convention"] == "2i"
    (r,) = rep["results"]
    assert r["name"] == "M"
    assert r["classification"]["kind"] == "infinite_type"
    assert r["classification"]["m"] == 2
    assert r["validate"]["status"] == "certified_true"
    assert r["class_cm"]["status"] == "certified_true"
    assert "classify M: infinite_type, m = 2" in err


def test_classify_defaults_to_all_declared_hypersurfaces(capsys, monkeypatch):
    code, rep, _ = run_json(
        capsys,
        ["classify"],
        stdin="A = heisenberg(1)\nB = exp_model(3)\n",
        monkeypatch=monkeypatch,
    )
    assert code == 0
    assert [r["name"] for r in rep["results"]] == ["A", "B"]
    assert rep["results"][0]["classification"]["kind"] == "finite_type"
    assert rep["results"][1]["classification"]["m"] == 1


def test_check_map_power_document(capsys, monkeypatch, tmp_path):
    doc = tmp_path / "power.doc"
    doc.write_text(POWER_DOC)
    code, rep, err = run_json(capsys, ["check-map", "--degree", "12", str(doc)])
    assert code == 0
    (r,) = rep["results"]
    assert r["sends_into"]["status"] == "certified_true"
    assert r["transversal_order"]["value"] == 2
    assert r["normal_unit_reality"]["status"] == "certified_true"
    assert r["normal_unit_reality"]["witness"] == {"order": 2, "value": "1"}
    assert r["order_bound"]["status"] == "certified_true"
    assert r["jacobian_nonzero"]["status"] == "certified_true"
    assert r["unit_scale_law"] is None  # source and target differ
    assert "trord 2" in err


def test_check_map_negative_control_is_reported_not_errored(capsys, monkeypatch):
    doc = "M2 = exp_model(2)\ncheckmap map(F = 2*z, G = w) : M2 -> M2\n"
    code, rep, _ = run_json(capsys, ["check-map"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0
    (r,) = rep["results"]
    assert r["sends_into"]["status"] == "certified_false"
    assert r["sends_into"]["witness"] == {"index": [1, 1, 1], "value": "-3/2i"}
    assert rep["errors"] == []


def test_prolong_document(capsys, monkeypatch):
    doc = "A = z2*chi1 + z1^2\nb = z1^2*z2\nprolong A, b at (2, 1)\n"
    code, rep, err = run_json(
        capsys, ["prolong", "--degree", "8"], stdin=doc, monkeypatch=monkeypatch
    )
    assert code == 0
    (r,) = rep["results"]
    assert r["pivot"] == [0, 1]
    assert r["values"] == ["2"]
    assert r["matches_direct_expansion"] is True
    assert "matches forward data: True" in err


def test_in_document_degree_and_convention_defaults(capsys, monkeypatch):
    doc = "degree 6\nconvention i\nM = hypersurface(tau + i*z*chi)\nclassify M\n"
    code, rep, _ = run_json(capsys, ["classify"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0
    assert rep["degree"] == 6 and rep["convention"] == "i"
    assert rep["results"][0]["validate"]["status"] == "certified_true"


def test_flag_overrides_document_convention(capsys, monkeypatch):
    # complexifying Im w = |z|^2 gives Q = tau + 2i z chi or tau + i z chi
    # depending on the convention; the flag must beat the directive
    doc = "convention i\nM = graph(z*chi)\nclassify M\n"
    code, rep, _ = run_json(
        capsys, ["classify", "--complexify", "2i"], stdin=doc, monkeypatch=monkeypatch
    )
    assert code == 0
    assert rep["convention"] == "2i"
    assert rep["results"][0]["classification"]["witness"]["value"] == "2i"
    code, rep, _ = run_json(capsys, ["classify"], stdin=doc, monkeypatch=monkeypatch)
    assert rep["convention"] == "i"
    assert rep["results"][0]["classification"]["witness"]["value"] == "i"


def test_verify_runs_clean(capsys):
    code, rep, err = run_json(capsys, ["verify"])
    assert code == 0
    assert rep["falsified"] is False
    assert rep["counts"] == {
        "confirmed": 49,
        "hypothesis_not_certified": 53,
        "falsified": 0,
    }
    assert "0 falsified" in err


def test_verify_single_suite(capsys):
    code, rep, _ = run_json(capsys, ["verify", "--suite", "easystuff"])
    assert code == 0
    assert list(rep["suites"]) == ["easystuff"]
    assert rep["counts"] == {
        "confirmed": 4,
        "hypothesis_not_certified": 1,
        "falsified": 0,
    }


def test_verify_json_file_is_byte_stable(capsys, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--seed", "5", "--json", str(p1)]) == 0
    assert main(["verify", "--seed", "5", "--json", str(p2)]) == 0
    capsys.readouterr()
    assert p1.read_bytes() == p2.read_bytes()


def test_examples_catalog(capsys):
    code, rep, _ = run_json(capsys, ["examples"])
    assert code == 0
    assert len(rep["families"]) == 4
    assert len(rep["map_instances"]) == 16
    assert len(rep["intertwined_instances"]) == 5
    by_id = {r["id"]: r for r in rep["map_instances"]}
    assert by_id["power_map_exp_2"]["sends_into"]["status"] == "certified_true"
    assert by_id["dilation_excluded_exp_2"]["sends_into"]["status"] == "certified_false"
    assert "either graph convention" in by_id["singular_factor_map"]["note"]


def test_print_grammar(capsys):
    code, out, _ = run(capsys, ["print-grammar"])
    assert code == 0
    assert out.startswith("document")
    assert "checkmap" in out and "m_psi" in out


def test_invalid_document_exits_one(capsys, monkeypatch):
    code, out, err = run(capsys, ["classify"], stdin="Q = tau + cow\n", monkeypatch=monkeypatch)
    assert code == 1
    assert out == ""
    assert "undeclared name 'cow'" in err


def test_task_level_error_is_embedded(capsys, monkeypatch):
    # blowup(1, 2) violates 2b > c; the task fails but the report is written
    doc = "M = blowup(1, 2)\nG = heisenberg(1)\nclassify M\nclassify G\n"
    code, out, err = run(capsys, ["classify"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 1
    rep = json.loads(out)
    assert len(rep["errors"]) == 1
    assert rep["errors"][0]["task"] == "classify M"
    assert [r["name"] for r in rep["results"]] == ["G"]


def test_missing_file_exits_two(capsys):
    code, _, err = run(capsys, ["classify", "/no/such/file.doc"])
    assert code == 2
    assert "error" in err


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_document_without_matching_tasks_exits_one(capsys, monkeypatch):
    code, out, _ = run(
        capsys, ["check-map"], stdin="M = heisenberg(1)\n", monkeypatch=monkeypatch
    )
    assert code == 1
    rep = json.loads(out)
    assert rep["errors"][0]["error"] == "document contains no task for this command"


def test_reports_record_input_digest(capsys, monkeypatch):
    doc = "M = heisenberg(1)\nclassify M\n"
    code, rep, _ = run_json(capsys, ["classify"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0
    import hashlib

    assert rep["input_digest"] == hashlib.sha256(doc.encode()).hexdigest()
