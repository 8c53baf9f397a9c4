import json
import subprocess
import sys

import pytest

from esterel_causality.cli import (
    CORPUS_DIR, EXIT_CONSTRUCTIVE, EXIT_INPUT_ERROR, EXIT_NON_DETERMINISTIC, EXIT_NON_REACTIVE,
    EXIT_NOT_CONSTRUCTIVE, EXIT_RESOURCE, SCHEMA, AnalysisReport, analyze, format_text, main,
    run_corpus,
)

from conftest import CORPUS, source
from reference_models import P6_DERIVATION_RULES


def est(name):
    return str(CORPUS_DIR / f"{name}.est")


@pytest.mark.parametrize("name,code", [
    ("P0", EXIT_CONSTRUCTIVE), ("P1", EXIT_NON_DETERMINISTIC), ("P2", EXIT_NON_REACTIVE),
    ("P3", EXIT_NOT_CONSTRUCTIVE), ("P4", EXIT_NOT_CONSTRUCTIVE), ("P5", EXIT_NOT_CONSTRUCTIVE),
    ("P6", EXIT_CONSTRUCTIVE), ("L1", EXIT_CONSTRUCTIVE),
])
def test_exit_codes(name, code, capsys):
    assert main(["analyze", est(name)]) == code
    capsys.readouterr()


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.est"
    bad.write_text("present s then\n")
    assert main(["analyze", str(bad)]) == EXIT_INPUT_ERROR
    assert "error: 2:1:" in capsys.readouterr().err
    bad.write_text("input i; emit i")
    assert main(["analyze", str(bad)]) == EXIT_INPUT_ERROR
    assert main(["analyze", str(tmp_path / "missing.est")]) == EXIT_INPUT_ERROR
    assert main(["analyze", est("P0"), "--eval", "k=+"]) == EXIT_INPUT_ERROR


def test_resource_limit(capsys):
    assert main(["analyze", est("P4"), "--max-space", "1"]) == EXIT_RESOURCE
    assert "resource limit" in capsys.readouterr().err


def test_json_report_round_trip(capsys):
    main(["analyze", est("P0"), "--format", "json", "--proofs"])
    text = capsys.readouterr().out
    data = json.loads(text)
    assert data["schema"] == SCHEMA
    rep = AnalysisReport.from_json(text)
    assert rep.to_dict() == data
    assert rep.exit_code == EXIT_CONSTRUCTIVE
    assert {"parse", "ground", "models", "proofs", "theorems"} <= set(rep.timing)


def test_text_sections(capsys):
    main(["analyze", est("P6"), "--models", "--proofs"])
    out = capsys.readouterr().out
    heads = [line for line in out.splitlines() if line and not line.startswith(" ")]
    assert heads == ["HEADER", "LOGICAL", "MODELS", "CONSTRUCTIVE", "PROOFS", "THEOREMS"]
    assert "nothing || nothing term[∅]   [residual]" in out
    assert "VIOLATED" not in out


def test_text_without_optional_sections():
    out = format_text(analyze(source("P1")))
    assert "MODELS" not in out and "PROOFS" not in out
    assert "status: NonDeterministic" in out


def test_collapsed_flag_flips_p6(capsys):
    assert main(["analyze", est("P6")]) == EXIT_CONSTRUCTIVE
    assert main(["analyze", est("P6"), "--collapsed-emission"]) == EXIT_NOT_CONSTRUCTIVE
    out = capsys.readouterr().out
    assert "mode: collapsed-emission" in out


def test_proof_rules_in_report():
    rep = analyze(source("P6"), proofs=True)
    [ob] = [o for o in rep.constructive["obligations"] if o["obligation"] == "o"]
    assert ob["target"] == "nothing || nothing"

    def rules(d):
        return ([d["rule"]] if d["rule"] else []) + [r for c in d["children"] for r in rules(c)]

    trans_proof = next(p for p in ob["proofs"] if "-->" in p["root"])
    assert sorted(rules(trans_proof)) == sorted(P6_DERIVATION_RULES)


def test_eval_restriction():
    rep = analyze(source("P0"), evaluation="i=-")
    assert [pe["evaluation"] for pe in rep.logical["per_evaluation"]] == ["{i-}"]
    assert {o["evaluation"] for o in rep.constructive["obligations"]} == {"{i-}"}


@pytest.mark.parametrize("collapsed", [False, True])
def test_corpus_matches_sidecars(collapsed):
    rows = run_corpus(CORPUS_DIR, collapsed=collapsed)
    assert [r["name"] for r in rows] == CORPUS
    assert all(r["expected"] for r in rows), rows
    assert all(r["theorems"] == "ok" for r in rows)


def test_corpus_command(tmp_path, capsys):
    assert main(["corpus"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == ["name", "status", "models", "constructive", "theorems",
                                    "expected", "time"]
    assert len(lines) == 1 + len(CORPUS)
    assert main(["corpus", str(tmp_path), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"schema": SCHEMA, "rows": []}


def test_corpus_reports_bad_files(tmp_path, capsys):
    (tmp_path / "a.est").write_text("emit")
    (tmp_path / "b.est").write_text(source("P0"))
    assert main(["corpus", str(tmp_path), "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert [r["exit"] for r in rows] == [EXIT_INPUT_ERROR, EXIT_CONSTRUCTIVE]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "esterel_causality", "analyze", est("P2")],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_NON_REACTIVE
    assert "NonReactive" in proc.stdout
