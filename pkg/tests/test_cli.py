"""Command surface: exit codes, report structure, byte determinism,
and witness replay, all driven against the shipped demo workspace."""

import json
import pathlib

import pytest

from proshape.cli import _build_parser, main

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
DEMO = str(FIXTURES / "demo.ws")


def run(capsys, *argv):
  code = main(list(argv))
  return code, capsys.readouterr().out


def run_json(capsys, *argv):
  code, out = run(capsys, *argv, "--json")
  return code, json.loads(out)


def test_validate_exits_zero(capsys):
  code, report = run_json(capsys, "validate", DEMO)
  assert code == 0
  assert report["schema"] == "proshape-report/1"
  assert "SH" in report["result"]["pairs"]


def test_equivalent_is_reflexive(capsys):
  code, report = run_json(capsys, "equivalent", DEMO, "f", "f")
  assert code == 0
  assert report["verdict"]["outcome"] == "holds"
  assert report["verdict"]["witness"]["stages"]


def test_is_iso_holds_with_triangle_witness(capsys):
  code, report = run_json(capsys, "is-iso", DEMO, "e")
  assert code == 0
  entries = report["verdict"]["witness"]["entries"]
  assert all("h_table" in e and "j_threshold" in e for e in entries)


def test_is_iso_refuses_the_arrow_morphism(capsys):
  code, report = run_json(capsys, "is-iso", DEMO, "arrow_level")
  assert code == 1
  ce = report["verdict"]["counterexample"]
  assert ce["lambda"] == "pt"
  assert ce["h_candidates"] == []


def test_check_jmorphism_classifies(capsys):
  code, report = run_json(capsys, "check-jmorphism", DEMO, "f")
  assert code == 0
  got = report["result"]["classification"]
  assert got["valid"] == "holds" and got["level"] == "fails"


def test_compose_emits_the_composite(capsys):
  code, report = run_json(capsys, "compose", DEMO, "g", "f")
  assert code == 0
  assert report["result"]["composite"]["name"] == "g.f"


def test_simplify_stays_equivalent(capsys):
  code, report = run_json(capsys, "simplify", DEMO, "f")
  assert code == 0
  assert report["result"]["simplified"]["index"]["entries"] == {
      "lo": "hi", "hi": "hi"}


def test_reindex_reports_the_level_square(capsys):
  code, report = run_json(capsys, "reindex", DEMO, "f")
  assert code == 0
  assert report["verdict"]["outcome"] == "holds"
  assert report["result"]["level"]["source"] == "X'"


def test_hom_classes_counts(capsys):
  code, report = run_json(capsys, "hom-classes", DEMO, "RP", "RQ", "PT")
  assert code == 0
  assert report["result"]["count"] == 1


def test_transfer_moves_the_enrichment(capsys):
  code, report = run_json(capsys, "transfer", DEMO, "t2", "phi")
  assert code == 0
  assert report["result"]["transferred"]["j"]["kind"] == "product"


def test_collapse_slices_at_the_top(capsys):
  code, report = run_json(capsys, "collapse", DEMO, "f")
  assert code == 0
  assert report["result"]["collapsed"]["j"]["elements"] == ["*"]


def test_shape_eq_finds_the_inverse_pair(capsys):
  code, report = run_json(capsys, "shape-eq", DEMO, "P", "Q")
  assert code == 0
  w = report["verdict"]["witness"]
  assert w["forward"]["families"]["*"]["entries"]["*"]["value"] == "s"
  assert w["backward"]["families"]["*"]["entries"]["*"]["value"] == "t"


def test_expand_check_designated_and_alternate(capsys):
  code, report = run_json(capsys, "expand-check", DEMO, "P")
  assert code == 0 and report["verdict"]["outcome"] == "holds"
  code, report = run_json(capsys, "expand-check", DEMO, "P", "--alt", "1")
  assert code == 0 and report["verdict"]["outcome"] == "holds"
  code, report = run_json(capsys, "expand-check", DEMO, "P", "--alt", "2")
  assert code == 1 and "out of range" in report["error"]["message"]


def test_lift_glues_the_bundle(capsys):
  code, report = run_json(capsys, "lift", DEMO, "H")
  assert code == 0
  glued = report["result"]["glued"]
  assert glued["source"] == "X" and glued["target"] == "RQ"


def test_tower_iso_accepts_named_and_literal_gamma(capsys):
  code, report = run_json(capsys, "tower-iso", DEMO, "t2", "--gamma", "gid")
  assert code == 0 and report["verdict"]["witness"]["periodic"]
  code2, report2 = run_json(capsys, "tower-iso", DEMO, "t2",
                            "--gamma", "affine(1,0)")
  assert code2 == 0
  assert report2["verdict"] == report["verdict"]


def test_human_output_is_the_default(capsys):
  code, out = run(capsys, "is-iso", DEMO, "e")
  assert code == 0
  assert out.startswith("command: is-iso\n")
  assert "verdict: holds" in out


def test_reports_are_byte_identical_across_runs(capsys):
  for argv in (("validate", DEMO), ("is-iso", DEMO, "e"),
               ("shape-eq", DEMO, "P", "Q"), ("reindex", DEMO, "f")):
    _, first = run(capsys, *argv, "--json")
    _, second = run(capsys, *argv, "--json")
    assert first == second


def test_replay_verifies_a_stored_report(capsys, tmp_path):
  for argv in (("is-iso", DEMO, "e"), ("shape-eq", DEMO, "P", "Q"),
               ("compose", DEMO, "g", "f")):
    _, out = run(capsys, *argv, "--json")
    stored = tmp_path / "report.json"
    stored.write_text(out)
    code, report = run_json(capsys, *argv, "--replay", str(stored))
    assert code == 0, report
    assert report["replay"]["status"] == "verified"


def test_replay_flags_a_tampered_witness(capsys, tmp_path):
  _, out = run(capsys, "shape-eq", DEMO, "P", "Q", "--json")
  doc = json.loads(out)
  doc["verdict"]["witness"]["forward"]["families"]["*"]["entries"]["*"][
      "value"] = "iP"
  stored = tmp_path / "tampered.json"
  stored.write_text(json.dumps(doc))
  code, report = run_json(capsys, "shape-eq", DEMO, "P", "Q",
                          "--replay", str(stored))
  assert code == 1
  assert report["replay"] == {"status": "mismatch", "field": "verdict"}


def test_parse_errors_carry_positions(capsys, tmp_path):
  bad = tmp_path / "bad.ws"
  bad.write_text("poset P { elements: a ? }")
  code, report = run_json(capsys, "validate", str(bad))
  assert code == 1
  assert "line 1, column 23" in report["error"]["message"]


def test_unknown_names_exit_one(capsys):
  code, report = run_json(capsys, "check-jmorphism", DEMO, "nosuch")
  assert code == 1
  assert report["error"]["kind"] == "WorkspaceError"


def test_budget_exhaustion_is_an_error(capsys):
  code, report = run_json(capsys, "hom-classes", DEMO, "X", "X", "J2",
                          "--budget", "1")
  assert code == 1
  assert "budget" in report["error"]["message"]


def test_horizon_default_comes_from_the_environment(monkeypatch):
  monkeypatch.setenv("PROSHAPE_HORIZON", "7")
  args = _build_parser().parse_args(["validate", DEMO])
  assert args.horizon == 7
  monkeypatch.delenv("PROSHAPE_HORIZON")
  args = _build_parser().parse_args(["validate", DEMO])
  assert args.horizon == 64


def test_arguments_echo_into_the_report(capsys):
  _, report = run_json(capsys, "equivalent", DEMO, "f", "g")
  assert report["arguments"] == {"a": "f", "b": "g"}
