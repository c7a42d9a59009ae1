import json
import subprocess
import sys

import pytest

from captions import DATA, DC_GRAPH, DC_PREORDER
from choicefit import cli
from choicefit.dataset import parse_csv, write_csv
from choicefit.graph import parse_dot
from choicefit.models import ModelInstance, ModelKind, generate_dataset
from choicefit.relations import RelationClass, enumerate_relations, to_text
from choicefit.simulation import paper_domain


@pytest.fixture
def cohort(tmp_path):
    """Both caption subjects in one file."""
    ds = parse_csv(DATA / "uc_subject.csv") + parse_csv(DATA / "dc_subject.csv")
    path = tmp_path / "cohort.csv"
    write_csv(ds, path)
    return path


@pytest.fixture
def rational(tmp_path):
    rels = enumerate_relations(RelationClass.WEAK_ORDER, 6)[::900]
    ds = [generate_dataset(ModelInstance(ModelKind.RATIONAL, r), paper_domain(), f"r{i}") for i, r in enumerate(rels)]
    path = tmp_path / "rational.csv"
    write_csv(ds, path)
    return path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, cohort):
    code, out, _ = run(capsys, "validate", "--input", cohort)
    info = json.loads(out)
    assert code == 0 and info["subjects"] == 2 and info["observations"] == 100
    assert info["symmetry"] == {"uc_subject": "strong", "dc_subject": "strong"}


def test_validation_failures(capsys, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("subject,menu,choice\n")
    code, _, err = run(capsys, "validate", "--input", empty)
    assert code != 0 and "no observations" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("subject,menu,choice\ns,A;B,A\ns,A;C,\n")
    code, _, err = run(capsys, "validate", "--input", bad, "--forced")
    assert code == 2 and "row 3" in err
    code, _, err = run(capsys, "score", "--input", bad, "--models", "xx")
    assert code == 1 and "unknown model" in err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", 3)
    assert json.loads(out)["counts"] == {
        "incomplete_preorder": 16, "linear_order": 6, "preorder": 29, "strict_partial_order": 19, "weak_order": 13,
    }
    code, out, _ = run(capsys, "enumerate", "--n", 2, "--class", "weak_order", "--list")
    assert out.count("# n=2") == 3


def test_score_table_and_cohort(capsys, cohort, tmp_path):
    code, out, _ = run(capsys, "score", "--input", cohort)
    lines = out.splitlines()
    assert lines[0] == ",".join(cli.SCORE_HEADER)
    assert "uc_subject,uc,5,1,false,true" in lines
    assert "dc_subject,dc,0,1,false,true" in lines
    code, _, err = run(capsys, "score", "--input", cohort, "--out", tmp_path / "s")
    cohort_json = json.loads((tmp_path / "s" / "cohort.json").read_text())
    assert cohort_json["columns"]["dc"]["subjects_score_0"] == 1
    assert cohort_json["columns"]["all"]["subjects_score_le_threshold"] == 2
    assert cohort_json["admissible_relations"]["uc"] == {"strict": 129303, "permissive": 130023}
    assert "scored 2 subjects" in err


def test_rational_cohort_scores_zero(capsys, rational, tmp_path):
    code, _, _ = run(capsys, "score", "--input", rational, "--models", "rc", "--out", tmp_path)
    col = json.loads((tmp_path / "cohort.json").read_text())["columns"]["rc"]
    assert col["subjects_score_0_pct"] == 100.0


def test_recover_and_rationalize(capsys, cohort):
    code, out, _ = run(capsys, "recover", "--input", cohort, "--models", "dc")
    rec = {e["subject"]: e for e in json.loads(out)}
    assert rec["dc_subject"]["models"]["dc"]["relations"] == [to_text(DC_PREORDER)]
    code, out, _ = run(capsys, "rationalize", "--input", cohort, "--model", "dc")
    res = {e["subject"]: e for e in json.loads(out)}
    assert res["dc_subject"]["rationalizable"] and not res["uc_subject"]["rationalizable"]


def test_axioms_csv_and_json(capsys, cohort):
    code, out, _ = run(capsys, "axioms", "--input", cohort)
    assert len(out.splitlines()) == 1 + 2 * 7
    code, out, _ = run(capsys, "axioms", "--input", cohort, "--format", "json", "--no-cap")
    rows = json.loads(out)
    assert {r["axiom"] for r in rows if r["subject"] == "dc_subject" and not r["holds"]} == {
        "BehaviouralDecisiveness", "UpwardConsistency",
    }


def test_separate(capsys, cohort, tmp_path):
    code, out, _ = run(capsys, "separate", "--input", cohort)
    assert "dc_subject,AF,indifferent,dominant_choice,true," in out
    assert "dc_subject,BE,indecisive,dominant_choice,true," in out
    assert "uc_subject,AF,indifferent,eliaz_ok,true,true" in out
    run(capsys, "separate", "--input", cohort, "--out", tmp_path)
    summary = json.loads((tmp_path / "separation_summary.json").read_text())
    assert summary["subjects_with_nontrivial_indifference"] == ["uc_subject", "dc_subject"]


def test_metrics(capsys, cohort, tmp_path):
    code, out, _ = run(capsys, "metrics", "--input", cohort, "--ignore-classification")
    assert out.splitlines()[0].startswith("subject_id,")
    run(capsys, "metrics", "--input", cohort, "--out", tmp_path)
    summary = json.loads((tmp_path / "metrics_summary.json").read_text())
    assert summary["require_unclassified"] and summary["subjects"] == 2


def test_simulate(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", "--subjects", 30, "--seed", 4, "--calibrate", "--forced", "--out", tmp_path)
    meta = json.loads((tmp_path / "metadata.json").read_text())
    assert code == 0 and meta["seed"] == 4 and meta["forced"] and "calibration" in meta
    ds = parse_csv(tmp_path / "simulated.csv", forced=True)
    assert len(ds) == 30 and all(len(d) == 50 for d in ds)


def test_graph(capsys, tmp_path):
    rel = tmp_path / "rel.txt"
    rel.write_text(to_text(DC_PREORDER))
    code, out, _ = run(capsys, "graph", "--relation", rel, "--annotate", "label=fixture")
    g = parse_dot(out)
    assert (tuple(tuple(c) for c in g.clusters), set(g.edges)) == DC_GRAPH
    assert 'label="fixture"' in out


def test_report_is_deterministic(capsys, cohort, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "report", "--input", cohort, "--out", a)[0] == 0
    assert run(capsys, "report", "--input", cohort, "--out", b, "--jobs", 2)[0] == 0
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert [f.name for f in files if f.parent.name == "graphs"] == ["dc_subject.dot", "uc_subject.dot", "uc_subject_weak.dot"]
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes(), f


def test_jobs_default_from_environment(monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    assert cli.build_parser().parse_args(["validate"]).jobs == 3
    monkeypatch.setenv(cli.JOBS_ENV, "zero")
    assert cli.build_parser().parse_args(["validate"]).jobs == 1


def test_module_entry_point(cohort):
    res = subprocess.run([sys.executable, "-m", "choicefit", "validate", "--input", str(cohort)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["subjects"] == 2
