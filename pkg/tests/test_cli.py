"""CLI contract: subcommands, exit codes, deterministic reports."""

import json

import pytest

from bridgecert.cli import run

from conftest import TREFOIL_PD


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_certify_pretzel(capsys):
    code, out = invoke(capsys, "certify", "--pretzel", "-2,3,5")
    assert code == 0
    data = json.loads(out)
    assert data["conclusion"] == "bridge number = meridional rank = 3"
    cert = data["certificate"]
    assert cert["omega"] == 3 and cert["coxeter_rank"] == 3
    assert cert["conclusion"] == 3


def test_omega_subcommand(tmp_path, capsys):
    pd = tmp_path / "trefoil.pd"
    pd.write_text(TREFOIL_PD)
    code, out = invoke(capsys, "omega", str(pd))
    assert code == 0
    data = json.loads(out)
    assert data["omega"]["omega"] == 2


def test_malformed_input_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.pd"
    bad.write_text("X[1,2,3]")
    code, out = invoke(capsys, "omega", str(bad))
    assert code == 1
    assert "error" in json.loads(out)


def test_budget_exit_2(tmp_path, capsys):
    pd = tmp_path / "p.pd"
    from bridgecert.families import pretzel

    pd.write_text(pretzel((2, 2, 2, 2)).diagram.to_pd())
    code, out = invoke(capsys, "omega", str(pd), "--budget-nodes", "2")
    assert code == 2
    data = json.loads(out)
    assert "unknown >=" in data["partial"]


def test_twisted_check(tmp_path, capsys):
    from bridgecert.families import pretzel

    pd = tmp_path / "p.pd"
    pd.write_text(pretzel((-2, 3, 5)).diagram.to_pd())
    code, out = invoke(capsys, "twisted-check", str(pd))
    assert code == 0
    data = json.loads(out)
    assert data["twisted"] is True
    assert len(data["colorings"]) == 2


def test_tangle_subcommand(capsys):
    code, out = invoke(capsys, "tangle", "2,2")
    assert code == 0
    data = json.loads(out)
    assert data["tangle"]["fraction"] == [5, 2]
    assert data["boundary_pattern"] == ["x", "x", "y", "y"]


def test_two_bridge_subcommand(capsys):
    code, out = invoke(capsys, "two-bridge", "5", "3")
    assert code == 0
    data = json.loads(out)
    assert data["coxeter_graph"]["edges"] == [["x", "y", 5]]


def test_arborescent_subcommand(tmp_path, capsys):
    tree = {
        "version": 1,
        "weights": [2, 2, 2, 2],
        "children": [[1, 2, 3], [], [], []],
        "root": 0,
    }
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, out = invoke(capsys, "arborescent", str(path), "--certify")
    assert code == 0
    data = json.loads(out)
    assert data["leaf_count"] == 3
    assert len(data["seed_schedule"]["seeds"]) == 3
    assert data["certificate"]["conclusion"] == 3


def test_arborescent_refusal_reported(tmp_path, capsys):
    tree = {
        "version": 1,
        "weights": [2, 2, 2, 2, 2, 2],
        "children": [[1, 2, 3], [], [], [4, 5], [], []],
        "root": 0,
    }
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree))
    code, out = invoke(capsys, "arborescent", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["valid"] is False
    assert "labeling_refused" in data


def test_fatgraph_subcommands(tmp_path, capsys):
    graph = {"version": 1, "rotations": [[0, 2, 4], [5, 3, 1]], "weights": [2, 3, 5]}
    path = tmp_path / "theta.json"
    path.write_text(json.dumps(graph))
    code, out = invoke(capsys, "fatgraph", "omega", str(path))
    assert code == 0 and json.loads(out)["omega"] == 3
    code, out = invoke(capsys, "fatgraph", "color", str(path))
    assert code == 0
    data = json.loads(out)
    assert len(data["seeds"]) == data["regions"] == 3
    code, out = invoke(capsys, "fatgraph", "decompose", str(path))
    assert code == 0
    assert len(json.loads(out)["operations"]) == 3


def test_corpus_and_verify_report(tmp_path, capsys):
    from bridgecert.families import pretzel, torus2

    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a_pretzel.pd").write_text(pretzel((-2, 3, 5)).diagram.to_pd())
    (corpus / "b_torus.pd").write_text(torus2(3).diagram.to_pd())
    (corpus / "c_tree.json").write_text(
        json.dumps(
            {
                "version": 1,
                "weights": [2, 2, 2, 2],
                "children": [[1, 2, 3], [], [], []],
                "root": 0,
            }
        )
    )
    (corpus / "d_bad.pd").write_text("X[1,2,3]")
    code, out = invoke(capsys, "corpus", str(corpus))
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["failed"] == 1
    assert data["summary"]["certified"] >= 2
    assert len(data["rows"]) == 4

    report_path = tmp_path / "report.json"
    report_path.write_text(out)
    code, out2 = invoke(capsys, "verify-report", str(report_path))
    assert code == 0
    check = json.loads(out2)
    assert check["all_ok"] is True
    assert check["certificates_checked"] >= 2


def test_verify_report_catches_tampering(tmp_path, capsys):
    code, out = invoke(capsys, "certify", "--torus2", "3")
    assert code == 0
    data = json.loads(out)
    data["certificate"]["omega_result"]["certificate"]["seeds"] = [0]
    data["certificate"]["omega"] = 1
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(data))
    code, out2 = invoke(capsys, "verify-report", str(path))
    assert code == 1
    assert json.loads(out2)["all_ok"] is False


def test_corpus_determinism(tmp_path, capsys):
    from bridgecert.families import torus2

    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "t.pd").write_text(torus2(4).diagram.to_pd())
    _code, out1 = invoke(capsys, "corpus", str(corpus))
    _code, out2 = invoke(capsys, "corpus", str(corpus))
    assert out1 == out2


def test_empty_corpus(tmp_path, capsys):
    corpus = tmp_path / "empty"
    corpus.mkdir()
    code, out = invoke(capsys, "corpus", str(corpus))
    assert code == 0
    data = json.loads(out)
    assert data["rows"] == []


def test_text_format(capsys):
    code, out = invoke(capsys, "torus2", "-n", "3", "--format", "text")
    assert code == 0
    assert "pd:" in out
