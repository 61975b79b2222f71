import json
import os

import pytest

from src.suppvar.cli import main
from src.suppvar.corpus import corpus_algebras


@pytest.fixture
def klein_files(tmp_path):
    assert main(["gen", "group-algebra", "--p", "2", "--type", "2,2", "--out", str(tmp_path / "gen")]) == 0
    return tmp_path / "gen" / "F2_Z2xZ2.algebra.json", tmp_path / "gen" / "F2_Z2xZ2.trivial.module.json"


def _run(tmp_path, *args):
    return main(["run", *args, "--out", str(tmp_path / "reports"), "--cache-dir", str(tmp_path / "cache")])


def test_gen_writes_algebra_and_simples(tmp_path, capsys):
    assert main(["gen", "sweedler", "--p", "3", "--out", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["algebra"] == "Sweedler/F3"
    assert summary["valid"]
    assert len(summary["files"]) == 3
    assert all(os.path.exists(path) for path in summary["files"])


def test_gen_sweedler_in_characteristic_two(tmp_path, capsys):
    assert main(["gen", "sweedler", "--p", "2", "--out", str(tmp_path)]) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "InvalidParams"


def test_complexity_run(tmp_path, capsys, klein_files):
    algebra, module = klein_files
    capsys.readouterr()
    code = _run(tmp_path, "complexity", "--algebra", str(algebra), "--module", str(module), "--depth", "10")
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["complexity"]["gamma"] == 2
    assert report["variety_dim"]["gamma"] == 2
    assert report["module"] == "trivial"
    assert os.path.exists(tmp_path / "reports" / "complexity-0.json")
    assert os.listdir(tmp_path / "cache")


def test_ring_run_as_text(tmp_path, capsys, klein_files):
    algebra, _ = klein_files
    capsys.readouterr()
    assert _run(tmp_path, "ring", "--algebra", str(algebra), "--depth", "3", "--format", "text") == 0
    assert "graded_commutative" in capsys.readouterr().out


def test_fixture_fpdim_run(tmp_path, capsys, c3_fixture_path):
    assert _run(tmp_path, "fpdim", "--fixture", str(c3_fixture_path), "--depth", "17") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["consistent"]
    assert {row["object"]: row["gamma"] for row in report["rows"]} == {"V": 1, "1": 2}


def test_growth_commands_need_depth(tmp_path, klein_files):
    algebra, _ = klein_files
    assert _run(tmp_path, "complexity", "--algebra", str(algebra), "--depth", "4") == 2


def test_split_needs_two_classes(tmp_path, klein_files):
    algebra, _ = klein_files
    assert _run(tmp_path, "split", "--algebra", str(algebra), "--zeta", "1:0", "--depth", "8") == 2


def test_unknown_command():
    assert main(["run", "nonsense"]) == 2


@pytest.mark.slow
def test_corpus_run(tmp_path, capsys):
    assert _run(tmp_path, "corpus", "--depth", "10") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["holds"]
    assert {row["algebra"] for row in report["objects"]} == set(corpus_algebras())
