from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from ckgraph.cli import run

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
MANIFEST = json.loads((GOLDEN / "manifest.json").read_text())

REPORT_FIELDS = {"certificates", "graph", "invariants", "moves", "verdicts"}


def _run(argv: list[str], capsys) -> tuple[int, str, str]:
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize("name", sorted(MANIFEST))
def test_golden_output_is_byte_identical(name, capsys, monkeypatch):
    monkeypatch.chdir(HERE.parent)
    code, out, _ = _run(MANIFEST[name], capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["info"],
        ["ktheory"],
        ["is-ck"],
        ["normalize"],
        ["corner", "--proj", "v0=1"],
        ["amplify", "--factor", "2"],
        ["monoid-eq", "--a", "v0=1", "--b", "v0=1"],
    ],
)
def test_json_reports_have_the_stable_field_list(argv, capsys, monkeypatch):
    monkeypatch.chdir(HERE.parent)
    target = "tests/data/example_loops.graph"
    code, out, _ = _run(argv[:1] + ["--format", "json"] + argv[1:] + [target], capsys)
    assert code == 0
    assert set(json.loads(out)) == REPORT_FIELDS


def test_move_and_fuzz_json_fields(capsys, monkeypatch):
    monkeypatch.chdir(HERE.parent)
    code, out, _ = _run(
        ["move", "--format", "json", "--move", "add-head:v0:1", "tests/data/example_loops.graph"],
        capsys,
    )
    assert code == 0 and set(json.loads(out)) == REPORT_FIELDS
    code, out, _ = _run(["fuzz", "--format", "json", "--seed", "3", "--cases", "5"], capsys)
    assert code == 0 and set(json.loads(out)) == REPORT_FIELDS


def test_missing_file_is_a_parse_error(capsys):
    code, out, err = _run(["is-ck", "no/such/file.graph"], capsys)
    assert code == 2
    assert "parse error" in err and out == ""


def test_garbage_file_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex v0\nnonsense line\n")
    code, _, err = _run(["ktheory", str(bad)], capsys)
    assert code == 2
    assert "parse error" in err


def test_precondition_failures_name_the_reason(tmp_path, capsys):
    sink = tmp_path / "sink.graph"
    sink.write_text("vertex v\nvertex w\nedge a v w\n")
    code, _, err = _run(["normalize", str(sink)], capsys)
    assert code == 1
    assert "precondition violated" in err and "has-sink" in err

    loops = tmp_path / "loops.graph"
    loops.write_text("vertex v0\nedge e0 v0 v0\nedge f v0 v0\n")
    code, _, err = _run(["corner", "--proj", "nope=1", str(loops)], capsys)
    assert code == 1
    assert "unknown-vertex" in err

    code, _, err = _run(["amplify", "--factor", "0", str(loops)], capsys)
    assert code == 1
    assert "bad-parameter" in err


def test_bad_multiset_literal_is_a_parse_error(tmp_path, capsys):
    loops = tmp_path / "loops.graph"
    loops.write_text("vertex v0\nedge e0 v0 v0\n")
    code, _, err = _run(["monoid-eq", "--a", "v0", "--b", "v0=1", str(loops)], capsys)
    assert code == 2
    assert "parse error" in err


def test_fuzz_is_reproducible_from_the_seed(capsys):
    code1, out1, _ = _run(["fuzz", "--seed", "11", "--cases", "12"], capsys)
    code2, out2, _ = _run(["fuzz", "--seed", "11", "--cases", "12"], capsys)
    assert (code1, code2) == (0, 0)
    assert out1 == out2
    _, other, _ = _run(["fuzz", "--seed", "12", "--cases", "12"], capsys)
    assert other != out1


def test_module_entry_point_runs_in_a_subprocess():
    env = dict(os.environ, PYTHONPATH=str(HERE.parent / "src"))
    proc = subprocess.run(
        [sys.executable, "-m", "ckgraph", "is-ck", str(HERE / "data" / "example_loops.graph")],
        capture_output=True,
        text=True,
        env=env,
        cwd=HERE.parent,
    )
    assert proc.returncode == 0
    assert proc.stdout == "CK: yes (finite, no sinks; rank K0 = rank K1 = 0)\n"


def test_help_exits_cleanly(capsys):
    code, out, _ = _run(["--help"], capsys)
    assert code == 0
    assert "ckgraph" in out


def test_log_flag_writes_a_replayable_file(tmp_path, capsys, monkeypatch):
    from ckgraph import graph_fingerprint, parse_graph, parse_move_log, replay_move_log

    monkeypatch.chdir(HERE.parent)
    log_path = tmp_path / "normalize.log"
    code, _, _ = _run(
        ["normalize", "--log", str(log_path), "tests/data/line_into_loops.graph"], capsys
    )
    assert code == 0
    log = parse_move_log(log_path.read_text())
    source = parse_graph(Path("tests/data/line_into_loops.graph").read_text())
    replayed = replay_move_log(source, log)
    assert graph_fingerprint(replayed) == log.steps[-1][1]
