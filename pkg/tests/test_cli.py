"""Harness tests: subcommand wiring, table schemas, spec files and flag
overrides, worker parity, exit codes, and figure rendering."""

import json
import os

import pytest

import symbreak.cli as cli
from symbreak.cli import CSV_COLUMNS, main
from symbreak.graphcore import dump_graph, gen_tree, load_graph_file

HEADER = ",".join(CSV_COLUMNS)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    # trials stay in-process unless a test opts into more workers
    monkeypatch.setenv("SYMBREAK_WORKERS", "1")


def read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


# ------------------------------------------------------------------------ gen


def test_gen_writes_a_loadable_graph(tmp_path):
    out = tmp_path / "tree.graph"
    assert main(["gen", "--type", "tree", "--n", "64", "--seed", "3",
                 "--out", str(out)]) == 0
    g = load_graph_file(str(out))
    assert dump_graph(g) == dump_graph(gen_tree(64, 3))


def test_gen_streams_to_stdout(capsys):
    assert main(["gen", "--type", "tree", "--n", "16", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("16 15\n")
    assert len(out.splitlines()) == 16


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    for out in (a, b):
        assert main(["gen", "--type", "forest_union", "--n", "256",
                     "--lambda", "2", "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_rejects_missing_parameter(capsys):
    assert main(["gen", "--type", "degree_capped", "--n", "64"]) == 1
    assert "error:" in capsys.readouterr().err


# ------------------------------------------------------------------------ run


def test_run_csv_schema(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "128",
                 "--seed", "5", "--trials", "3", "--out", str(out)]) == 0
    lines = read_lines(out)
    assert lines[0] == HEADER
    assert len(lines) == 1 + 3 + 1
    rows = [line.split(",") for line in lines[1:]]
    for row in rows:
        assert len(row) == len(CSV_COLUMNS)
    assert [row[0] for row in rows] == ["5", "6", "7", "summary"]
    for row in rows[:3]:
        assert row[1] == "mis"
        assert row[2] == "128"
        assert row[8] == "true"      # valid
        assert row[9] == "true"      # maximal
        assert row[12] == "false"    # aborted
    assert rows[3][12] == "0"        # summary counts aborted trials


def test_run_rerun_is_byte_identical(tmp_path):
    args = ["run", "--algo", "mm", "--gen", "degree_capped", "--n", "256",
            "--delta", "8", "--seed", "2", "--trials", "4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_every_algorithm_verifies_on_a_tree(tmp_path):
    for algo in ("mm", "mis", "mis-tree", "mis-girth", "coloring", "arb-reduce"):
        out = tmp_path / f"{algo}.csv"
        assert main(["run", "--algo", algo, "--gen", "tree", "--n", "128",
                     "--seed", "1", "--out", str(out)]) == 0, algo
        row = read_lines(out)[1].split(",")
        assert row[8] == "true" and row[9] == "true", algo


def test_run_json_schema_and_timings(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "64",
                 "--trials", "2", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"trials", "summary"}
    assert len(doc["trials"]) == 2
    first = doc["trials"][0]
    assert first["wall_ms"] is None
    assert isinstance(first["bound_flags"], dict)
    assert first["valid"] is True

    timed = tmp_path / "t.json"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "64",
                 "--trials", "2", "--format", "json", "--timings",
                 "--out", str(timed)]) == 0
    doc = json.loads(timed.read_text())
    assert all(t["wall_ms"] >= 0.0 for t in doc["trials"])


def test_run_from_graph_file(tmp_path):
    gpath = tmp_path / "g.graph"
    assert main(["gen", "--type", "high_girth", "--n", "256", "--delta", "4",
                 "--seed", "9", "--out", str(gpath)]) == 0
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis-girth", "--graph", str(gpath),
                 "--out", str(out)]) == 0
    row = read_lines(out)[1].split(",")
    assert row[2] == "256" and row[8] == "true"


def test_run_on_empty_graph(tmp_path):
    gpath = tmp_path / "empty.graph"
    gpath.write_text("0 0\n")
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis", "--graph", str(gpath),
                 "--out", str(out)]) == 0
    row = read_lines(out)[1].split(",")
    assert row[2] == "0" and row[8] == "true" and row[11] == "0"


def test_run_arb_reduce_records_lambda(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "arb-reduce", "--gen", "star_forest",
                 "--n", "512", "--lambda", "1", "--t", "128",
                 "--out", str(out)]) == 0
    row = read_lines(out)[1].split(",")
    assert row[4] == "1"
    assert "arb_reduction_complete=true" in row[10]


# ------------------------------------------------------------------ spec file


def test_spec_file_run_and_flag_override(tmp_path):
    spec = {
        "algo": "mm",
        "graph": {"generator": "degree_capped", "n": 256, "delta": 8},
        "seed": 2,
        "trials": 3,
    }
    spath = tmp_path / "spec.json"
    spath.write_text(json.dumps(spec))
    out = tmp_path / "full.csv"
    assert main(["run", str(spath), "--out", str(out)]) == 0
    assert len(read_lines(out)) == 1 + 3 + 1

    over = tmp_path / "over.csv"
    assert main(["run", str(spath), "--trials", "1", "--out", str(over)]) == 0
    assert len(read_lines(over)) == 1 + 1 + 1


def test_spec_file_rerun_is_byte_identical(tmp_path):
    spec = {
        "algo": "mis",
        "graph": {"generator": "forest_union", "n": 512, "lambda": 2},
        "seed": 11,
        "trials": 3,
    }
    spath = tmp_path / "spec.json"
    spath.write_text(json.dumps(spec))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", str(spath), "--out", str(a)]) == 0
    assert main(["run", str(spath), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_spec_files(tmp_path, capsys):
    notjson = tmp_path / "bad.json"
    notjson.write_text("{nope")
    assert main(["run", str(notjson)]) == 1
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    assert main(["run", str(arr)]) == 1
    missing = tmp_path / "none.json"
    assert main(["run", str(missing)]) == 1
    capsys.readouterr()


# ---------------------------------------------------------------------- sweep


def test_sweep_rows_carry_axis_flags(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--algo", "mm", "--gen", "degree_capped", "--n", "128",
                 "--delta", "4", "--axis", "delta", "--values", "4,8,16",
                 "--trials", "2", "--out", str(out)]) == 0
    lines = read_lines(out)
    assert lines[0] == HEADER
    assert len(lines) == 1 + 3
    for line, v in zip(lines[1:], ("4", "8", "16")):
        row = line.split(",")
        assert row[0] == "summary"
        assert f"axis=delta|axis_value={v}" in row[10]


def test_sweep_seed_axis_matches_run(tmp_path):
    # a seed sweep with one value aggregates exactly the trials of a run
    spath = tmp_path / "s.csv"
    rpath = tmp_path / "r.csv"
    base = ["--algo", "mis", "--gen", "tree", "--n", "128", "--trials", "3"]
    assert main(["sweep"] + base + ["--axis", "seed", "--values", "4",
                                    "--out", str(spath)]) == 0
    assert main(["run"] + base + ["--seed", "4", "--out", str(rpath)]) == 0
    sweep_row = read_lines(spath)[1].split(",")
    run_summary = read_lines(rpath)[-1].split(",")
    assert sweep_row[5] == run_summary[5]   # median rounds agree
    assert sweep_row[8] == run_summary[8]   # pass rate agrees


def test_sweep_rejects_bad_axis_and_empty_values(tmp_path, capsys):
    base = ["sweep", "--algo", "mm", "--gen", "tree", "--n", "64"]
    assert main(base + ["--axis", "girth", "--values", "1"]) == 1
    assert main(base + ["--axis", "n", "--values", ""]) == 1
    capsys.readouterr()


# -------------------------------------------------------------------- workers


def test_worker_count_does_not_change_output(tmp_path, monkeypatch):
    args = ["run", "--algo", "mis", "--gen", "tree", "--n", "128",
            "--seed", "3", "--trials", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("SYMBREAK_WORKERS", "1")
    assert main(args + ["--out", str(a)]) == 0
    monkeypatch.setenv("SYMBREAK_WORKERS", "2")
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_worker_env_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("SYMBREAK_WORKERS", "many")
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "32"]) == 1
    assert "error:" in capsys.readouterr().err


# ----------------------------------------------------------------- exit codes


def test_validation_failures_exit_one(tmp_path, capsys):
    assert main(["run", "--algo", "nope", "--gen", "tree", "--n", "32"]) == 1
    assert main(["run", "--gen", "tree", "--n", "32"]) == 1          # no algo
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "32",
                 "--trials", "0"]) == 1
    bad = tmp_path / "bad.graph"
    bad.write_text("2 1\n0 0\n")                                     # self loop
    assert main(["run", "--algo", "mis", "--graph", str(bad)]) == 1
    capsys.readouterr()


def test_precondition_failures_exit_one(tmp_path, capsys):
    # mis-tree demands a forest; a degree-capped graph has cycles
    assert main(["run", "--algo", "mis-tree", "--gen", "degree_capped",
                 "--n", "64", "--delta", "8", "--seed", "0"]) == 1
    assert "error:" in capsys.readouterr().err


def test_verification_failure_exits_two(tmp_path, monkeypatch):
    class Fake:
        independent = False
        maximal = False

    monkeypatch.setattr(cli, "check_mis", lambda g, members: Fake())
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "32",
                 "--out", str(out)]) == 2
    row = read_lines(out)[1].split(",")
    assert row[8] == "false"


# -------------------------------------------------------------------- figures


PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_report_renders_run_figures(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "64",
                 "--trials", "4", "--out", str(out)]) == 0
    assert main(["report", "--input", str(out)]) == 0
    paths = capsys.readouterr().out.splitlines()
    assert [os.path.basename(p) for p in paths] == ["rounds.png", "phases.png"]
    for p in paths:
        assert os.path.dirname(p).endswith("r_figs")
        with open(p, "rb") as fh:
            assert fh.read(8) == PNG_MAGIC


def test_report_renders_sweep_figures(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--algo", "mm", "--gen", "degree_capped", "--n", "128",
                 "--delta", "4", "--axis", "delta", "--values", "4,8",
                 "--out", str(out)]) == 0
    figdir = tmp_path / "figs"
    assert main(["report", "--input", str(out), "--out-dir", str(figdir)]) == 0
    names = sorted(os.path.basename(p)
                   for p in capsys.readouterr().out.splitlines())
    assert names == ["scaling.png", "validity.png"]
    assert (figdir / "scaling.png").read_bytes()[:8] == PNG_MAGIC


def test_run_figures_flag(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "64",
                 "--trials", "3", "--out", str(out), "--figures"]) == 0
    figdir = tmp_path / "r_figs"
    assert sorted(os.listdir(figdir)) == ["phases.png", "rounds.png"]


def test_figures_need_an_output_anchor(capsys):
    assert main(["run", "--algo", "mis", "--gen", "tree", "--n", "32",
                 "--figures"]) == 1
    assert "error:" in capsys.readouterr().err


def test_report_rejects_foreign_csv(tmp_path, capsys):
    junk = tmp_path / "junk.csv"
    junk.write_text("a,b,c\n1,2,3\n")
    assert main(["report", "--input", str(junk)]) == 1
    assert "error:" in capsys.readouterr().err
