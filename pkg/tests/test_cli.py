import subprocess
import sys

import pytest

from kminit.cli import main


def test_trace_ruspini(capsys):
    assert main(["trace", "--dataset", "ruspini", "--method", "V", "--k", "4", "--no-normalize"]) == 0
    out = capsys.readouterr().out
    for frag in ("Y @ 92.026667", "X @ 66.975000", "X @ 41.057143"):
        assert frag in out
    assert out.count("split ") == 3


def test_trace_otsu_reports_bins(capsys):
    assert main(["trace", "--dataset", "iris", "--method", "OP"]) == 0
    out = capsys.readouterr().out
    assert "PC @" in out and "otsu bin" in out


def test_inspect_iris(capsys):
    assert main(["inspect", "--dataset", "iris"]) == 0
    assert "N=150 D=4 K'=3" in capsys.readouterr().out


def test_cluster(capsys):
    assert main(["cluster", "--dataset", "iris", "--method", "OP"]) == 0
    out = capsys.readouterr().out
    assert "iterations=" in out
    final = float(next(ln for ln in out.splitlines() if ln.startswith("final_sse=")).split("=")[1])
    assert final == pytest.approx(7, abs=0.5)


def test_cluster_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["cluster", "--dataset", str(empty), "--method", "OP", "--k", "2"]) != 0
    assert "EmptyDataset" in capsys.readouterr().err


def test_unknown_method(capsys):
    assert main(["cluster", "--dataset", "iris", "--method", "ZZ"]) != 0
    assert "unknown method" in capsys.readouterr().err


def test_missing_dataset(capsys):
    assert main(["inspect", "--dataset", "/nonexistent/file.csv"]) != 0
    assert capsys.readouterr().err


def test_unlabeled_needs_k(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0\n1,1\n5,5\n")
    assert main(["cluster", "--dataset", str(pts), "--method", "V"]) != 0
    assert "--k" in capsys.readouterr().err


def test_bench_writes_report(tmp_path, capsys):
    out = tmp_path / "rep"
    rc = main(["bench", "--dataset", "iris", "--dataset", "wine", "--methods", "K,V,OV",
               "--runs", "3", "--output", str(out)])
    assert rc == 0
    assert (out / "summary.tsv").is_file() and (out / "boxplot.tsv").is_file()
    assert "OV vs V" in capsys.readouterr().out


def test_bad_flag_exit_status():
    proc = subprocess.run([sys.executable, "-m", "kminit", "cluster", "--bins", "many"],
                          capture_output=True, text=True)
    assert proc.returncode != 0 and proc.stderr
