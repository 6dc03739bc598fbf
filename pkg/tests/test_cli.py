import json
import subprocess
import sys

import pytest

from plcpz.cli import main, repetitive_corpus

from conftest import RUNNING_EXAMPLE


def run(argv):
    return main(list(argv))


def test_compress_decompress_files(tmp_path):
    src = tmp_path / "t.txt"
    src.write_bytes(RUNNING_EXAMPLE)
    blob = tmp_path / "t.plz"
    out = tmp_path / "t.out"
    assert run(["compress", str(src), "-o", str(blob)]) == 0
    assert blob.read_bytes()[:8] == b"PLCPZ001"
    for strategy in ("oracle", "pj", "compact-pj"):
        assert run(["decompress", str(blob), "-o", str(out),
                    "--strategy", strategy]) == 0
        assert out.read_bytes() == RUNNING_EXAMPLE


def test_stdin_stdout_streaming(tmp_path):
    p1 = subprocess.run([sys.executable, "-m", "plcpz.cli", "compress"],
                        input=RUNNING_EXAMPLE, capture_output=True)
    assert p1.returncode == 0
    p2 = subprocess.run([sys.executable, "-m", "plcpz.cli", "decompress"],
                        input=p1.stdout, capture_output=True)
    assert p2.returncode == 0
    assert p2.stdout == RUNNING_EXAMPLE


def test_metrics_file_schema(tmp_path):
    src = tmp_path / "t.txt"
    src.write_bytes(repetitive_corpus(4096, 3))
    blob = tmp_path / "t.plz"
    met = tmp_path / "m.jsonl"
    assert run(["compress", str(src), "-o", str(blob),
                "--metrics", str(met)]) == 0
    lines = [json.loads(l) for l in met.read_text().splitlines()]
    assert lines[-1]["event"] == "compress"
    assert {"pairs", "max_peak_list", "references", "factors", "io"} <= \
        set(lines[-1])
    met2 = tmp_path / "d.jsonl"
    out = tmp_path / "t.out"
    assert run(["decompress", str(blob), "-o", str(out),
                "--metrics", str(met2)]) == 0
    lines = [json.loads(l) for l in met2.read_text().splitlines()]
    assert lines[-1]["event"] == "decompress"
    assert {"iterations", "requests", "splits", "pq_peak", "io"} <= \
        set(lines[-1])
    assert any(l["event"] == "pj-iteration" for l in lines[:-1])


def test_stats_reports_census(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_bytes(RUNNING_EXAMPLE)
    assert run(["stats", str(src)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["references"] == 4
    assert report["depth"] == 5
    assert report["multi_dependent"] == 2


def test_stats_on_container(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_bytes(RUNNING_EXAMPLE)
    blob = tmp_path / "t.plz"
    run(["compress", str(src), "-o", str(blob)])
    capsys.readouterr()
    assert run(["stats", str(blob)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["references"] == 4 and report["n"] == 22


def test_gen_corpus_lower_bound(tmp_path):
    out = tmp_path / "lb.bin"
    assert run(["gen-corpus", "lower-bound", "--m", "20",
                "-o", str(out)]) == 0
    assert len(out.read_bytes()) == 400


def test_gen_corpus_repetitive_deterministic(tmp_path):
    a = tmp_path / "a.bin"
    b = tmp_path / "b.bin"
    run(["gen-corpus", "repetitive", "--size", "8K", "--seed", "5",
         "-o", str(a)])
    run(["gen-corpus", "repetitive", "--size", "8K", "--seed", "5",
         "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_bytes()) == 8192


def test_index_command(tmp_path):
    src = tmp_path / "t.txt"
    src.write_bytes(RUNNING_EXAMPLE)
    idx = tmp_path / "t.idx"
    assert run(["index", str(src), "-o", str(idx)]) == 0
    assert idx.read_bytes()[:8] == b"PLCPIDX1"


def test_theta_sweep(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_bytes(repetitive_corpus(4096, 9))
    assert run(["theta-sweep", str(src), "--range", "2:4"]) == 0
    rows = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert [r["theta"] for r in rows] == [2, 3, 4]
    refs = [r["references"] for r in rows]
    assert refs == sorted(refs, reverse=True)


def test_exit_codes(tmp_path, capsys):
    missing = tmp_path / "nope.bin"
    assert run(["compress", str(missing), "-o", "-"]) == 3
    nul = tmp_path / "nul.txt"
    nul.write_bytes(b"a\x00b")
    assert run(["compress", str(nul), "-o", str(tmp_path / "x")]) == 4
    bad = tmp_path / "bad.plz"
    bad.write_bytes(b"garbage!")
    assert run(["decompress", str(bad), "-o", str(tmp_path / "y")]) == 5
    clean = tmp_path / "clean.txt"
    clean.write_bytes(b"abc")
    assert run(["compress", str(clean), "--theta", "1",
                "-o", str(tmp_path / "z")]) == 2
    capsys.readouterr()


def test_tmp_flag_beats_env(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    flag_dir = tmp_path / "flag"
    env_dir.mkdir()
    flag_dir.mkdir()
    monkeypatch.setenv("PLCPZ_TMP", str(env_dir))
    src = tmp_path / "t.txt"
    src.write_bytes(repetitive_corpus(1 << 16, 1))
    blob = tmp_path / "t.plz"
    assert run(["compress", str(src), "-o", str(blob), "--mem", "256K",
                "--tmp", str(flag_dir)]) == 0
    out = tmp_path / "t.out"
    assert run(["decompress", str(blob), "-o", str(out)]) == 0
    assert out.read_bytes() == src.read_bytes()
