from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from fpartition.cli import main, run_fuzz

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# (golden file, argv) for the byte-stability checks
GOLDEN_RUNS = [
    ("partition_triangle.json", ["partition", str(DATA / "triangle.txt")]),
    ("partition_four_cycle.json", ["partition", str(DATA / "four_cycle.txt")]),
    ("partition_chain.json", ["partition", str(DATA / "chain.txt")]),
    ("list_color_example.json", ["list-color", str(DATA / "list_example.txt")]),
    ("brooks_k5.json", ["brooks", str(DATA / "k5.txt")]),
    ("s_color_k5.json", ["s-color", "--s", "2", str(DATA / "k5.txt")]),
    ("fuzz_seed7.json", ["fuzz", "--n-max", "5", "--p", "2", "--seed", "7"]),
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestPartition:
    def test_triangle_is_hard(self, capsys):
        code, rep = structured(capsys, "partition", str(DATA / "triangle.txt"))
        assert code == 2 and rep["outcome"] == "hard"
        block = rep["components"][0]["certificate"]["blocks"][0]
        assert block["type"] == "M" and block["params"] == [1]
        assert rep["certificates_valid"]

    def test_four_cycle_partitions(self, capsys):
        code, rep = structured(capsys, "partition", str(DATA / "four_cycle.txt"))
        assert code == 0 and rep["partition_valid"]

    def test_debug_flag(self, capsys):
        code, rep = structured(capsys, "partition", "--debug", str(DATA / "four_cycle.txt"))
        assert code == 0 and "checked_states" in rep

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "partition", str(DATA / "triangle.txt"))
        assert code == 2
        assert "r outcome hard" in out and "s certificate 1 1" in out and "b 1 M 1" in out

    def test_needs_function(self, capsys):
        code, _, err = run(capsys, "partition", str(DATA / "k5.txt"))
        assert code == 1 and "function lines" in err

    def test_degree_condition(self, capsys, tmp_path):
        path = write(tmp_path, "low.txt", "p digraph 2 2 1\na 1 2\na 2 1\nf 1 1\nf 2 0\n")
        code, _, err = run(capsys, "partition", path)
        assert code == 1 and "error" in err


class TestInputErrors:
    def test_loop(self, capsys, tmp_path):
        code, _, err = run(capsys, "partition", write(tmp_path, "loop.txt", "p digraph 1 1 1\na 1 1\nf 1 1\n"))
        assert code == 1 and "loop" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "partition", str(tmp_path / "nope.txt"))
        assert code == 1 and "cannot read" in err

    def test_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO((DATA / "triangle.txt").read_text()))
        code, _, _ = run(capsys, "partition", "-")
        assert code == 2


class TestValidate:
    def test_reports_revalidate(self, capsys, tmp_path):
        for name in ("triangle.txt", "four_cycle.txt", "chain.txt"):
            for fmt in ("structured", "text"):
                code, out, _ = run(capsys, "partition", str(DATA / name), "--format", fmt)
                report = write(tmp_path, f"{name}.{fmt}", out)
                vcode, vout, _ = run(capsys, "validate", str(DATA / name), report)
                assert vcode == 0, vout

    def test_rejects_bad_partition(self, capsys, tmp_path):
        art = write(tmp_path, "bad.txt", "s partition 3 1\nv 1 1\nv 2 1\nv 3 1\n")
        code, rep = structured(capsys, "validate", str(DATA / "triangle.txt"), art)
        assert code == 2 and rep["outcome"] == "invalid"

    def test_rejects_partial_cover(self, capsys, tmp_path):
        art = write(tmp_path, "part.txt", "s partition 4 2\nv 1 1\nv 2 2\n")
        code, _ = structured(capsys, "validate", str(DATA / "four_cycle.txt"), art)
        assert code == 2

    def test_rejects_tampered_certificate(self, capsys, tmp_path):
        _, out, _ = run(capsys, "partition", str(DATA / "chain.txt"), "--format", "structured")
        data = json.loads(out)
        data["components"][0]["certificate"]["blocks"][1]["f_B"][0][0] += 1
        art = write(tmp_path, "cert.json", json.dumps(data))
        code, _ = structured(capsys, "validate", str(DATA / "chain.txt"), art)
        assert code == 2

    def test_empty_artifact(self, capsys, tmp_path):
        code, _ = structured(capsys, "validate", str(DATA / "triangle.txt"), write(tmp_path, "e.txt", ""))
        assert code == 2


class TestOtherCommands:
    def test_check_hard(self, capsys):
        code, rep = structured(capsys, "check-hard", str(DATA / "chain.txt"))
        assert code == 2
        code, rep = structured(capsys, "check-hard", str(DATA / "four_cycle.txt"))
        assert code == 0

    def test_list_color(self, capsys, tmp_path):
        code, rep = structured(capsys, "list-color", str(DATA / "list_example.txt"))
        assert code == 0 and rep["outcome"] == "colorable"
        c5 = "p digraph 5 10 2\n" + "".join(
            f"a {i + 1} {(i + 1) % 5 + 1}\na {(i + 1) % 5 + 1} {i + 1}\n" for i in range(5)
        ) + "".join(f"l {i + 1} 1 2\n" for i in range(5))
        code, rep = structured(capsys, "list-color", write(tmp_path, "c5.txt", c5))
        assert code == 2 and rep["evidence"][0]["blocks"][0]["shape"] == "bidirected odd cycle"

    def test_brooks(self, capsys):
        code, rep = structured(capsys, "brooks", str(DATA / "k5.txt"))
        assert code == 2 and rep["p"] == 4
        code, rep = structured(capsys, "brooks", str(DATA / "k5.txt"), "--p", "5")
        assert code == 0
        code, _, err = run(capsys, "brooks", str(DATA / "k5.txt"), "--p", "3")
        assert code == 1 and "below" in err

    def test_s_color(self, capsys):
        code, rep = structured(capsys, "s-color", str(DATA / "k5.txt"), "--s", "2")
        assert code == 2 and rep["components"][0]["certificate"]["blocks"][0]["params"] == [2, 2]
        code, _ = structured(capsys, "s-color", str(DATA / "k5.txt"), "--s", "2", "--p", "3")
        assert code == 0

    def test_list_s_color(self, capsys, tmp_path):
        k5 = (DATA / "k5.txt").read_text().replace("p digraph 5 20 0", "p digraph 5 20 2")
        k5 += "".join(f"l {v} 1 2\n" for v in range(1, 6))
        code, rep = structured(capsys, "list-s-color", write(tmp_path, "k5l.txt", k5), "--s", "2")
        assert code == 2 and rep["evidence"][0]["shape_condition"] and rep["evidence"][0]["list_condition"]

    def test_oracle(self, capsys):
        code, rep = structured(capsys, "oracle", str(DATA / "four_cycle.txt"))
        assert code == 0 and rep["partition"]["classes"] == [[1, 1], [2, 1], [3, 1], [4, 2]]
        code, _ = structured(capsys, "oracle", str(DATA / "triangle.txt"))
        assert code == 2
        code, _, err = run(capsys, "oracle", str(DATA / "chain.txt"))
        assert code == 1 and "budget" in err

    def test_fuzz(self, capsys):
        code, rep = structured(capsys, "fuzz", "--n-max", "5", "--p", "2", "--seed", "7")
        assert code == 0 and rep["outcome"] == "agree" and rep["checked"] > 0

    def test_fuzz_is_deterministic(self):
        assert run_fuzz(5, 3, 11, 50, 8192) == run_fuzz(5, 3, 11, 50, 8192)


@pytest.mark.parametrize("name, argv", GOLDEN_RUNS, ids=[g[0] for g in GOLDEN_RUNS])
def test_golden_reports(capsys, name, argv):
    first = run(capsys, *argv, "--format", "structured")[1]
    second = run(capsys, *argv, "--format", "structured")[1]
    assert first == second
    assert first == (GOLDEN / name).read_text()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fpartition", "partition", str(DATA / "triangle.txt")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2 and "r outcome hard" in proc.stdout
