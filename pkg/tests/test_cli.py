import json
import subprocess
import sys

import pytest

from veronalt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


MATRIX = [
    (["check", "--variety", "alt", "assoc((r*x),s,x) - x*assoc(r,s,x)"], 0),
    (["check", "--variety", "alt", "assoc(x,y,z)"], 1),
    (["check", "--variety", "assoc", "assoc(x,y,z)"], 0),
    (["check", "x*(y"], 2),
    (["check", "--variety", "jordan", "x"], 2),
    (["check", "--variety", "custom:/nonexistent/file.txt", "x"], 2),
    (["check", "--rank", "1", "x*y"], 2),
    (["dims", "--variety", "assoc", "--rank", "2", "--max-degree", "4"], 0),
    (["dims", "--rank", "3", "--max-degree", "9"], 2),
    (["dims", "--rank", "0"], 2),
    (["nf", "x*(x*y)"], 0),
    (["split-check", "assoc(x,x,y)"], 0),
    (["split-check", "assoc(x,y,z)"], 1),
    (["split-check", "x1*x4"], 2),
    (["pigeonhole", "-n", "3", "1", "1", "2", "1"], 0),
    (["pigeonhole", "-n", "3", "1", "2", "1", "2"], 1),
    (["pigeonhole", "-n", "3", "5"], 2),
    (["nucleus", "-d", "2", "-D", "4"], 0),
    (["nucleus", "-d", "4", "-D", "4"], 2),
    (["center", "-d", "1", "-D", "3"], 0),
    (["dchain", "-i", "1", "-d", "3"], 0),
    (["dchain", "-i", "-1", "-d", "3"], 2),
    (["veronese", "--variety", "assoc", "-n", "2", "--max-degree", "4"], 0),
    (["veronese", "-n", "1", "--max-degree", "4"], 2),
    (["bogus"], 2),
    ([], 2),
]


@pytest.mark.parametrize("argv,code", MATRIX, ids=lambda v: " ".join(v) if isinstance(v, list) else str(v))
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv, *(["-q"] if argv and argv[0] != "bogus" else []))
    assert got == code
    if code == 2:
        assert err


def test_dims_output(capsys):
    code, out, _ = run(capsys, "dims", "--variety", "assoc", "--rank", "2", "--max-degree", "4", "--format", "csv", "-q")
    assert out == "degree,dim\n1,2\n2,4\n3,8\n4,16\n"


def test_json_schema_and_determinism(capsys):
    argv = ["nf", "--variety", "ralt", "1/2*assoc(x,y,x) + (y*x)*x", "--format", "json"]
    _, first, err = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert list(doc) == ["command", "config", "results", "timings"]
    assert doc["timings"] == {}
    coords = [c for comp in doc["results"]["components"] for _, c in comp["coords"]]
    assert all(isinstance(c, str) for c in coords)
    assert "1/2" in coords or "-1/2" in coords


def test_timings_opt_in(capsys):
    _, out, _ = run(capsys, "pigeonhole", "-n", "2", "1", "1", "--format", "json", "--timings")
    assert "total_seconds" in json.loads(out)["timings"]


def test_progress_goes_to_stderr(capsys):
    _, out, err = run(capsys, "dims", "--rank", "2", "--max-degree", "3")
    assert "built" in err
    assert "built" not in out


def test_cap_message_names_flag(capsys):
    code, _, err = run(capsys, "dims", "--rank", "3", "--max-degree", "9", "-q")
    assert code == 2
    assert "--cap 9" in err


def test_veronese_right_alternative(capsys):
    code, out, _ = run(capsys, "veronese", "--variety", "ralt", "--rank", "2", "-n", "2", "--max-degree", "6", "--format", "json", "-q")
    assert code == 0
    counts = {d["degree"]: d["new_count"] for d in json.loads(out)["results"]["degrees"]}
    assert counts[4] > 0 and counts[6] > 0


def test_veronese_show_generators(capsys):
    _, out, _ = run(capsys, "veronese", "--variety", "assoc", "-n", "2", "--max-degree", "2", "--show-generators", "--format", "json", "-q")
    gens = json.loads(out)["results"]["degrees"][0]["new_generators"]
    assert sorted(gens) == ["x*x", "x*y", "y*x", "y*y"]


def test_invariants_from_group_file(capsys, tmp_path):
    f = tmp_path / "swap.txt"
    f.write_text("0 1\n1 0\n")
    code, out, _ = run(capsys, "invariants", str(f), "--variety", "assoc", "--max-degree", "3", "--format", "csv", "-q")
    assert code == 0
    assert out.splitlines() == ["degree,dim_target,dim_generated,new_count", "1,1,0,1", "2,2,1,1", "3,4,3,1"]
    g = tmp_path / "cube.txt"
    g.write_text("zeta3 0\n0 zeta3\n")
    code, out, _ = run(capsys, "invariants", str(g), "--variety", "alt", "--max-degree", "3", "-q")
    assert code == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1\n0 1\n")
    assert run(capsys, "invariants", str(bad), "--bound", "20", "-q")[0] == 2


def test_custom_variety(capsys, tmp_path):
    f = tmp_path / "ralt.txt"
    f.write_text("assoc(b,a,a)\n")
    code, _, _ = run(capsys, "check", "--variety", f"custom:{f}", "assoc(y,x,x)", "-q")
    assert code == 0
    code, _, _ = run(capsys, "check", "--variety", f"custom:{f}", "assoc(x,x,y)", "-q")
    assert code == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "veronalt.cli", "dims", "--variety", "assoc", "--rank", "2", "--max-degree", "3", "--format", "json", "-q"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert [r["dim"] for r in json.loads(proc.stdout)["results"]["dims"]] == [2, 4, 8]
