import json
import subprocess
import sys
from importlib.resources import files

import pytest

from otalearn.cli import main
from otalearn.equivalence import find_witness
from otalearn.io import dumps_automaton, load_automaton, load_fixture, parse_word


@pytest.fixture
def fig(tmp_path):
    p = tmp_path / "running.json"
    p.write_text(files("otalearn.data").joinpath("running_example.json").read_text())
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_equiv_self(fig, capsys):
    code, out, _ = run(["equiv", fig, fig], capsys)
    assert code == 0 and out.strip() == "equivalent"


def test_equiv_witness(fig, tmp_path, capsys):
    other = tmp_path / "never.json"
    other.write_text(json.dumps({"alphabet": ["a", "b"], "locations": ["p"], "initial": "p",
                                 "accepting": [], "transitions": []}))
    code, out, _ = run(["equiv", fig, other, "--witness"], capsys)
    lines = out.splitlines()
    assert code == 1
    assert parse_word(lines[0], "delay") == parse_word("(a,1.5)", "delay")
    assert lines[1].endswith(": +") and lines[2].endswith(": -")


@pytest.mark.parametrize(
    "word, kind, extra, expected",
    [
        ("(a,1.1)(b,0.9)", "delay", [], "+"),
        ("(a,1.1)(b,2)", "logical", [], "+"),
        ("(a,3)", "delay", [], "x"),
        ("(a,3)", "delay", ["--no-trick"], "-"),
        ("(a,1.1,N)(b,0.9,R)", "reset-delay", [], "+"),
        ("(a,1.1,R)(b,0.9,R)", "reset-delay", [], "-"),
        ("(a,1.1,N)(b,2,R)", "reset-logical", [], "+"),
    ],
)
def test_member(fig, capsys, word, kind, extra, expected):
    code, out, _ = run(["member", fig, "--word", word, "--kind", kind, *extra], capsys)
    assert code == 0 and out.strip() == expected


def test_learn_smart_writes_outputs(fig, tmp_path, capsys):
    out, stats = tmp_path / "h.json", tmp_path / "s.json"
    code, _, err = run(["learn", "--mode", "smart", "--target", fig, "--out", out, "--stats", stats], capsys)
    assert code == 0 and "learned 3 locations" in err
    s = json.loads(stats.read_text())
    assert s["mode"] == "smart" and s["equivalence_count"] >= 5
    assert s["locations_learned"] == 3 and s["locations_non_sink"] == 2
    assert find_witness(load_automaton(out), load_automaton(fig)) is None


def test_learn_to_stdout(fig, capsys):
    code, out, _ = run(["learn", "--target", fig], capsys)
    assert code == 0 and json.loads(out)["initial"] == "q0"


def test_learn_is_byte_deterministic(fig, tmp_path, capsys):
    blobs = []
    for i in range(2):
        out, stats = tmp_path / f"h{i}.json", tmp_path / f"s{i}.json"
        assert run(["learn", "--mode", "normal", "--target", fig, "--out", out, "--stats", stats, "--seed", 7], capsys)[0] == 0
        s = json.loads(stats.read_text())
        s.pop("wall_time_ms")
        blobs.append((out.read_bytes(), s))
    assert blobs[0] == blobs[1]
    assert blobs[0][1]["sample_disagreements"] == 0 and blobs[0][1]["sample_seed"] == 7


def test_generate_and_bench(tmp_path, capsys):
    gen = tmp_path / "gen"
    code, out, _ = run(["generate", "--locations", 3, "--alphabet", 2, "--kappa", 4, "--seed", 1,
                        "--count", 3, "--out", gen], capsys)
    assert code == 0 and len(out.splitlines()) == 3
    first = (gen / "3_2_4-1.json").read_bytes()
    run(["generate", "--locations", 3, "--alphabet", 2, "--kappa", 4, "--seed", 1, "--count", 3,
         "--out", tmp_path / "again"], capsys)
    assert (tmp_path / "again" / "3_2_4-1.json").read_bytes() == first
    stats = tmp_path / "bench.json"
    code, out, _ = run(["bench", "--dir", gen, "--stats", stats], capsys)
    doc = json.loads(stats.read_text())
    assert code == 0 and doc["summary"]["count"] == 3 and doc["summary"]["learned"] == 3


def test_usage_errors(fig, tmp_path, capsys):
    assert run(["member", fig, "--word", "(a,1.1", "--kind", "delay"], capsys)[0] == 2
    assert run(["member", fig, "--word", "(a,1,R)", "--kind", "delay"], capsys)[0] == 2
    assert run(["equiv", fig, tmp_path / "missing.json"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["learn", "--target", bad], capsys)
    assert code == 2 and "byte" in err
    dangling = tmp_path / "dangling.json"
    dangling.write_text(json.dumps({"alphabet": ["a"], "locations": ["p"], "initial": "p", "accepting": [],
                                    "transitions": [{"source": "p", "action": "a", "guard": "[0,+)",
                                                     "reset": True, "target": "zz"}]}))
    assert run(["equiv", dangling, dangling], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["learn"])
    assert exc.value.code == 2


def test_resource_limit_exit(fig, capsys):
    code, _, err = run(["learn", "--mode", "normal", "--target", fig, "--max-instances", 2], capsys)
    assert code == 3 and "resource limit" in err


def test_console_script(fig):
    proc = subprocess.run([sys.executable, "-m", "otalearn.cli", "equiv", str(fig), str(fig)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "equivalent"


def test_fixture_documents_are_canonical():
    for name in ("running_example", "tcp"):
        text = files("otalearn.data").joinpath(f"{name}.json").read_text()
        assert dumps_automaton(load_fixture(name)) == text
