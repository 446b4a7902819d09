import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from dagwidth.cli import main
from dagwidth.io import format_graph
from graphgen import bounded_digraph

D32 = str(Path(__file__).parent / "data" / "d32.txt")


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_decompose_d32(capsys, tmp_path):
    code, out, err = run(["decompose", D32, "--p", "4"], capsys)
    assert code == 0 and "width 4" in err
    doc = json.loads(out)
    assert doc["width"] == 4 and doc["validation"]["valid"]
    dec = _write(tmp_path, "dec.json", out)
    code, out, _ = run(["validate-decomposition", D32, dec], capsys)
    assert code == 0 and json.loads(out)["valid"]


def test_broken_decomposition_exit_1(capsys, tmp_path):
    _, out, _ = run(["decompose", D32], capsys)
    doc = json.loads(out)
    doc["nodes"][3]["bag"] = []
    dec = _write(tmp_path, "dec.json", json.dumps(doc))
    code, out, _ = run(["validate-decomposition", D32, dec], capsys)
    assert code == 1 and not json.loads(out)["valid"]


def test_trace_option(capsys):
    code, out, _ = run(["decompose", D32, "--trace"], capsys)
    traces = json.loads(out)["traces"]
    assert len(traces) == 6


def test_graph_commands(capsys):
    assert run(["scc", D32], capsys)[0] == 0
    code, out, _ = run(["circumference", D32, "--p", "3"], capsys)
    assert code == 1 and json.loads(out)["circumference"] == "EXCEEDS"
    code, out, _ = run(["simulate-game", D32, "--robber", "greedy"], capsys)
    assert code == 0 and json.loads(out)["caught"]
    code, out, _ = run(["cop-number", D32, "--c-max", "2"], capsys)
    assert code == 1
    code, _, _ = run(["hitting-set", D32, "--x-max", "1"], capsys)
    assert code == 1


def test_input_errors(capsys, tmp_path):
    assert run(["scc", str(tmp_path / "missing.txt")], capsys)[0] == 2
    bad = _write(tmp_path, "bad.txt", "2 1\n0 0\n")
    assert run(["scc", bad], capsys)[0] == 2
    clash = _write(tmp_path, "clash.txt", "3 2\n0 1\n1 2\n@pairs\n0 2\n0 1\n")
    code, _, err = run(["link", clash], capsys)
    assert code == 2 and "distinct" in err
    assert run(["decompose", D32, "--p", "3"], capsys)[0] == 2
    assert run(["scc", D32, "--budget", "0"], capsys)[0] == 2


def test_budget_exit_3(capsys):
    code, _, err = run(["cop-number", D32, "--c-max", "4", "--budget", "10"], capsys)
    assert code == 3 and "budget" in err


def test_link_and_reduce(capsys, tmp_path):
    inst = _write(tmp_path, "i.txt", "4 4\n@labels s a b t\ns a\na b\nb a\nb t\n@pairs\ns t\n")
    code, out, _ = run(["link", inst], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["answer"] == "yes" and doc["paths"] == [["s", "a", "b", "t"]]
    code, out, _ = run(["reduce", inst], capsys)
    assert code == 0 and json.loads(out)["splits"] == 1
    none = _write(tmp_path, "n.txt", "3 1\n1 0\n@pairs\n0 1\n")
    code, out, _ = run(["link", none], capsys)
    assert code == 1 and json.loads(out)["answer"] == "no"


@pytest.mark.parametrize("seed", range(10))
def test_weak_link_matches_brute_subcommand(seed, capsys, tmp_path):
    rng = random.Random(seed)
    n = rng.randint(4, 8)
    D = bounded_digraph(rng, n, 2, 3 * n, mult=2)
    pairs = [rng.sample(range(n), 2) for _ in range(2)]
    text = format_graph(D) + "@pairs\n" + "".join(f"{s} {t}\n" for s, t in pairs) + "@mode arc\n"
    inst = _write(tmp_path, "w.txt", text)
    c1, o1, _ = run(["weak-link", inst], capsys)
    c2, o2, _ = run(["brute", inst], capsys)
    assert c1 == c2
    assert json.loads(o1)["answer"] == json.loads(o2)["answer"]


def test_weak_link_needs_x_max(capsys, tmp_path):
    inst = _write(tmp_path, "c.txt", "4 4\n0 1\n1 2\n2 0\n2 3\n@pairs\n0 3\n@mode arc\n")
    assert run(["weak-link", inst], capsys)[0] == 2
    assert run(["weak-link", inst, "--x-max", "1"], capsys)[0] == 0


def test_text_format(capsys):
    code, out, _ = run(["circumference", D32, "--format", "text"], capsys)
    assert out.splitlines()[0].startswith("circumference: 4")


def test_module_entry_is_deterministic():
    cmd = [sys.executable, "-m", "dagwidth", "simulate-game", D32, "--robber", "random", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
