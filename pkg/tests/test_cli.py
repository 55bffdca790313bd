import json

import pytest

from stratkb.cli import main
from stratkb.skb import parse_kb, possibility_table

from conftest import BIRD_ATOMS, BIRDS_KB, BIRDS_PRUNED, TOY_B, birds_rows


@pytest.fixture
def birds_csv(tmp_path):
    lines = [",".join(BIRD_ATOMS)]
    for r in birds_rows():
        lines.append(",".join(str(r >> i & 1) for i in range(3)))
    path = tmp_path / "data.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_learn_compile_prune_query(tmp_path, capsys, birds_csv):
    tree = tmp_path / "tree.json"
    code, out, _ = run(capsys, "learn", str(birds_csv), "--max-depth", "3", "--out", str(tree))
    assert code == 0
    assert "leaves: 6" in out and "sum = 1 (ok)" in out
    leaves = []

    def collect(node):
        if "p" in node:
            leaves.append(node["p"])
        else:
            collect(node["f"])
            collect(node["t"])

    collect(json.loads(tree.read_text())["root"])
    assert leaves == ["0.25", "0.125", "0", "0.1875", "0.0625", "0"]

    kb_path = tmp_path / "kb.txt"
    assert run(capsys, "compile", str(tree), "--out", str(kb_path))[0] == 0
    assert kb_path.read_text() == BIRDS_KB

    pruned = tmp_path / "pruned.txt"
    code, out, _ = run(capsys, "prune", "--kb", str(kb_path), "--mode", "exact", "--out", str(pruned))
    assert code == 0
    assert "entries: 6 -> 6" in out and "pi preserved: verified" in out

    for path in (kb_path, pruned):
        code, out, _ = run(capsys, "query", "marginal", "--kb", str(path), "--query", "Bird")
        assert code == 0 and out == "marginal: 1/4 (0.25)\n"


def test_learn_errors(tmp_path, capsys):
    empty = write(tmp_path, "e.csv", "")
    code, _, err = run(capsys, "learn", empty)
    assert code == 2 and "empty dataset" in err
    assert run(capsys, "learn", str(tmp_path / "missing.csv"))[0] == 2


def test_learn_depth_zero(capsys, birds_csv):
    code, out, err = run(capsys, "learn", str(birds_csv), "--max-depth", "0")
    assert code == 0
    assert json.loads(out)["root"] == {"p": "0.125"}
    assert "leaves: 1" in err


def test_compile_errors_and_degenerate(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", "{not json")
    assert run(capsys, "compile", bad)[0] == 2
    single = write(tmp_path, "one.json", json.dumps({"atoms": ["a"], "root": {"p": "0.5"}}))
    code, out, _ = run(capsys, "compile", single)
    assert code == 0 and out == "@atoms a\n@spkb true\n0.5 :: false\n"


def test_prune_merge_and_idempotence(tmp_path, capsys):
    kb = write(tmp_path, "b.txt", BIRDS_KB)
    code, out, _ = run(capsys, "prune", "--kb", kb, "--mode", "merge:1")
    assert code == 0
    assert {e.weight for e in parse_kb(out)} == {1}

    once = tmp_path / "once.txt"
    twice = tmp_path / "twice.txt"
    run(capsys, "prune", "--kb", kb, "--out", str(once))
    run(capsys, "prune", "--kb", str(once), "--out", str(twice))
    assert parse_kb(once.read_text()).entries == parse_kb(twice.read_text()).entries

    assert run(capsys, "prune", "--kb", kb, "--mode", "merge:9")[0] == 2
    assert run(capsys, "prune", "--kb", kb, "--mode", "fold")[0] == 2


def test_query_map(tmp_path, capsys):
    kb = write(tmp_path, "toy.txt", TOY_B)
    code, out, _ = run(capsys, "query", "map", "--kb", kb, "--evidence", "Gardener & Coughs",
                       "--query", "!HayFever")
    assert code == 0
    assert "verdict: entailed" in out and "cutoff: 0.8" in out
    code, out, _ = run(capsys, "query", "map", "--kb", kb, "--evidence", "Gardener", "--query", "Coughs")
    assert code == 1 and "not entailed" in out
    code, _, err = run(capsys, "query", "map", "--kb", kb, "--evidence", "Coughs & !Coughs", "--query", "Coughs")
    assert code == 2 and "unsatisfiable" in err


def test_query_top(tmp_path, capsys):
    kb = write(tmp_path, "b.txt", BIRDS_KB)
    code, out, _ = run(capsys, "query", "top", "--kb", kb, "--evidence", "true", "--query", "!Flies")
    assert code == 0 and "theta: 1/4 (25%)" in out
    code, out, _ = run(capsys, "query", "top", "--kb", kb, "--query", "Bird")
    assert code == 1


def test_query_errors(tmp_path, capsys):
    kb = write(tmp_path, "b.txt", BIRDS_KB)
    assert run(capsys, "query", "map", "--kb", kb, "--query", "Penguin")[0] == 2
    assert run(capsys, "query", "marginal", "--kb", write(tmp_path, "t.txt", TOY_B), "--query", "Coughs")[0] == 2
    assert run(capsys, "query", "map", "--query", "Bird")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_edit_implications(tmp_path, capsys):
    kb = write(tmp_path, "bp.txt", BIRDS_PRUNED)
    code, out, _ = run(capsys, "edit", "implications", "--kb", kb)
    assert code == 0
    assert out.splitlines()[2:] == [
        "1 :: Bird & !Antarctic -> Flies",
        "1 :: Bird & Antarctic -> !Flies",
        "0.9375 :: Bird -> !Antarctic",
        "0.875 :: Flies -> Bird",
        "0.8125 :: !Bird",
    ]


def test_edit_remove_and_swap(tmp_path, capsys):
    b2 = tmp_path / "b2.txt"
    run(capsys, "edit", "implications", "--kb", write(tmp_path, "bp.txt", BIRDS_PRUNED), "--out", str(b2))
    code, _, _ = run(capsys, "edit", "remove:1", "--kb", str(b2))
    assert code == 0
    removed = tmp_path / "removed.txt"
    run(capsys, "edit", "remove:1", "--kb", str(b2), "--out", str(removed))
    code, out, _ = run(capsys, "query", "map", "--kb", str(removed), "--evidence", "Bird & Antarctic",
                       "--query", "!Flies")
    assert code == 1

    swapped = tmp_path / "swapped.txt"
    assert run(capsys, "edit", "swap:2,3", "--kb", str(b2), "--out", str(swapped))[0] == 0
    lines = swapped.read_text().splitlines()
    assert "0.9375 :: !Flies | Bird" in lines and "0.875 :: !Bird | !Antarctic" in lines

    assert run(capsys, "edit", "remove:9", "--kb", str(b2))[0] == 2
    assert run(capsys, "edit", "swap:1", "--kb", str(b2))[0] == 2
    assert run(capsys, "edit", "explode", "--kb", str(b2))[0] == 2


def test_edit_warns_about_pruning(tmp_path, capsys):
    kb = write(tmp_path, "b.txt", BIRDS_KB)
    pruned = tmp_path / "p.txt"
    run(capsys, "prune", "--kb", kb, "--out", str(pruned))
    code, out, err = run(capsys, "edit", "remove:1", "--kb", str(pruned))
    assert code == 0
    assert "@spkb false" in out
    assert "invalidates earlier pruning steps" in err
    assert "!Bird | !Antarctic | Flies" in err


def test_validate(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", "--kb", write(tmp_path, "b.txt", BIRDS_KB))
    assert code == 0 and "sum of pi: 1/1 (1)" in out
    code, out, _ = run(capsys, "validate", "--kb", write(tmp_path, "bp.txt", BIRDS_PRUNED))
    assert code == 1


def test_deterministic_outputs(tmp_path, capsys, birds_csv):
    outs = []
    for i in range(2):
        t = tmp_path / f"t{i}.json"
        k = tmp_path / f"k{i}.txt"
        p = tmp_path / f"p{i}.txt"
        run(capsys, "learn", str(birds_csv), "--out", str(t), "--quiet")
        run(capsys, "compile", str(t), "--out", str(k), "--quiet")
        run(capsys, "prune", "--kb", str(k), "--out", str(p), "--quiet")
        outs.append((t.read_bytes(), k.read_bytes(), p.read_bytes()))
    assert outs[0] == outs[1]
    assert possibility_table(parse_kb(outs[0][2].decode())) == possibility_table(parse_kb(BIRDS_KB))
