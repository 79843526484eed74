import csv
import io
import json
import random
import subprocess
import sys

import pytest

from pohpp import cli
from pohpp.core import Solution, load_instance, save_instance
from pohpp.generate import random_instance, random_block_instance

K3_TOTAL = {"variant": "path", "n": 3, "edges": [[0, 1], [1, 2], [0, 2]], "constraints": [[0, 1], [1, 2]]}
C4 = {"variant": "path", "n": 4, "edges": [[0, 1], [1, 2], [2, 3], [0, 3]], "constraints": []}
P3_STUCK = {"variant": "path", "n": 3, "edges": [[0, 1], [1, 2]], "constraints": [[0, 1], [2, 1]]}


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_oracle_k3(tmp_path, capsys):
    code, out, _ = _run(capsys, "solve", _write(tmp_path, "k3.json", K3_TOTAL), "--algo", "oracle")
    doc = json.loads(out)
    assert code == 0
    assert doc["feasible"] is True and doc["order"] == [0, 1, 2] and doc["algo"] == "oracle"
    assert set(doc) == {"feasible", "order", "cost", "algo", "elapsed_ms"}


def test_solve_block_on_c4_is_precondition_error(tmp_path, capsys):
    code, _, err = _run(capsys, "solve", _write(tmp_path, "c4.json", C4), "--algo", "block")
    assert code == 2 and "NotBlockGraph" in err


def test_expect_yes_on_infeasible(tmp_path, capsys):
    path = _write(tmp_path, "p3.json", P3_STUCK)
    assert _run(capsys, "solve", path, "--expect", "yes")[0] == 1
    assert _run(capsys, "solve", path, "--expect", "no")[0] == 0
    assert _run(capsys, "solve", path)[0] == 0


def test_verify_with_oracle_mismatch(tmp_path, capsys, monkeypatch):
    path = _write(tmp_path, "p3.json", P3_STUCK)
    monkeypatch.setattr(cli, "solve_with", lambda *a, **k: Solution((0, 1, 2), 0))
    assert _run(capsys, "solve", path, "--algo", "fes", "--verify-with-oracle")[0] == 3


def test_verify_with_oracle_differential_run(tmp_path, capsys):
    rng = random.Random(1)
    for i in range(15):
        inst = random_block_instance(rng, rng.randint(2, 8))
        path = tmp_path / f"b{i}.json"
        save_instance(inst, path)
        for algo in ("block", "fes", "oracle"):
            assert _run(capsys, "solve", str(path), "--algo", algo, "--verify-with-oracle")[0] == 0


def test_decision_only_solvers_reject_min(tmp_path, capsys):
    doc = dict(K3_TOTAL, objective="min", edges=[[0, 1, 1], [1, 2, 1], [0, 2, 1]])
    path = _write(tmp_path, "k3w.json", doc)
    for algo in ("block", "clique-module"):
        assert _run(capsys, "solve", path, "--algo", algo)[0] == 2
    code, out, _ = _run(capsys, "solve", path, "--algo", "fes")
    assert code == 0 and json.loads(out)["cost"] == 2


def test_fes_cap(tmp_path, capsys):
    path = _write(tmp_path, "c4.json", C4)
    assert _run(capsys, "solve", path, "--algo", "fes", "--fes-max-k", "0")[0] == 2
    assert _run(capsys, "solve", path, "--algo", "fes", "--fes-max-k", "1")[0] == 0


def test_find_certificate(tmp_path, capsys):
    path = _write(tmp_path, "c4.json", C4)
    for algo in ("edge-block", "dist-block", "dist-outerplanar", "clique-module"):
        code, out, _ = _run(capsys, "solve", path, "--algo", algo, "--find-certificate")
        assert code == 0 and json.loads(out)["feasible"] is True
    assert _run(capsys, "solve", path, "--find-certificate")[0] == 64


def test_auto_uses_certificate(tmp_path, capsys):
    doc = dict(C4, certificates={"deletion_edges": [[0, 1]]})
    code, out, _ = _run(capsys, "solve", _write(tmp_path, "c4f.json", doc))
    assert code == 0 and json.loads(out)["algo"] == "edge-block"
    code, out, _ = _run(capsys, "solve", _write(tmp_path, "c4.json", C4))
    assert json.loads(out)["algo"] == "oracle"


def test_auto_without_certificate_over_limit(tmp_path, capsys):
    doc = {"n": 25, "edges": [[i, i + 1] for i in range(24)], "constraints": []}
    path = _write(tmp_path, "p25.json", doc)
    assert _run(capsys, "solve", path)[0] == 2
    code, out, _ = _run(capsys, "solve", path, "--max-n", "30")
    assert code == 0 and json.loads(out)["feasible"]


def test_solve_output_is_byte_stable(tmp_path, capsys):
    path = _write(tmp_path, "k3.json", K3_TOTAL)
    a = _run(capsys, "solve", path, "--no-timing")[1]
    b = _run(capsys, "solve", path, "--no-timing")[1]
    assert a == b and json.loads(a)["elapsed_ms"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "mcp-d2p", "--k", "2", "--q", "1", "--seed", "7"],
        ["gen", "mcp-d2c", "--k", "3", "--q", "1", "--seed", "7", "--variant", "cluster-modules"],
        ["gen", "ecc", "--n", "2", "--seed", "7"],
        ["gen", "random", "--n", "9", "--seed", "7", "--objective", "min"],
    ],
)
def test_gen_is_deterministic(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(argv + ["-o", str(a)]) == 0
    assert cli.main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert load_instance(a).meta["seed"] == 7


def test_gen_seeds_differ(tmp_path):
    outs = []
    for seed in (1, 2):
        p = tmp_path / f"{seed}.json"
        cli.main(["gen", "random", "--n", "9", "--seed", str(seed), "-o", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] != outs[1]


def test_gen_ecc_from_constraints_file(tmp_path, capsys):
    seed = _write(tmp_path, "seed.json", {"n": 2, "constraints": [[0, 0], [1, 0]]})
    out = tmp_path / "ecc.json"
    assert cli.main(["gen", "ecc", "--constraints-file", seed, "-o", str(out)]) == 0
    inst = load_instance(out)
    assert inst.n == 10 and inst.meta["source"]["constraints"] == [[0, 0], [1, 0]]


def test_gen_usage_errors(capsys):
    assert _run(capsys, "gen", "mcp-d2p", "--k", "2")[0] == 64
    assert _run(capsys, "gen", "mcp-d2p", "--k", "2", "--q", "1", "--variant", "clique")[0] == 64
    assert _run(capsys, "gen", "nothing")[0] == 64


def test_verify_missing_edge(tmp_path, capsys):
    path = _write(tmp_path, "c4.json", C4)
    code, out, _ = _run(capsys, "verify", path, "--order", "0,2,1,3")
    assert code == 1 and json.loads(out)["edges_present"] is False
    code, out, _ = _run(capsys, "verify", path, "--order", "0 1 2 3")
    assert code == 0 and json.loads(out)["ok"] is True


def test_verify_reads_solve_output(tmp_path, capsys):
    path = _write(tmp_path, "k3.json", K3_TOTAL)
    sol = tmp_path / "sol.json"
    assert cli.main(["solve", path, "-o", str(sol)]) == 0
    assert _run(capsys, "verify", path, "--solution", str(sol))[0] == 0


def test_usage_errors_exit_64(capsys):
    assert _run(capsys, "solve")[0] == 64
    assert _run(capsys, "frobnicate")[0] == 64
    assert _run(capsys, "solve", "x.json", "--algo", "magic")[0] == 64


def test_bad_file_is_precondition_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert _run(capsys, "solve", str(bad))[0] == 2
    assert _run(capsys, "solve", str(tmp_path / "missing.json"))[0] == 2


def test_bench_rows_per_solver(tmp_path, capsys):
    rng = random.Random(3)
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for i in range(20):
        save_instance(random_instance(rng, rng.randint(2, 8)), corpus / f"i{i:02d}.json")
    out = tmp_path / "bench.csv"
    assert cli.main(["bench", str(corpus), "--algos", "oracle,fes,block", "--jobs", "2", "-o", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == list(cli.BENCH_COLUMNS)
    for algo in ("oracle", "fes", "block"):
        assert sum(r["algo"] == algo for r in rows) == 20
    assert all(r["verdict_matches_oracle"] == "True" for r in rows if r["algo"] != "block")


def test_bench_auto_dispatches(tmp_path, capsys):
    path = _write(tmp_path, "k3.json", K3_TOTAL)
    code, out, _ = _run(capsys, "bench", path, "--algos", "auto")
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert row["algo"] == "auto" and row["feasible"] == "yes" and row["verdict_matches_oracle"] == "True"


def test_bench_unknown_algo(tmp_path, capsys):
    path = _write(tmp_path, "k3.json", K3_TOTAL)
    assert _run(capsys, "bench", path, "--algos", "magic")[0] == 64


def test_console_entry_point(tmp_path):
    path = _write(tmp_path, "k3.json", K3_TOTAL)
    res = subprocess.run([sys.executable, "-m", "pohpp.cli", "solve", path], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == [0, 1, 2]
