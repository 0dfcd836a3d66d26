import subprocess
import sys

import pytest

from circiso.cli import run
from circiso.objects import RelStruct, apply, load, save
from circiso.perm import Permutation
from circiso.wreath import parse_coset

T = RelStruct.build(5, [(2, [(x, (x + 1) % 5) for x in range(5)])])


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        save(obj, p)
        return str(p)
    return write


def _perm_from_stdout(out):
    lines = out.splitlines()
    i = next(k for k, ln in enumerate(lines) if ln.startswith("perm "))
    return Permutation.from_text("\n".join(lines[i:i + 2]))


def test_iso_prints_verified_permutation(files, tmp_path, capsys):
    T2 = apply(T, Permutation.from_function(5, lambda x: 2 * x % 5))
    coset = tmp_path / "c.txt"
    rc = run(["iso", files("t.rs", T), files("t2.rs", T2), "--coset-out", str(coset)])
    out = capsys.readouterr().out
    assert rc == 0 and out.startswith("isomorphic")
    assert apply(T, _perm_from_stdout(out)) == T2
    status, rep, gens, order = parse_coset(coset.read_text())
    assert status == "nonempty" and order == 5


def test_iso_mismatched_counts_exit_1(files, capsys):
    B = RelStruct.build(5, [(2, [(x, (x + 1) % 5) for x in range(5)]), (1, [(x,) for x in range(5)])])
    assert run(["iso", files("a.rs", T), files("b.rs", B)]) == 1
    assert capsys.readouterr().out.startswith("non-isomorphic")


def test_group_info_12(capsys):
    assert run(["group", "info", "12"]) == 0
    assert "order 10368" in capsys.readouterr().out.splitlines()


def test_usage_errors(files, capsys, tmp_path):
    hg = tmp_path / "h.hg"
    hg.write_text("hypergraph 5 1 0\n")
    assert run(["iso", files("a.rs", T), str(hg)]) == 2
    assert "mixed" in capsys.readouterr().err
    assert run(["iso", files("a.rs", T)]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["factor", "12", "--bogus"]) == 2
    bad = tmp_path / "bad.rs"
    bad.write_text("relstruct 3 1\nrel 2 1\n0 7\n")
    assert run(["aut", str(bad)]) == 2
    assert "E_INDEX_OUT_OF_RANGE" in capsys.readouterr().err
    assert run(["iso", str(tmp_path / "missing.rs"), str(bad)]) == 2


def test_non_cayley_refused_then_allowed(files, capsys):
    X = RelStruct.build(4, [(2, [(0, 1)])])
    assert run(["iso", files("x.rs", X), files("y.rs", X)]) == 2
    assert "E_NOT_CAYLEY" in capsys.readouterr().err
    assert run(["iso", files("x.rs", X), files("y.rs", X), "--allow-non-cayley"]) == 0


def test_limit_exit_3(files, capsys):
    from circiso.objects import random_cayley

    X = random_cayley(32, "relstruct", orbits=3, seed=1)
    assert run(["aut", files("x.rs", X), "--branch-limit", "2"]) == 3
    assert "progress" in capsys.readouterr().err


def test_gen_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["gen", "--n", "12", "--kind", "hypergraph", "--edge-size", "2", "3", "--seed", "9"]
    assert run(args + ["-o", str(a)]) == 0 and run(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(args) == 0
    assert capsys.readouterr().out == a.read_text()


def test_require_seed(capsys):
    assert run(["--require-seed", "gen", "--n", "6"]) == 2
    assert run(["--require-seed", "group", "sample", "6"]) == 2
    assert run(["--require-seed", "gen", "--n", "6", "--seed", "1"]) == 0


def test_gen_image_and_iso(tmp_path, capsys):
    a, b = tmp_path / "a.rs", tmp_path / "b.rs"
    run(["gen", "--n", "16", "--seed", "3", "--orbits", "2", "-o", str(a)])
    run(["gen", "--n", "16", "--seed", "3", "--orbits", "2", "--image", "-o", str(b)])
    capsys.readouterr()
    assert run(["iso", str(a), str(b), "--allow-non-cayley", "--parallel"]) == 0
    out = capsys.readouterr().out
    assert apply(load(a), _perm_from_stdout(out)) == load(b)


def test_aut_encode_oracle_palfy(files, capsys, tmp_path):
    path = files("t.rs", T)
    assert run(["aut", path]) == 0
    assert "order 5" in capsys.readouterr().out
    out = tmp_path / "enc.hg"
    assert run(["encode", path, "-o", str(out)]) == 0
    assert out.read_text().startswith("hypergraph 5 2 ")
    assert run(["oracle", "iso", path, path]) == 0
    text = capsys.readouterr().out
    assert "count 5" in text and apply(T, _perm_from_stdout(text)) == T
    T2 = RelStruct.build(5, [(2, [(x, (x + 2) % 5) for x in range(5)])])
    assert run(["palfy", path, files("t2.rs", T2)]) == 0
    assert apply(T, _perm_from_stdout(capsys.readouterr().out)) == T2
    assert run(["palfy", files("s.rs", RelStruct.build(12, [])), files("s2.rs", RelStruct.build(12, []))]) == 2


def test_factor_and_sample(capsys):
    assert run(["factor", "360"]) == 0
    assert "primes 5 3 3 2 2 2" in capsys.readouterr().out
    assert run(["group", "sample", "12", "--seed", "4", "--tree"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "perm 12"
    assert len(out) == 2 + 1 + 2 + 4


def test_bench_csv(capsys):
    assert run(["bench", "--n-max", "8", "--seed", "1", "--trials", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,kind,backend,trial,edges,seconds,verdict"
    assert {ln.split(",")[2] for ln in lines[1:]} == {"numba", "numpy"}
    assert all(ln.endswith("isomorphic") for ln in lines[1:])


def test_module_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "circiso", "factor", "12"], capture_output=True, text=True)
    assert out.returncode == 0 and "tower 3 6 12" in out.stdout
