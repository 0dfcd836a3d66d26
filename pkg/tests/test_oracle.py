import numpy as np
import pytest

from circiso.cyclic import context
from circiso.errors import BudgetExceeded, NotCayley
from circiso.objects import ColoredHypergraph, RelStruct, apply, is_cayley, random_cayley
from circiso.oracle import (OracleBudget, brute_iso_sym, brute_iso_wr, check_theorem_1,
                            enumerate_wreath, first_iso, wreath_images)
from circiso.perm import Permutation, PermGroup
from circiso.wreath import generators, is_member, order

TRIANGLE = RelStruct.build(3, [(2, [(0, 1), (1, 2), (2, 0)])])
REVERSED = RelStruct.build(3, [(2, [(0, 2), (2, 1), (1, 0)])])
CYCLE4 = RelStruct.build(4, [(2, [(x, (x + 1) % 4) for x in range(4)])])


def test_triangle_counts():
    assert len(brute_iso_sym(TRIANGLE, TRIANGLE)) == 3
    assert len(brute_iso_sym(TRIANGLE, REVERSED)) == 3
    assert brute_iso_sym(TRIANGLE, RelStruct.build(3, [(2, [(0, 1)])])) == []


def test_sym_agrees_with_naive_check():
    X = random_cayley(6, "relstruct", arities=(2, 3), orbits=2, seed=4)
    isos = brute_iso_sym(X, X)
    G = PermGroup(isos, degree=6)
    assert G.order() == len(isos)
    assert all(apply(X, f) == X for f in isos)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 10, 12])
def test_wreath_enumeration_is_the_group(n):
    ctx = context(n)
    perms = {Permutation(row.tolist()) for block in wreath_images(ctx) for row in block}
    assert len(perms) == order(ctx)
    assert all(is_member(ctx, p) for p in list(perms)[:500])
    if order(ctx) <= 5000:
        G = PermGroup([g.to_perm() for g in generators(ctx)], degree=n)
        assert set(G.elements()) == perms


def test_enumerate_wreath_elements():
    ctx = context(4)
    els = enumerate_wreath(ctx)
    assert len(els) == 8 == len(set(els))


def test_wr_examples():
    ctx = context(4)
    empty = RelStruct.build(4, [(2, [])])
    assert len(brute_iso_wr(ctx, empty, empty)) == 8
    assert len(brute_iso_wr(ctx, CYCLE4, CYCLE4)) == 4


def test_budget():
    with pytest.raises(BudgetExceeded):
        brute_iso_sym(RelStruct.build(9, []), RelStruct.build(9, []))
    with pytest.raises(BudgetExceeded):
        brute_iso_wr(context(32), RelStruct.build(32, []), RelStruct.build(32, []))
    small = OracleBudget(max_group_order=10)
    with pytest.raises(BudgetExceeded):
        list(wreath_images(context(12), small))


def test_hypergraph_slots_beyond_bitmask():
    # n * slots > 64 forces the exact python path
    n = 9
    X = ColoredHypergraph.build(n, [(1, [(x + k) % n for k in (0, 1, 3)]) for x in range(n)])
    isos = brute_iso_wr(context(n), X, X)
    assert all(apply(X, f) == X for f in isos)
    assert len(isos) >= n


def test_theorem_1_random_pairs_6():
    for seed in range(100):
        X = random_cayley(6, "relstruct", arities=(2,), orbits=2, seed=seed)
        Y = random_cayley(6, "relstruct", arities=(2,), orbits=2, seed=seed + 1000)
        assert check_theorem_1(X, Y)


def test_theorem_1_on_images():
    rng = np.random.default_rng(5)
    for seed in range(10):
        X = random_cayley(6, "relstruct", arities=(2,), orbits=2, seed=seed)
        Y = apply(X, rng.permutation(6).tolist())
        assert brute_iso_sym(X, Y)
        if is_cayley(Y)[0]:
            assert check_theorem_1(X, Y)


def test_cayley_hypothesis_is_needed():
    # X = {(0,1)}, Y = {(0,2)} on Z_4 are isomorphic in Sym(4), never in Wr(C_4)
    X = RelStruct.build(4, [(2, [(0, 1)])])
    Y = RelStruct.build(4, [(2, [(0, 2)])])
    with pytest.raises(NotCayley):
        check_theorem_1(X, Y)
    assert not check_theorem_1(X, Y, require_cayley=False)


def test_first_iso():
    count, f = first_iso(TRIANGLE, REVERSED)
    assert count == 3 and apply(TRIANGLE, f) == REVERSED
    assert first_iso(TRIANGLE, RelStruct.build(3, [(2, [(0, 1)])])) == (0, None)
