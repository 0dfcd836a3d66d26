"""Acceptance criteria 1-10; each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the summary lines are
repeated at the end of the session).
"""

import math
import time
import warnings

import numpy as np

from circiso.cyclic import context, partition_D
from circiso.encode import hat_lemma_check
from circiso.errors import NotMember
from circiso.objects import apply, is_cayley, random_cayley
from circiso.oracle import brute_iso_sym, brute_iso_wr
from circiso.perm import Permutation, PermGroup, is_full_cycle, is_partition_invariant
from circiso.solver import iso, iso_relstruct, palfy_iso
from circiso.wreath import (conj_full_cycle_to_standard, from_perm, generators, holomorph_affine,
                            membership_eqwr, order, sample_uniform)

from conftest import ACCEPTANCE_LINES


def report(num, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def z(n):
    return Permutation.from_function(n, lambda x: (x + 1) % n)


def cayley_twin(X, rng):
    """A Cayley object isomorphic to X through a random element of Wr(C).

    X^f is invariant under h = f^-1 z f, a full cycle of Wr(C); with
    k^-1 h k = z the image X^(f k) is invariant under z again.
    """
    ctx = context(X.n)
    f = sample_uniform(ctx, rng)
    h = f.to_perm() ** -1 * z(X.n) * f.to_perm()
    k = conj_full_cycle_to_standard(ctx, h)
    g = f.to_perm() * k.to_perm()
    Y = apply(X, g)
    assert is_cayley(Y)[0]
    return Y, g


def random_object(n, rng, kinds=("relstruct", "hypergraph")):
    kind = kinds[int(rng.integers(len(kinds)))]
    seed = int(rng.integers(2**31))
    orbits = int(rng.integers(1, 4))
    if kind == "relstruct":
        arities = [(2,), (2, 1), (2, 2), (3,)][int(rng.integers(4))]
        return random_cayley(n, kind, arities=arities, orbits=orbits, seed=seed)
    sizes = [(2,), (3,), (2, 3)][int(rng.integers(3))]
    sizes = tuple(min(s, n) for s in sizes)
    return random_cayley(n, kind, edge_sizes=sizes, orbits=orbits, seed=seed)


def random_cayley_pair(n, rng, i):
    """Cycle through independent draws, affine images and Wr-twins."""
    X = random_object(n, rng)
    mode = i % 3
    if mode == 0:
        kind = "relstruct" if hasattr(X, "relations") else "hypergraph"
        return X, random_object(n, rng, (kind,))
    if mode == 1:
        units = [a for a in range(1, max(n, 2)) if math.gcd(a, n) == 1]
        a = units[int(rng.integers(len(units)))]
        return X, apply(X, holomorph_affine(context(n), a, int(rng.integers(n))))
    return X, cayley_twin(X, rng)[0]


# 1 -------------------------------------------------------------------------


def test_criterion_01_group_order():
    t0 = time.perf_counter()
    bad = []
    for n in (2, 3, 4, 6, 8, 9, 12, 16, 18):
        ctx = context(n)
        got = PermGroup([g.to_perm() for g in generators(ctx)], degree=n).order()
        if got != order(ctx):
            bad.append((n, got, order(ctx)))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10 and order(context(12)) == 10368
    assert report(1, ok, f"chain order = formula for 9 sizes, mismatches={bad}, {dt:.2f}s (<10s)")


# 2 -------------------------------------------------------------------------


def test_criterion_02_solvable_blocks_affine():
    t0 = time.perf_counter()
    rng = np.random.default_rng(151118)
    failures = []
    for n in range(2, 17):
        ctx = context(n)
        G = PermGroup([g.to_perm() for g in generators(ctx)], degree=n)
        if not G.is_solvable():
            failures.append(("solvable", n))
        parts = [partition_D(ctx, t) for t in ctx.tower]
        for _ in range(1000):
            p = sample_uniform(ctx, rng).to_perm()
            if not all(is_partition_invariant(p, P) for P in parts):
                failures.append(("blocks", n))
                break
        for a in range(1, max(n, 2)):
            if math.gcd(a, n) != 1:
                continue
            for b in range(n):
                if not membership_eqwr(ctx, holomorph_affine(ctx, a, b)):
                    failures.append(("affine", n, a, b))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30
    assert report(2, ok, f"n=2..16 solvable, 1000 samples keep D-blocks, affine maps members; "
                         f"failures={failures[:3]}, {dt:.2f}s (<30s)")


# 3 -------------------------------------------------------------------------


def _from_perm_ok(ctx, p):
    try:
        from_perm(ctx, p)
        return True
    except NotMember:
        return False


def test_criterion_03_membership_equivalence():
    import itertools

    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    disagree = 0
    checked = 0
    members = 0
    for n in range(1, 7):
        ctx = context(n)
        for p in itertools.permutations(range(n)):
            q = Permutation(p)
            a, b = _from_perm_ok(ctx, q), membership_eqwr(ctx, q)
            disagree += a != b
            members += a
            checked += 1
    for n in (8, 9, 12):
        ctx = context(n)
        for _ in range(10_000):
            q = Permutation(rng.permutation(n).tolist())
            a, b = _from_perm_ok(ctx, q), membership_eqwr(ctx, q)
            disagree += a != b
            members += a
            checked += 1
    dt = time.perf_counter() - t0
    ok = disagree == 0 and dt < 60
    assert report(3, ok, f"{checked} permutations, {members} members, {disagree} disagreements, "
                         f"{dt:.2f}s (<60s)")


# 4 -------------------------------------------------------------------------


def test_criterion_04_full_cycle_conjugacy():
    t0 = time.perf_counter()
    rng = np.random.default_rng(201117)
    bad = 0
    total = 0
    for n in (4, 6, 8, 9, 12):
        ctx = context(n)
        done = 0
        while done < 200:
            h = sample_uniform(ctx, rng).to_perm()
            if not is_full_cycle(h):
                continue
            k = conj_full_cycle_to_standard(ctx, h).to_perm()
            if not (k ** -1 * h * k == z(n) and membership_eqwr(ctx, k)):
                bad += 1
            done += 1
            total += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    assert report(4, ok, f"{total} full cycles conjugated to x->x+1, {bad} failures, {dt:.2f}s (<60s)")


# 5 -------------------------------------------------------------------------


def test_criterion_05_hat_lemma():
    t0 = time.perf_counter()
    rng = np.random.default_rng(250618)
    results = []
    arity_for_m = {1: (1,), 2: (2, 1), 3: (3, 2)}
    # full symmetric group on the copies
    for n, m in ((3, 2), (4, 2)):
        for i in range(3):
            X = random_cayley(n, "relstruct", arities=arity_for_m[m], orbits=1, seed=int(rng.integers(2**31)))
            Y = X if i == 0 else (cayley_twin(X, rng)[0] if i == 1 else
                                  random_cayley(n, "relstruct", arities=arity_for_m[m], orbits=1,
                                                seed=int(rng.integers(2**31))))
            results.append(hat_lemma_check(X, Y, universe="sym"))
    # hats of the whole of Wr(C)
    for n in range(2, 9):
        for m in (1, 2, 3):
            for i in range(3):
                X = random_cayley(n, "relstruct", arities=arity_for_m[m], orbits=2,
                                  seed=int(rng.integers(2**31)))
                Y = X if i == 0 else (cayley_twin(X, rng)[0] if i == 1 else
                                      random_cayley(n, "relstruct", arities=arity_for_m[m], orbits=2,
                                                    seed=int(rng.integers(2**31))))
                results.append(hat_lemma_check(X, Y, universe="wr"))
    dt = time.perf_counter() - t0
    ok = all(results) and dt < 120
    assert report(5, ok, f"{len(results)} checks (Sym for (3,2),(4,2); Wr up to (8,3)), "
                         f"{results.count(False)} false, {dt:.2f}s (<120s)")


# 6 -------------------------------------------------------------------------


def test_criterion_06_solver_equals_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    bad = []
    nonempty = 0
    for n in (4, 6, 8, 9, 12, 16):
        ctx = context(n)
        for i in range(100):
            X, Y = random_cayley_pair(n, rng, i)
            brute = brute_iso_wr(ctx, X, Y)
            r = iso(X, Y)
            if not r.isomorphic:
                if brute:
                    bad.append((n, i, "missed"))
                continue
            nonempty += 1
            c = r.coset
            if c.order != len(brute) or not all(c.contains(f) for f in brute):
                bad.append((n, i, c.order, len(brute)))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 600
    assert report(6, ok, f"600 pairs, {nonempty} nonempty cosets, mismatches={bad[:3]}, {dt:.1f}s (<600s)")


# 7 -------------------------------------------------------------------------


def test_criterion_07_sym_iff_wr():
    t0 = time.perf_counter()
    rng = np.random.default_rng(81117)
    bad = []
    positives = 0
    for n in (4, 5, 6, 7, 8):
        for i in range(100):
            X, Y = random_cayley_pair(n, rng, i)
            sym = bool(brute_iso_sym(X, Y))
            r = iso(X, Y)
            positives += sym
            if sym != r.isomorphic:
                bad.append((n, i, sym))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 600
    assert report(7, ok, f"500 pairs, {positives} isomorphic in Sym(n), disagreements={bad[:3]}, "
                         f"{dt:.1f}s (<600s)")


# 8 -------------------------------------------------------------------------


def test_criterion_08_palfy_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(15)
    bad = []
    positives = 0
    for n in (15, 33):
        for i in range(100):
            X = random_object(n, rng, ("relstruct",))
            if i % 2:
                units = [a for a in range(1, n) if math.gcd(a, n) == 1]
                Y = apply(X, holomorph_affine(context(n), units[int(rng.integers(len(units)))],
                                              int(rng.integers(n))))
            else:
                Y = random_object(n, rng, ("relstruct",))
            f = palfy_iso(X, Y)
            r = iso_relstruct(X, Y)
            positives += r.isomorphic
            if (f is not None) != r.isomorphic or (f is not None and apply(X, f) != Y):
                bad.append((n, i))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    assert report(8, ok, f"200 pairs over n=15,33, {positives} isomorphic, disagreements={bad[:3]}, "
                         f"{dt:.1f}s (<300s)")


# 9 -------------------------------------------------------------------------


def test_criterion_09_generated_pairs():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    sizes = list(range(2, 65))
    bad = []
    for i in range(1000):
        n = sizes[i % len(sizes)]
        X = random_object(n, rng)
        f = sample_uniform(context(n), rng).to_perm()
        Y = apply(X, f)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            # Y = X^f is in general not circulant, so the override is required
            r = iso(X, Y, allow_non_cayley=True)
        if not r.isomorphic or apply(X, r.representative) != Y or not r.coset.contains(f):
            bad.append((i, n))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 600
    assert report(9, ok, f"1000 pairs (X, X^f), f in Wr(C), n=2..64, failures={bad[:3]}, {dt:.1f}s (<600s)")


# 10 ------------------------------------------------------------------------


def _scaling_instance(n, kind, rng):
    seed = int(rng.integers(2**31))
    if kind == "relstruct":
        X = random_cayley(n, "relstruct", arities=(2,), orbits=4, seed=seed)
    else:
        X = random_cayley(n, "hypergraph", edge_sizes=(2, 3), orbits=2, seed=seed)
    Y, _ = cayley_twin(X, rng)
    return X, Y


def test_criterion_10_scaling():
    rng = np.random.default_rng(211117)
    sizes = (32, 64, 128, 255)
    trials = 5
    medians, worst = {}, {}
    verdict_ok = True
    for n in sizes:
        times = []
        for kind in ("relstruct", "hypergraph"):
            for _ in range(trials):
                X, Y = _scaling_instance(n, kind, rng)
                edges = sum(len(r) for r in X.relations) if kind == "relstruct" else len(X.edges)
                assert edges <= 4 * n
                t0 = time.perf_counter()
                r = iso(X, Y)
                times.append(time.perf_counter() - t0)
                verdict_ok &= r.isomorphic and apply(X, r.representative) == Y
        medians[n] = float(np.median(times))
        worst[n] = max(times)
    hard = [n for n in sizes if n <= 128]
    slope = float(np.polyfit(np.log(hard), np.log([medians[n] for n in hard]), 1)[0])
    slope_all = float(np.polyfit(np.log(sizes), np.log([medians[n] for n in sizes]), 1)[0])
    ok = verdict_ok and all(worst[n] < 60 for n in hard) and slope <= 3
    table = ", ".join(f"n={n}: median {medians[n]:.3f}s max {worst[n]:.3f}s" for n in sizes)
    report_only = f"n=255 (report only) max {worst[255]:.2f}s {'<' if worst[255] < 60 else '>='} 60s"
    assert report(10, ok, f"{table}; slope n<=128 = {slope:.2f} (<=3), all sizes = {slope_all:.2f}; "
                          f"{report_only}")
