import itertools

import pytest
from hypothesis import given, strategies as st

from circiso.errors import DomainMismatch, EnumerationTooLarge, InputError
from circiso.perm import (Permutation, PermGroup, apply, commutator, compose, inverse,
                          is_full_cycle, is_partition_invariant)


def perms(n):
    return st.permutations(list(range(n))).map(Permutation)


def closure(gens, n):
    """Reference: breadth-first closure under right multiplication."""
    ident = Permutation.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_compose_left_to_right():
    g = Permutation.from_cycles(3, (0, 1, 2))
    h = Permutation.from_cycles(3, (0, 1))
    assert apply(compose(g, h), 0) == 0
    assert compose(g, h)(1) == h(g(1))


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(perms(n), perms(n), perms(n))))
def test_group_laws(t):
    f, g, h = t
    n = f.degree
    e = Permutation.identity(n)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(g, inverse(g)) == e == compose(inverse(g), g)
    assert all(apply(e, x) == x for x in range(n))
    assert commutator(f, g) == inverse(f) * inverse(g) * f * g


@given(st.integers(1, 9).flatmap(perms))
def test_text_roundtrip_and_cycles(p):
    assert Permutation.from_text(p.to_text()) == p
    assert Permutation.from_cycles(p.degree, *p.cycles()) == p


def test_constructor_validation():
    with pytest.raises(InputError):
        Permutation([0, 0, 1])
    with pytest.raises(DomainMismatch):
        compose(Permutation.identity(3), Permutation.identity(4))
    with pytest.raises(InputError):
        Permutation.from_text("perm 3\n0 1\n")


def test_full_cycle_and_partition():
    z = Permutation.from_function(12, lambda x: (x + 1) % 12)
    assert is_full_cycle(z)
    assert not is_full_cycle(Permutation.from_function(12, lambda x: (x + 2) % 12))
    swap = Permutation.from_cycles(4, (0, 1))
    assert not is_partition_invariant(swap, [{0, 2}, {1, 3}])
    assert {swap(0), swap(2)} == {1, 2}


def test_examples_orders():
    s3 = PermGroup([Permutation.from_cycles(3, (0, 1, 2)), Permutation.from_cycles(3, (0, 1))])
    assert s3.order() == 6 and s3.is_solvable()
    c5 = PermGroup([Permutation.from_cycles(5, (0, 1, 2, 3, 4))])
    assert c5.order() == 5
    assert c5.contains(Permutation.from_cycles(5, (0, 2, 4, 1, 3)))
    assert not c5.contains(Permutation.from_cycles(5, (0, 1)))


def test_solvability():
    s4 = PermGroup([Permutation.from_cycles(4, (0, 1, 2, 3)), Permutation.from_cycles(4, (0, 1))])
    orders = [G.order() for G in s4.derived_series()]
    assert orders == [24, 12, 4, 1]
    a5 = PermGroup([Permutation.from_cycles(5, (0, 1, 2)), Permutation.from_cycles(5, (0, 1, 2, 3, 4))])
    assert a5.order() == 60
    assert not a5.is_solvable()


@given(st.integers(2, 7).flatmap(lambda n: st.lists(perms(n), min_size=1, max_size=3)))
def test_order_and_contains_match_closure(gens):
    n = gens[0].degree
    G = PermGroup(gens)
    ref = closure(gens, n)
    assert G.order() == len(ref)
    assert set(G.elements()) == ref
    for p in itertools.islice(itertools.permutations(range(n)), 200):
        q = Permutation(p)
        assert G.contains(q) == (q in ref)


def test_element_cap():
    s8 = PermGroup([Permutation.from_cycles(8, tuple(range(8))), Permutation.from_cycles(8, (0, 1))], cap=100)
    assert s8.order() == 40320
    with pytest.raises(EnumerationTooLarge):
        next(s8.elements())


def test_deterministic_chain():
    gens = [Permutation.from_cycles(6, (0, 1, 2, 3, 4, 5)), Permutation.from_cycles(6, (1, 5), (2, 4))]
    a, b = PermGroup(gens), PermGroup(gens)
    assert a.base() == b.base()
    assert list(a.elements()) == list(b.elements())
