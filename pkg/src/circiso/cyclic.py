"""Arithmetic of the cyclic group Z_n.

Points are the integers 0..n-1 under addition mod n. The primes of n are
kept nonincreasing, p_1 >= p_2 >= ... >= p_d, and n_i = p_1 * ... * p_i.

The label tree of the wreath group is addressed top-down. Depth ``j`` of the
tree (``j = 0`` is the root) acts on the digit of prime ``p_{d-j}``, and the
block of a point at depth ``j`` is its residue mod ``moduli[j]``, where
``moduli[j] = n / n_{d-j}``. Blocks at depth ``j`` are the classes of
D_{n_{d-j}}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisorRequired, InputError


def factor(n: int) -> list[int]:
    """Prime factors of ``n`` with multiplicity, largest first."""
    if n < 1:
        raise InputError(f"factor: n must be positive, got {n}")
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    out.sort(reverse=True)
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in set(factor(n)):
        result = result // p * (p - 1)
    return result


def primitive_root(p: int) -> int:
    """Smallest generator of the unit group mod the prime ``p``."""
    if p == 2:
        return 1
    order = p - 1
    qs = set(factor(order))
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in qs):
            return g
    raise InputError(f"{p} is not prime")


@dataclass(frozen=True)
class CyclicContext:
    n: int
    primes: tuple[int, ...]
    tower: tuple[int, ...]
    totient: int
    # weight of digit t_i in x = sum t_i * w_i, listed for i = 1..d
    radix_weights: tuple[int, ...]
    moduli: tuple[int, ...] = field(repr=False)
    radices: tuple[int, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.primes)

    @property
    def node_count(self) -> int:
        return sum(self.moduli[:-1])

    def depth_of_level(self, i: int) -> int:
        """Tree depth carrying the labels of prime p_i (1-based level)."""
        return self.d - i

    def quotient(self) -> "CyclicContext":
        """Context of Z_n / C_{p_1}: blocks of D_{p_1} indexed by x mod n/p_1."""
        if self.n == 1:
            raise InputError("trivial group has no quotient")
        return context(self.n // self.primes[0])

    def divides(self, m: int) -> bool:
        return m >= 1 and self.n % m == 0


@lru_cache(maxsize=None)
def context(n: int) -> CyclicContext:
    primes = tuple(factor(n))
    tower = []
    acc = 1
    for p in primes:
        acc *= p
        tower.append(acc)
    d = len(primes)
    radices = tuple(primes[d - 1 - j] for j in range(d))
    moduli = [1]
    for q in radices:
        moduli.append(moduli[-1] * q)
    weights = tuple(n // t for t in tower)
    return CyclicContext(
        n=n,
        primes=primes,
        tower=tuple(tower),
        totient=euler_phi(n),
        radix_weights=weights,
        moduli=tuple(moduli),
        radices=radices,
    )


def _require_divisor(ctx: CyclicContext, m: int) -> None:
    if not ctx.divides(m):
        raise DivisorRequired(f"{m} does not divide {ctx.n}")


def subgroup_points(ctx: CyclicContext, m: int) -> frozenset[int]:
    """The unique subgroup C_m of order ``m``."""
    _require_divisor(ctx, m)
    step = ctx.n // m
    return frozenset(k * step for k in range(m))


def partition_D(ctx: CyclicContext, m: int) -> list[frozenset[int]]:
    """Cosets of C_m; class ``b`` holds the points with x mod (n/m) == b."""
    _require_divisor(ctx, m)
    step = ctx.n // m
    return [frozenset(b + k * step for k in range(m)) for b in range(step)]


def block_id(ctx: CyclicContext, m: int, x: int) -> int:
    _require_divisor(ctx, m)
    return x % (ctx.n // m)


def digits(ctx: CyclicContext, x: int) -> tuple[int, ...]:
    """Mixed-radix digits ``(t_d, ..., t_1)`` with t_d = x mod p_d."""
    if not 0 <= x < ctx.n:
        raise InputError(f"point {x} out of range for n={ctx.n}")
    out = []
    for q in ctx.radices:
        out.append(x % q)
        x //= q
    return tuple(out)


def undigits(ctx: CyclicContext, ts) -> int:
    ts = tuple(ts)
    if len(ts) != ctx.d:
        raise InputError(f"expected {ctx.d} digits, got {len(ts)}")
    x = 0
    for t, q, w in zip(ts, ctx.radices, ctx.moduli):
        if not 0 <= t < q:
            raise InputError(f"digit {t} out of range for radix {q}")
        x += t * w
    return x


def is_palfy(n: int) -> bool:
    return math.gcd(n, euler_phi(n)) == 1
