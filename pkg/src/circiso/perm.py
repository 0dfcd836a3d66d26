"""Permutations of {0..N-1} and a deterministic Schreier-Sims chain.

Action is on the right and products read left to right: ``x^(gh) = (x^g)^h``,
so ``compose(g, h)`` applies ``g`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import DomainMismatch, EnumerationTooLarge, InputError

DEFAULT_ELEMENT_CAP = 10**7


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(v) for v in images)
        if sorted(images) != list(range(len(images))):
            raise InputError("images do not form a bijection")
        self.images = images

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                img[a] = b
        return cls(img)

    @classmethod
    def from_function(cls, n: int, f) -> "Permutation":
        return cls(f(x) for x in range(n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else inverse(self)
        k = abs(k)
        out = Permutation.identity(self.degree)
        while k:
            if k & 1:
                out = compose(out, base)
            base = compose(base, base)
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def to_text(self) -> str:
        return f"perm {self.degree}\n" + " ".join(map(str, self.images)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = lines[0].split()
        if len(head) != 2 or head[0] != "perm":
            raise InputError("expected 'perm <N>' header")
        n = int(head[1])
        images = [int(t) for t in " ".join(lines[1:]).split()]
        if len(images) != n:
            raise InputError(f"expected {n} images, got {len(images)}")
        return cls(images)


def compose(g: Permutation, h: Permutation) -> Permutation:
    if g.degree != h.degree:
        raise DomainMismatch(f"degrees {g.degree} and {h.degree} differ")
    hi = h.images
    return Permutation._trusted(tuple(hi[x] for x in g.images))


def inverse(g: Permutation) -> Permutation:
    inv = [0] * g.degree
    for i, v in enumerate(g.images):
        inv[v] = i
    return Permutation._trusted(tuple(inv))


def apply(g: Permutation, x: int) -> int:
    return g.images[x]


def commutator(g: Permutation, h: Permutation) -> Permutation:
    """[g, h] = g^-1 h^-1 g h."""
    return compose(compose(inverse(g), inverse(h)), compose(g, h))


def is_full_cycle(g: Permutation) -> bool:
    n = g.degree
    if n == 0:
        return False
    x, steps = g.images[0], 1
    while x != 0:
        x = g.images[x]
        steps += 1
    return steps == n


def is_partition_invariant(g: Permutation, partition: Iterable[Iterable[int]]) -> bool:
    classes = [frozenset(c) for c in partition]
    as_set = set(classes)
    return all(frozenset(g.images[x] for x in c) in as_set for c in classes)


# --- stabilizer chain ------------------------------------------------------


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(q[x] for x in p)


def _inv(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


@dataclass
class _Level:
    base: int
    gens: list = field(default_factory=list)
    # point -> coset representative u with base^u == point
    trans: dict = field(default_factory=dict)
    checked: set = field(default_factory=set)

    def extend_orbit(self) -> None:
        frontier = list(self.trans)
        while frontier:
            nxt = []
            for x in frontier:
                ux = self.trans[x]
                for s in self.gens:
                    y = s[x]
                    if y not in self.trans:
                        self.trans[y] = _mul(ux, s)
                        nxt.append(y)
            frontier = nxt


class PermGroup:
    """Group generated by ``generators``, backed by a stabilizer chain."""

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 cap: int = DEFAULT_ELEMENT_CAP):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise InputError("degree required for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainMismatch("generators act on different domains")
        self.degree = degree
        self.generators = gens
        self.cap = cap
        self._id = tuple(range(degree))
        self._levels: list[_Level] = []
        for g in gens:
            self._add(g.images)

    # chain maintenance

    def _sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for k in range(start, len(self._levels)):
            lvl = self._levels[k]
            x = g[lvl.base]
            u = lvl.trans.get(x)
            if u is None:
                return g, k
            g = _mul(g, _inv(u))
        return g, len(self._levels)

    def _insert(self, h: tuple, lo: int, hi: int) -> None:
        # h fixes the base points of levels < hi; it joins S_l for lo <= l <= hi
        if hi == len(self._levels):
            moved = next(i for i, v in enumerate(h) if i != v)
            self._levels.append(_Level(moved, trans={moved: self._id}))
        for lv in range(lo, hi + 1):
            lvl = self._levels[lv]
            lvl.gens.append(h)
            lvl.extend_orbit()

    def _add(self, g: tuple) -> bool:
        h, j = self._sift(g)
        if h == self._id:
            return False
        self._insert(h, 0, j)
        self._complete(j)
        return True

    def _complete(self, top: int) -> None:
        i = top
        while i >= 0:
            lvl = self._levels[i]
            jumped = False
            for x in list(lvl.trans):
                ux = lvl.trans[x]
                for gi, s in enumerate(lvl.gens):
                    key = (x, gi)
                    if key in lvl.checked:
                        continue
                    lvl.checked.add(key)
                    y = s[x]
                    sch = _mul(_mul(ux, s), _inv(lvl.trans[y]))
                    if sch == self._id:
                        continue
                    h, j = self._sift(sch, i + 1)
                    if h != self._id:
                        self._insert(h, i + 1, j)
                        i = j
                        jumped = True
                        break
                if jumped:
                    break
            if not jumped:
                i -= 1

    # queries

    def order(self) -> int:
        return math.prod(len(lvl.trans) for lvl in self._levels)

    def base(self) -> list[int]:
        return [lvl.base for lvl in self._levels]

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self._sift(g.images)
        return h == self._id

    def elements(self) -> Iterator[Permutation]:
        if self.order() > self.cap:
            raise EnumerationTooLarge(f"group order {self.order()} exceeds cap {self.cap}")

        def rec(k: int, acc: tuple):
            if k < 0:
                yield Permutation._trusted(acc)
                return
            for u in self._levels[k].trans.values():
                yield from rec(k - 1, _mul(acc, u))

        yield from rec(len(self._levels) - 1, self._id)

    def is_trivial(self) -> bool:
        return not self._levels

    def derived_subgroup(self) -> "PermGroup":
        """Normal closure of the commutators of the generators."""
        gens = [Permutation._trusted(s) for s in self._strong_generators()]
        sub = PermGroup([], degree=self.degree, cap=self.cap)
        pool = []
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                c = commutator(a, b)
                if sub._add(c.images):
                    sub.generators.append(c)
                    pool.append(c)
        while pool:
            x = pool.pop()
            for g in gens:
                c = compose(compose(inverse(g), x), g)
                if sub._add(c.images):
                    sub.generators.append(c)
                    pool.append(c)
        return sub

    def _strong_generators(self) -> list[tuple]:
        seen = []
        for lvl in self._levels:
            for s in lvl.gens:
                if s not in seen:
                    seen.append(s)
        return seen or [self._id]

    def derived_series(self) -> list["PermGroup"]:
        series = [self]
        while True:
            nxt = series[-1].derived_subgroup()
            if nxt.order() == series[-1].order():
                return series
            series.append(nxt)

    def is_solvable(self) -> bool:
        return self.derived_series()[-1].is_trivial()


def group(generators: Iterable[Permutation], degree: int | None = None,
          cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
    return PermGroup(generators, degree=degree, cap=cap)
