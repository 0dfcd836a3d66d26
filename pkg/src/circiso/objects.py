"""Relational structures and colored hypergraphs over Z_n, with text I/O.

Hypergraph vertices are pairs ``(v, c)`` with ``c`` in 1..copies; permutations
act on ``v`` and leave the copy index alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (ArityMismatch, DomainMismatch, DuplicateTuple, IndexOutOfRange,
                     InputError, MalformedHeader, ParseError)
from .perm import Permutation


@dataclass(frozen=True, eq=False)
class Relation:
    arity: int
    tuples: tuple[tuple[int, ...], ...]

    def as_set(self) -> frozenset:
        return frozenset(self.tuples)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Relation) and self.arity == other.arity
                and self.as_set() == other.as_set())

    def __hash__(self) -> int:
        return hash((self.arity, self.as_set()))

    def __len__(self) -> int:
        return len(self.tuples)


@dataclass(frozen=True, eq=False)
class RelStruct:
    n: int
    relations: tuple[Relation, ...]

    def __post_init__(self):
        for rel in self.relations:
            if rel.arity < 1:
                raise ArityMismatch("arity must be at least 1")
            seen = set()
            for t in rel.tuples:
                if len(t) != rel.arity:
                    raise ArityMismatch(f"tuple {t} does not have arity {rel.arity}")
                if any(not 0 <= v < self.n for v in t):
                    raise IndexOutOfRange(f"tuple {t} has an index outside 0..{self.n - 1}")
                if t in seen:
                    raise DuplicateTuple(f"duplicate tuple {t}")
                seen.add(t)

    @classmethod
    def build(cls, n: int, relations: Iterable[tuple[int, Iterable[Sequence[int]]]]) -> "RelStruct":
        return cls(n, tuple(Relation(a, tuple(tuple(int(v) for v in t) for t in ts))
                            for a, ts in relations))

    @property
    def k(self) -> int:
        return len(self.relations)

    @property
    def max_arity(self) -> int:
        return max((r.arity for r in self.relations), default=1)

    def signature(self) -> tuple:
        return tuple((r.arity, len(r)) for r in self.relations)

    def __eq__(self, other) -> bool:
        return isinstance(other, RelStruct) and self.n == other.n and self.relations == other.relations

    def __hash__(self) -> int:
        return hash((self.n, self.relations))


@dataclass(frozen=True, eq=False)
class ColoredHypergraph:
    n: int
    copies: int
    edges: tuple[tuple[int, frozenset], ...]

    def __post_init__(self):
        if self.copies < 1:
            raise MalformedHeader("copies must be positive")
        seen = set()
        for color, verts in self.edges:
            if color < 1:
                raise InputError(f"edge color {color} must be positive")
            for v, c in verts:
                if not 0 <= v < self.n or not 1 <= c <= self.copies:
                    raise IndexOutOfRange(f"vertex {v}:{c} out of range")
            if (color, verts) in seen:
                raise DuplicateTuple(f"duplicate edge of color {color}")
            seen.add((color, verts))

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[int, Iterable]], copies: int = 1) -> "ColoredHypergraph":
        """Edges as ``(color, vertices)``; bare ints are taken as copy 1."""
        out = []
        for color, verts in edges:
            vs = frozenset((v, 1) if isinstance(v, (int, np.integer)) else (int(v[0]), int(v[1]))
                           for v in verts)
            vs = frozenset((int(v), int(c)) for v, c in vs)
            out.append((int(color), vs))
        return cls(n, copies, tuple(out))

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def colors(self) -> list[int]:
        return sorted({c for c, _ in self.edges})

    def __eq__(self, other) -> bool:
        return (isinstance(other, ColoredHypergraph) and self.n == other.n
                and self.copies == other.copies and self.edge_set() == other.edge_set())

    def __hash__(self) -> int:
        return hash((self.n, self.copies, self.edge_set()))


def size(obj) -> int:
    if isinstance(obj, RelStruct):
        return obj.n + sum(len(r) for r in obj.relations)
    return obj.n * obj.copies + sum(len(e) for _, e in obj.edges)


def _images(f, n: int) -> Sequence[int]:
    if isinstance(f, Permutation):
        img = f.images
    elif hasattr(f, "images"):
        img = [int(v) for v in f.images()]
    else:
        img = list(f)
    if len(img) != n:
        raise DomainMismatch(f"permutation of degree {len(img)} applied to object on {n} points")
    return img


def apply(obj, f):
    """The image ``obj^f``; relation and edge order is kept."""
    img = _images(f, obj.n)
    if isinstance(obj, RelStruct):
        rels = tuple(Relation(r.arity, tuple(tuple(img[v] for v in t) for t in r.tuples))
                     for r in obj.relations)
        return RelStruct(obj.n, rels)
    edges = tuple((col, frozenset((img[v], c) for v, c in e)) for col, e in obj.edges)
    return ColoredHypergraph(obj.n, obj.copies, edges)


def is_cayley(obj) -> tuple[bool, object]:
    """Whether x -> x+1 preserves the object; returns ``(ok, witness)``."""
    n = obj.n
    if isinstance(obj, RelStruct):
        for i, rel in enumerate(obj.relations):
            tuples = rel.as_set()
            for t in rel.tuples:
                image = tuple((v + 1) % n for v in t)
                if image not in tuples:
                    return False, {"relation": i, "tuple": t, "image": image}
        return True, None
    if obj.copies != 1:
        raise InputError("Cayley test for hypergraphs needs copies = 1")
    edges = obj.edge_set()
    for col, e in obj.edges:
        image = (col, frozenset(((v + 1) % n, c) for v, c in e))
        if image not in edges:
            return False, {"color": col, "edge": sorted(v for v, _ in e)}
    return True, None


# --- random generation -----------------------------------------------------


def _orbit(n: int, t: tuple) -> list[tuple]:
    out = [t]
    cur = t
    while True:
        cur = tuple((v + 1) % n for v in cur)
        if cur == t:
            return out
        out.append(cur)


def random_cayley(n: int, kind: str = "relstruct", *, arities: Sequence[int] = (2,),
                  edge_sizes: Sequence[int] = (2,), density: float | None = 0.25,
                  orbits: int | None = None, seed: int = 0):
    """Random circulant object built from z-orbits.

    Each relation (or edge color class) is a union of orbits of uniformly drawn
    tuples (or vertex sets). With ``orbits`` set, exactly that many draws are
    made per class; otherwise orbits are added until the class reaches
    ``density`` of its ambient size.
    """
    rng = np.random.default_rng(seed)
    shapes = list(arities if kind == "relstruct" else edge_sizes)
    classes = []
    for ell in shapes:
        if kind == "relstruct":
            ambient = n ** ell
        else:
            ambient = math.comb(n, ell)
        members: dict = {}
        draws = orbits if orbits is not None else None
        target = None if draws is not None else int(round((density or 0.0) * ambient))
        attempts = 0
        while True:
            if draws is not None:
                if attempts >= draws:
                    break
            elif len(members) >= target or attempts > 50 * max(1, target):
                break
            attempts += 1
            if kind == "relstruct":
                t = tuple(int(v) for v in rng.integers(0, n, size=ell))
                key = t
                orb = _orbit(n, t)
            else:
                vs = tuple(sorted(int(v) for v in rng.choice(n, size=ell, replace=False)))
                key = vs
                orb = []
                seen = set()
                cur = frozenset(vs)
                while cur not in seen:
                    seen.add(cur)
                    orb.append(tuple(sorted(cur)))
                    cur = frozenset((v + 1) % n for v in cur)
            if key in members:
                continue
            for o in orb:
                members[o] = True
        classes.append((ell, list(members)))
    if kind == "relstruct":
        return RelStruct.build(n, classes)
    if kind == "hypergraph":
        return ColoredHypergraph.build(n, [(i + 1, vs) for i, (_, ms) in enumerate(classes) for vs in ms])
    raise InputError(f"unknown kind {kind!r}")


# --- text format -------------------------------------------------------------


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        out.append((no, s))
    return out


def _ints(tokens, line, what="integer") -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected {what}s, got {' '.join(tokens)!r}", line) from None


def detect_kind(text: str) -> str:
    lines = _content_lines(text)
    if not lines:
        raise MalformedHeader("empty input")
    kw = lines[0][1].split()[0]
    if kw not in ("relstruct", "hypergraph"):
        raise MalformedHeader(f"unknown header keyword {kw!r}", lines[0][0])
    return kw


def parse(text: str):
    return parse_relstruct(text) if detect_kind(text) == "relstruct" else parse_hypergraph(text)


def parse_relstruct(text: str) -> RelStruct:
    lines = _content_lines(text)
    if not lines:
        raise MalformedHeader("empty input")
    no, head = lines[0]
    toks = head.split()
    if len(toks) != 3 or toks[0] != "relstruct":
        raise MalformedHeader("expected 'relstruct <n> <k>'", no)
    n, k = _ints(toks[1:], no)
    if n < 1 or k < 0:
        raise MalformedHeader("n must be positive and k nonnegative", no)
    pos = 1
    rels = []
    for _ in range(k):
        if pos >= len(lines):
            raise MalformedHeader("missing 'rel' header", lines[-1][0])
        no, s = lines[pos]
        toks = s.split()
        if len(toks) != 3 or toks[0] != "rel":
            raise MalformedHeader("expected 'rel <arity> <count>'", no)
        arity, count = _ints(toks[1:], no)
        if arity < 1 or count < 0:
            raise MalformedHeader("arity must be positive and count nonnegative", no)
        pos += 1
        seen = set()
        tuples = []
        for _ in range(count):
            if pos >= len(lines):
                raise MalformedHeader("relation ends early", lines[-1][0])
            no, s = lines[pos]
            pos += 1
            vals = _ints(s.split(), no)
            if len(vals) != arity:
                raise ArityMismatch(f"tuple has {len(vals)} entries, arity is {arity}", no)
            if any(not 0 <= v < n for v in vals):
                raise IndexOutOfRange(f"index outside 0..{n - 1}", no)
            t = tuple(vals)
            if t in seen:
                raise DuplicateTuple(f"duplicate tuple {t}", no)
            seen.add(t)
            tuples.append(t)
        rels.append(Relation(arity, tuple(tuples)))
    if pos != len(lines):
        raise MalformedHeader("trailing content after last relation", lines[pos][0])
    return RelStruct(n, tuple(rels))


def _vertex(tok: str, copies: int, line: int) -> tuple[int, int]:
    if ":" in tok:
        v, c = tok.split(":", 1)
        vals = _ints([v, c], line, "vertex")
        return vals[0], vals[1]
    if copies != 1:
        raise ParseError(f"vertex {tok!r} needs a copy index (v:c)", line)
    return _ints([tok], line, "vertex")[0], 1


def parse_hypergraph(text: str) -> ColoredHypergraph:
    lines = _content_lines(text)
    if not lines:
        raise MalformedHeader("empty input")
    no, head = lines[0]
    toks = head.split()
    if len(toks) != 4 or toks[0] != "hypergraph":
        raise MalformedHeader("expected 'hypergraph <n> <copies> <edgecount>'", no)
    n, copies, count = _ints(toks[1:], no)
    if n < 1 or copies < 1 or count < 0:
        raise MalformedHeader("bad header values", no)
    pos = 1
    edges = []
    seen = set()
    for _ in range(count):
        if pos >= len(lines):
            raise MalformedHeader("hypergraph ends early", lines[-1][0])
        no, s = lines[pos]
        pos += 1
        toks = s.split()
        if len(toks) != 2:
            raise MalformedHeader("expected '<color> <size>'", no)
        color, sz = _ints(toks, no)
        if color < 1 or sz < 0:
            raise MalformedHeader("color must be positive and size nonnegative", no)
        verts = []
        if sz:
            if pos >= len(lines):
                raise MalformedHeader("missing vertex line", no)
            no, s = lines[pos]
            pos += 1
            verts = [_vertex(t, copies, no) for t in s.split()]
            if len(verts) != sz:
                raise ArityMismatch(f"edge lists {len(verts)} vertices, size is {sz}", no)
        for v, c in verts:
            if not 0 <= v < n or not 1 <= c <= copies:
                raise IndexOutOfRange(f"vertex {v}:{c} out of range", no)
        vs = frozenset(verts)
        if len(vs) != len(verts):
            raise DuplicateTuple("repeated vertex inside an edge", no)
        if (color, vs) in seen:
            raise DuplicateTuple(f"duplicate edge of color {color}", no)
        seen.add((color, vs))
        edges.append((color, vs))
    if pos != len(lines):
        raise MalformedHeader("trailing content after last edge", lines[pos][0])
    return ColoredHypergraph(n, copies, tuple(edges))


def serialize(obj) -> str:
    if isinstance(obj, RelStruct):
        out = [f"relstruct {obj.n} {obj.k}"]
        for rel in obj.relations:
            out.append(f"rel {rel.arity} {len(rel)}")
            out += [" ".join(map(str, t)) for t in rel.tuples]
        return "\n".join(out) + "\n"
    out = [f"hypergraph {obj.n} {obj.copies} {len(obj.edges)}"]
    for color, e in obj.edges:
        out.append(f"{color} {len(e)}")
        if e:
            if obj.copies == 1:
                out.append(" ".join(str(v) for v, _ in sorted(e)))
            else:
                out.append(" ".join(f"{v}:{c}" for v, c in sorted(e, key=lambda vc: (vc[1], vc[0]))))
    return "\n".join(out) + "\n"


def load(path) -> object:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(obj))
