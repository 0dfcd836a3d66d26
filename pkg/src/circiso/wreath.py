"""The solving group Wr(C) = AGL(1,p_1) wr ... wr AGL(1,p_d) acting on Z_n.

Elements are label trees. A node at depth ``j`` is a block of points sharing
their residue mod ``ctx.moduli[j]``; its label ``t -> a*t + b`` over Z_q,
``q = ctx.radices[j]``, moves the next digit of the points in that block.
Labels are indexed by the *source* block, so ``x -> x+1`` carries along the
last child at every depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .cyclic import CyclicContext, context, primitive_root
from .errors import DomainMismatch, InputError, NotAFullCycle, NotMember, UnitRequired
from .perm import Permutation, PermGroup, is_full_cycle


class AglLabel(NamedTuple):
    p: int
    a: int
    b: int

    def __call__(self, t: int) -> int:
        return (self.a * t + self.b) % self.p

    def then(self, other: "AglLabel") -> "AglLabel":
        """Apply ``self`` first, then ``other``."""
        return AglLabel(self.p, other.a * self.a % self.p, (other.a * self.b + other.b) % self.p)

    def inverse(self) -> "AglLabel":
        ai = pow(self.a, -1, self.p)
        return AglLabel(self.p, ai, -ai * self.b % self.p)

    def is_identity(self) -> bool:
        return self.a % self.p == 1 % self.p and self.b == 0


def agl_elements(p: int) -> list[tuple[int, int]]:
    """All (a, b) of AGL(1, p), identity first, then lexicographic."""
    out = [(1, 0)]
    out += [(a, b) for a in range(1, p) for b in range(p) if (a, b) != (1, 0)]
    return out


@lru_cache(maxsize=None)
def _inv_table(q: int) -> np.ndarray:
    t = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        t[a] = pow(a, -1, q)
    return t


def apply_labels(ctx: CyclicContext, A, B, x: np.ndarray) -> np.ndarray:
    """Vectorised application of a label tree to the points ``x``."""
    y = np.zeros_like(x)
    for j, q in enumerate(ctx.radices):
        M = ctx.moduli[j]
        node = x % M
        t = (x // M) % q
        y += ((A[j][node] * t + B[j][node]) % q) * M
    return y


class WreathElement:
    __slots__ = ("ctx", "A", "B", "_images")

    def __init__(self, ctx: CyclicContext, A, B):
        self.ctx = ctx
        self.A = tuple(np.asarray(a, dtype=np.int64) for a in A)
        self.B = tuple(np.asarray(b, dtype=np.int64) for b in B)
        for arr in self.A + self.B:
            arr.setflags(write=False)
        self._images = None

    @classmethod
    def identity(cls, ctx: CyclicContext) -> "WreathElement":
        A = [np.ones(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        B = [np.zeros(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        return cls(ctx, A, B)

    @classmethod
    def from_labels(cls, ctx: CyclicContext, labels: dict) -> "WreathElement":
        """Build from ``{(depth, node): (a, b)}``; unlisted nodes are identity."""
        A = [np.ones(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        B = [np.zeros(m, dtype=np.int64) for m in ctx.moduli[:-1]]
        for (j, s), (a, b) in labels.items():
            q = ctx.radices[j]
            if math.gcd(a, q) != 1:
                raise UnitRequired(f"label multiplier {a} is not a unit mod {q}")
            A[j][s] = a % q
            B[j][s] = b % q
        return cls(ctx, A, B)

    def label(self, depth: int, node: int) -> AglLabel:
        return AglLabel(self.ctx.radices[depth], int(self.A[depth][node]), int(self.B[depth][node]))

    def images(self) -> np.ndarray:
        if self._images is None:
            img = apply_labels(self.ctx, self.A, self.B, np.arange(self.ctx.n, dtype=np.int64))
            img.setflags(write=False)
            self._images = img
        return self._images

    def apply(self, x: int) -> int:
        if not 0 <= x < self.ctx.n:
            raise InputError(f"point {x} out of range")
        y = 0
        for j, q in enumerate(self.ctx.radices):
            M = self.ctx.moduli[j]
            node = x % M
            t = (x // M) % q
            y += ((int(self.A[j][node]) * t + int(self.B[j][node])) % q) * M
        return y

    __call__ = apply

    def to_perm(self) -> Permutation:
        return Permutation._trusted(tuple(int(v) for v in self.images()))

    def compose(self, other: "WreathElement") -> "WreathElement":
        """``self`` first, then ``other``."""
        if other.ctx != self.ctx:
            raise DomainMismatch("wreath elements over different groups")
        img = self.images()
        A, B = [], []
        for j, q in enumerate(self.ctx.radices):
            M = self.ctx.moduli[j]
            pre = img[:M] % M
            ha, hb = other.A[j][pre], other.B[j][pre]
            A.append(ha * self.A[j] % q)
            B.append((ha * self.B[j] + hb) % q)
        return WreathElement(self.ctx, A, B)

    __mul__ = compose

    def inverse(self) -> "WreathElement":
        img = self.images()
        A, B = [], []
        for j, q in enumerate(self.ctx.radices):
            M = self.ctx.moduli[j]
            pre = img[:M] % M
            ai = _inv_table(q)[self.A[j]]
            a = np.empty(M, dtype=np.int64)
            b = np.empty(M, dtype=np.int64)
            a[pre] = ai
            b[pre] = (-ai * self.B[j]) % q
            A.append(a)
            B.append(b)
        return WreathElement(self.ctx, A, B)

    def is_identity(self) -> bool:
        return all((a == 1).all() for a in self.A) and all((b == 0).all() for b in self.B)

    def __eq__(self, other) -> bool:
        return (isinstance(other, WreathElement) and other.ctx == self.ctx
                and np.array_equal(self.images(), other.images()))

    def __hash__(self) -> int:
        return hash((self.ctx.n, self.images().tobytes()))

    def __repr__(self) -> str:
        return f"WreathElement(n={self.ctx.n}, images={self.images().tolist()})"

    def tree_lines(self) -> list[str]:
        """One ``level node (a,b)`` line per node; level i carries prime p_i."""
        out = []
        d = self.ctx.d
        for j in range(d):
            for s in range(self.ctx.moduli[j]):
                out.append(f"{d - j} {s} ({int(self.A[j][s])},{int(self.B[j][s])})")
        return out


def compose(g: WreathElement, h: WreathElement) -> WreathElement:
    return g.compose(h)


def invert(g: WreathElement) -> WreathElement:
    return g.inverse()


def apply(g: WreathElement, x: int) -> int:
    return g.apply(x)


def to_perm(g: WreathElement) -> Permutation:
    return g.to_perm()


def _images_of(pi, n: int | None = None) -> np.ndarray:
    if isinstance(pi, WreathElement):
        return pi.images()
    if isinstance(pi, Permutation):
        arr = np.asarray(pi.images, dtype=np.int64)
    else:
        arr = np.asarray(pi, dtype=np.int64)
    if n is not None and arr.shape != (n,):
        raise DomainMismatch(f"permutation of degree {arr.shape[0]} on Z_{n}")
    return arr


def from_perm(ctx: CyclicContext, pi) -> WreathElement:
    """Decompose a permutation of Z_n into its label tree, or raise NotMember."""
    P = _images_of(pi, ctx.n)
    A, B = [], []
    x = np.arange(ctx.n, dtype=np.int64)
    for j, q in enumerate(ctx.radices):
        M = ctx.moduli[j]
        if j > 0 and not np.array_equal(P % M, (P % M)[x % M]):
            bad = int(np.nonzero(P % M != (P % M)[x % M])[0][0])
            raise NotMember(f"block system D_{ctx.n // M} is broken at point {bad}",
                            witness={"level": ctx.d - j + 1, "point": bad, "kind": "block"})
        reps = np.arange(M)[:, None] + M * np.arange(q)[None, :]
        T = (P[reps] // M) % q
        b = T[:, 0]
        a = (T[:, 1] - b) % q if q > 1 else np.ones(M, dtype=np.int64)
        fitted = (a[:, None] * np.arange(q)[None, :] + b[:, None]) % q
        bad_nodes = np.nonzero((a == 0) | (fitted != T).any(axis=1))[0]
        if bad_nodes.size:
            s = int(bad_nodes[0])
            raise NotMember(f"node {s} at level {ctx.d - j} does not act affinely",
                            witness={"level": ctx.d - j, "node": s, "kind": "affine"})
        A.append(a)
        B.append(b)
    g = WreathElement(ctx, A, B)
    if not np.array_equal(g.images(), P):
        raise NotMember("label tree does not reproduce the permutation",
                        witness={"kind": "reconstruction"})
    return g


def is_member(ctx: CyclicContext, pi) -> bool:
    try:
        from_perm(ctx, pi)
    except NotMember:
        return False
    return True


def is_affine(ctx: CyclicContext, pi) -> tuple[int, int] | None:
    """Return (a, b) if ``pi`` is x -> a*x + b with gcd(a, n) = 1."""
    P = _images_of(pi, ctx.n)
    n = ctx.n
    if n == 1:
        return (1, 0) if P[0] == 0 else None
    b = int(P[0])
    a = (int(P[1]) - b) % n
    if math.gcd(a, n) != 1:
        return None
    if np.array_equal((a * np.arange(n) + b) % n, P):
        return a, b
    return None


def holomorph_affine(ctx: CyclicContext, a: int, b: int) -> Permutation:
    n = ctx.n
    if math.gcd(a, n) != 1:
        raise UnitRequired(f"{a} is not a unit mod {n}")
    return Permutation._trusted(tuple((a * x + b) % n for x in range(n)))


def membership_eqwr(ctx: CyclicContext, pi) -> bool:
    """Membership by the recursive definition: block system, quotient, commuting P."""
    P = _images_of(pi, ctx.n)
    n = ctx.n
    if n == 1:
        return True
    if ctx.d == 1:
        return is_affine(ctx, P) is not None
    p = ctx.primes[0]
    m = n // p
    x = np.arange(n)
    cls = P % m
    if not np.array_equal(cls, cls[x % m]):
        return False
    if not membership_eqwr(context(m), cls[:m]):
        return False
    t = (x + m) % n
    inv = np.empty(n, dtype=np.int64)
    inv[P] = x
    t_conj = P[t[inv]]  # x -> pi(t(pi^-1(x)))
    return bool(np.array_equal(t_conj[t], t[t_conj]))


def odometer(ctx: CyclicContext) -> WreathElement:
    """The label tree of x -> x + 1."""
    labels = {}
    node = 0
    for j, q in enumerate(ctx.radices):
        labels[(j, node)] = (1, 1)
        node += (q - 1) * ctx.moduli[j]
    return WreathElement.from_labels(ctx, labels)


def p_subgroup_generator(ctx: CyclicContext) -> Permutation:
    if ctx.n == 1:
        raise InputError("trivial group has no p-subgroup")
    step = ctx.n // ctx.primes[0]
    return Permutation._trusted(tuple((x + step) % ctx.n for x in range(ctx.n)))


def generators(ctx: CyclicContext) -> list[WreathElement]:
    """Odometer plus one single-node element per level."""
    gens = [odometer(ctx)]
    for i in range(1, ctx.d + 1):
        p = ctx.primes[i - 1]
        lab = (primitive_root(p), 0) if p > 2 else (1, 1)
        gens.append(WreathElement.from_labels(ctx, {(ctx.depth_of_level(i), 0): lab}))
    return gens


def order(ctx: CyclicContext) -> int:
    return math.prod((p * (p - 1)) ** (ctx.n // t) for p, t in zip(ctx.primes, ctx.tower))


def sample_uniform(ctx: CyclicContext, seed=None) -> WreathElement:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    A, B = [], []
    for j, q in enumerate(ctx.radices):
        M = ctx.moduli[j]
        A.append(rng.integers(1, q, size=M) if q > 2 else np.ones(M, dtype=np.int64))
        B.append(rng.integers(0, q, size=M))
    return WreathElement(ctx, A, B)


def conj_full_cycle_to_standard(ctx: CyclicContext, h) -> WreathElement:
    """Return k in Wr(C) with k^-1 h k = x -> x+1.

    Every solution in Sym(n) has the form k0 * z^c, and z lies in Wr(C), so the
    map sending h^i(0) to i is a member whenever any solution is.
    """
    if not isinstance(h, WreathElement):
        h = from_perm(ctx, h)
    hp = h.to_perm()
    if not is_full_cycle(hp):
        raise NotAFullCycle("h is not a full cycle")
    k_img = [0] * ctx.n
    x = 0
    for i in range(ctx.n):
        k_img[x] = i
        x = hp.images[x]
    k = from_perm(ctx, k_img)
    z = odometer(ctx)
    if k.inverse().compose(h).compose(k) != z:
        raise NotMember("conjugator failed verification", witness={"kind": "conjugation"})
    return k


# --- subgroups given by a label chain ---------------------------------------


def node_order(ctx: CyclicContext) -> list[tuple[int, int]]:
    """Nodes in breadth-first order: (depth, node)."""
    return [(j, s) for j in range(ctx.d) for s in range(ctx.moduli[j])]


@dataclass
class NodeChain:
    """Subgroup G of Wr(C) stored along the breadth-first node chain.

    ``K_r`` is the subgroup of elements whose labels at nodes before ``r`` are
    trivial; ``levels[r]`` maps each label of ``G & K_r`` at node ``r`` to a
    representative element.
    """

    ctx: CyclicContext
    levels: list[dict] = field(default_factory=list)
    generators: list[WreathElement] = field(default_factory=list)

    @classmethod
    def trivial(cls, ctx: CyclicContext) -> "NodeChain":
        ident = WreathElement.identity(ctx)
        q_of = [ctx.radices[j] for j, _ in node_order(ctx)]
        return cls(ctx, [{(1 % q, 0): ident} for q in q_of], [])

    def label_group(self, r: int) -> set:
        return set(self.levels[r])

    def extend(self, r: int, g: WreathElement) -> None:
        """Add ``g`` (trivial at nodes before ``r``) and close the label group at ``r``."""
        j, s = node_order(self.ctx)[r]
        q = self.ctx.radices[j]
        self.generators.append(g)
        lvl = self.levels[r]
        gens_here = [x for x in self.generators if _label_at(x, j, s) != (1 % q, 0)
                     and _trivial_before(x, r)]
        frontier = list(lvl.values())
        while frontier:
            nxt = []
            for rho in frontier:
                for gamma in gens_here:
                    prod = rho.compose(gamma)
                    lab = _label_at(prod, j, s)
                    if lab not in lvl:
                        lvl[lab] = prod
                        nxt.append(prod)
            frontier = nxt

    def order(self) -> int:
        return math.prod(len(lvl) for lvl in self.levels)

    def contains(self, y) -> bool:
        """Sift ``y`` (a WreathElement or an image array) through the chain."""
        img = np.asarray(y.images() if isinstance(y, WreathElement) else y, dtype=np.int64)
        ctx = self.ctx
        if img.shape != (ctx.n,):
            return False
        for r, (j, s) in enumerate(node_order(ctx)):
            M, q = ctx.moduli[j], ctx.radices[j]
            # the label at a node is read off the images of its first two children
            b = int(img[s] // M) % q
            a = (int(img[s + M] // M) % q - b) % q
            lab = (a, b)
            if lab not in self.levels[r]:
                return False
            if lab != (1 % q, 0):
                img = self._inverse_images(r, lab)[img]
        return bool((img == np.arange(ctx.n)).all())

    def _inverse_images(self, r: int, lab) -> np.ndarray:
        cache = self.__dict__.setdefault("_inv_cache", {})
        key = (r, lab)
        if key not in cache:
            cache[key] = self.levels[r][lab].inverse().images()
        return cache[key]


def _label_at(g: WreathElement, j: int, s: int) -> tuple[int, int]:
    return int(g.A[j][s]), int(g.B[j][s])


def _trivial_before(g: WreathElement, r: int) -> bool:
    order_ = node_order(g.ctx)
    for (j, s) in order_[:r]:
        q = g.ctx.radices[j]
        if _label_at(g, j, s) != (1 % q, 0):
            return False
    return True


@dataclass
class Coset:
    """Iso_K(X, Y): empty, or ``Aut * representative``."""

    ctx: CyclicContext
    status: str
    representative: WreathElement | None = None
    stabilizer_generators: list[WreathElement] = field(default_factory=list)
    order: int = 0
    chain: NodeChain | None = field(default=None, repr=False)

    @classmethod
    def empty(cls, ctx: CyclicContext) -> "Coset":
        return cls(ctx, "empty")

    @classmethod
    def from_generators(cls, ctx, representative, gens) -> "Coset":
        """Coset whose order comes from a Schreier-Sims chain on the generators."""
        grp = PermGroup([g.to_perm() for g in gens], degree=ctx.n)
        return cls(ctx, "nonempty", representative, list(gens), grp.order())

    def is_empty(self) -> bool:
        return self.status == "empty"

    def perm_group(self) -> PermGroup:
        return PermGroup([g.to_perm() for g in self.stabilizer_generators], degree=self.ctx.n)

    def contains(self, g) -> bool:
        if self.is_empty():
            return False
        img = _images_of(g, self.ctx.n)
        y = self._rep_inverse()[img]
        if self.chain is not None:
            # anything that sifts to the identity is a product of chain elements
            return self.chain.contains(y)
        return self.perm_group().contains(Permutation._trusted(tuple(int(v) for v in y)))

    def _rep_inverse(self) -> np.ndarray:
        if "_rinv" not in self.__dict__:
            self.__dict__["_rinv"] = self.representative.inverse().images()
        return self.__dict__["_rinv"]

    def to_text(self) -> str:
        if self.is_empty():
            return "empty\n"
        lines = [f"coset {self.ctx.n}", "rep", _perm_line(self.representative),
                 f"gens {len(self.stabilizer_generators)}"]
        lines += [_perm_line(g) for g in self.stabilizer_generators]
        lines.append(f"order {self.order}")
        return "\n".join(lines) + "\n"


def _perm_line(g: WreathElement) -> str:
    return " ".join(str(int(v)) for v in g.images())


def parse_coset(text: str) -> tuple[str, list[int] | None, list[list[int]], int]:
    """Parse the coset file format into (status, rep images, generator images, order)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines == ["empty"]:
        return "empty", None, [], 0
    head = lines[0].split()
    if head[0] != "coset" or lines[1] != "rep":
        raise InputError("malformed coset file")
    rep = [int(t) for t in lines[2].split()]
    _, cnt = lines[3].split()
    gens = [[int(t) for t in lines[4 + i].split()] for i in range(int(cnt))]
    tag, val = lines[4 + int(cnt)].split()
    if tag != "order":
        raise InputError("malformed coset file")
    return "nonempty", rep, gens, int(val)
