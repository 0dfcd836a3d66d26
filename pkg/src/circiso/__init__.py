"""Isomorphism of circulant relational structures and hypergraphs.

The search runs inside the solvable group Wr(C), an iterated wreath product
of the affine groups AGL(1, p) over the prime tower of n.
"""

from .cyclic import CyclicContext, context, factor
from .errors import CircIsoError
from .objects import ColoredHypergraph, Relation, RelStruct, apply, is_cayley, random_cayley
from .perm import Permutation, PermGroup
from .solver import IsoResult, SolveOptions, aut, iso, iso_hypergraph, iso_relstruct, palfy_iso
from .wreath import Coset, WreathElement, from_perm, generators, is_member, order

__version__ = "0.1.0"

__all__ = [
    "CircIsoError", "ColoredHypergraph", "Coset", "CyclicContext", "IsoResult", "PermGroup",
    "Permutation", "RelStruct", "Relation", "SolveOptions", "WreathElement", "apply", "aut",
    "context", "factor", "from_perm", "generators", "is_cayley", "is_member", "iso",
    "iso_hypergraph", "iso_relstruct", "order", "palfy_iso", "random_cayley",
]
