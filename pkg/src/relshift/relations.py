"""Exact calculus of finite binary relations.

Relations between finite carriers are stored as dense boolean matrices.
Carriers are tiny (a handful of elements), so exact dense arithmetic is
both the simplest and the fastest representation: relational composition
is a boolean matrix product, and every predicate is a vectorized scan.

Composition convention: ``compose(S, R)`` is the relation written ``SR``,
meaning R is applied first.  For R: X -> Y and S: Y -> Z,
``(x, z) in SR  iff  exists y with (x, y) in R and (y, z) in S``.
All call sites in this package respect this right-to-left convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Carrier",
    "Relation",
    "RelationParseError",
    "ShapeError",
    "compose",
    "diagonal",
    "empty",
    "full",
    "meet",
    "union",
    "leq",
    "opposite",
    "transitive_closure",
    "is_reflexive",
    "is_symmetric",
    "is_transitive",
    "is_equivalence",
    "is_difunctional",
    "is_positive",
    "positive_witness",
    "relation_from_json",
    "relation_to_json",
]


class ShapeError(ValueError):
    """Carriers of the operands do not line up."""


class RelationParseError(ValueError):
    """A relation file is malformed."""


@dataclass(frozen=True, order=True)
class Carrier:
    """A finite set {0, 1, ..., size-1}."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"carrier size must be >= 1, got {self.size}")

    def elements(self) -> range:
        return range(self.size)


class Relation:
    """A binary relation from ``dom`` to ``cod`` as a dense boolean matrix.

    Immutable after construction; the backing array is frozen so values can
    be shared and hashed freely.
    """

    __slots__ = ("dom", "cod", "members", "_hash")

    def __init__(self, dom: Carrier, cod: Carrier, members: np.ndarray):
        members = np.asarray(members, dtype=bool)
        if members.shape != (dom.size, cod.size):
            raise ShapeError(
                f"matrix shape {members.shape} does not match carriers "
                f"({dom.size}, {cod.size})"
            )
        members = members.copy()
        members.setflags(write=False)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Relation is immutable")

    @classmethod
    def from_pairs(
        cls, dom: Carrier, cod: Carrier, pairs: Iterable[tuple[int, int]]
    ) -> "Relation":
        m = np.zeros((dom.size, cod.size), dtype=bool)
        for x, y in pairs:
            if not (0 <= x < dom.size and 0 <= y < cod.size):
                raise ValueError(f"pair ({x}, {y}) out of range")
            m[x, y] = True
        return cls(dom, cod, m)

    def pairs(self) -> list[tuple[int, int]]:
        """Member pairs in lexicographic order."""
        return [(int(x), int(y)) for x, y in np.argwhere(self.members)]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        x, y = pair
        return bool(self.members[x, y])

    def __len__(self) -> int:
        return int(self.members.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and bool(np.array_equal(self.members, other.members))
        )

    def __hash__(self) -> int:
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.dom, self.cod, self.members.tobytes()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Relation({self.dom.size}x{self.cod.size}, {self.pairs()})"

    def _require_endo(self) -> None:
        if self.dom != self.cod:
            raise ShapeError(
                f"operation requires dom = cod, got {self.dom.size} != {self.cod.size}"
            )


def diagonal(c: Carrier) -> Relation:
    """The identity relation 1_X on carrier ``c``."""
    return Relation(c, c, np.eye(c.size, dtype=bool))


def full(dom: Carrier, cod: Carrier | None = None) -> Relation:
    """The all-pairs relation (written as nabla when dom = cod)."""
    cod = dom if cod is None else cod
    return Relation(dom, cod, np.ones((dom.size, cod.size), dtype=bool))


def empty(dom: Carrier, cod: Carrier | None = None) -> Relation:
    cod = dom if cod is None else cod
    return Relation(dom, cod, np.zeros((dom.size, cod.size), dtype=bool))


def opposite(r: Relation) -> Relation:
    """R-opposite: (y, x) in result iff (x, y) in R."""
    return Relation(r.cod, r.dom, r.members.T)


def compose(s: Relation, r: Relation) -> Relation:
    """The composite SR: R first, then S.  Requires R.cod = S.dom."""
    if r.cod != s.dom:
        raise ShapeError(
            f"cannot compose: inner carriers differ ({r.cod.size} vs {s.dom.size})"
        )
    return Relation(r.dom, s.cod, r.members @ s.members)


def _require_parallel(r: Relation, s: Relation) -> None:
    if r.dom != s.dom or r.cod != s.cod:
        raise ShapeError(
            f"relations not parallel: {r.dom.size}x{r.cod.size} vs "
            f"{s.dom.size}x{s.cod.size}"
        )


def meet(r: Relation, s: Relation) -> Relation:
    _require_parallel(r, s)
    return Relation(r.dom, r.cod, r.members & s.members)


def union(r: Relation, s: Relation) -> Relation:
    _require_parallel(r, s)
    return Relation(r.dom, r.cod, r.members | s.members)


def leq(r: Relation, s: Relation) -> bool:
    """Pointwise inclusion R <= S."""
    _require_parallel(r, s)
    return bool((~r.members | s.members).all())


def is_reflexive(r: Relation) -> bool:
    r._require_endo()
    return bool(r.members.diagonal().all())


def is_symmetric(r: Relation) -> bool:
    r._require_endo()
    return bool(np.array_equal(r.members, r.members.T))


def is_transitive(r: Relation) -> bool:
    r._require_endo()
    return leq(compose(r, r), r)


def is_equivalence(r: Relation) -> bool:
    return is_reflexive(r) and is_symmetric(r) and is_transitive(r)


def is_difunctional(d: Relation) -> bool:
    """True iff the composite identity D D-op D = D holds."""
    return compose(d, compose(opposite(d), d)) == d


def is_positive(p: Relation) -> bool:
    """True iff P = U-op U for some relation U.

    Uses the local criterion validated exhaustively against the brute-force
    existential search (see the test suite): P is of the required form iff
    P is symmetric and every related element is self-related, because such
    a P is exactly the union of the squares {x, x'} x {x, x'} over its
    member pairs.
    """
    p._require_endo()
    if not is_symmetric(p):
        return False
    # (x, x') in P  must imply  (x, x) in P
    some = p.members.any(axis=1)
    return bool((~some | p.members.diagonal()).all())


def positive_witness(p: Relation) -> Relation | None:
    """A relation U with ``compose(opposite(U), U) == P``, or None.

    When P itself works as its own witness (e.g. any equivalence relation)
    it is returned directly; otherwise U is built column-per-pair, each
    column holding one member pair of P.
    """
    if not is_positive(p):
        return None
    if compose(opposite(p), p) == p:
        return p
    undirected = sorted({(min(x, y), max(x, y)) for x, y in p.pairs()})
    if not undirected:
        return empty(p.dom, Carrier(1))
    m = np.zeros((p.dom.size, len(undirected)), dtype=bool)
    for j, (x, y) in enumerate(undirected):
        m[x, j] = True
        m[y, j] = True
    return Relation(p.dom, Carrier(len(undirected)), m)


def transitive_closure(r: Relation) -> Relation:
    """Least transitive relation containing R (squaring iteration)."""
    r._require_endo()
    m = r.members.copy()
    while True:
        nxt = m | (m @ m)
        if np.array_equal(nxt, m):
            return Relation(r.dom, r.cod, m)
        m = nxt


# ---------------------------------------------------------------------------
# JSON serialization: {"dom": n, "cod": m, "pairs": [[x, y], ...]}
# ---------------------------------------------------------------------------


def relation_to_json(r: Relation) -> str:
    return json.dumps({"dom": r.dom.size, "cod": r.cod.size, "pairs": r.pairs()})


def relation_from_json(text: str) -> Relation:
    """Parse a relation document.  Duplicate pairs are tolerated; indices
    out of range are reported with the offending pair's position."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise RelationParseError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise RelationParseError("expected a JSON object")
    for key in ("dom", "cod", "pairs"):
        if key not in doc:
            raise RelationParseError(f"missing key {key!r}")
    n, m = doc["dom"], doc["cod"]
    if not (isinstance(n, int) and isinstance(m, int) and n >= 1 and m >= 1):
        raise RelationParseError("dom and cod must be positive integers")
    if not isinstance(doc["pairs"], list):
        raise RelationParseError("pairs must be a list")
    mat = np.zeros((n, m), dtype=bool)
    for i, pair in enumerate(doc["pairs"]):
        if (
            not isinstance(pair, Sequence)
            or len(pair) != 2
            or not all(isinstance(v, int) for v in pair)
        ):
            raise RelationParseError(f"pair #{i} is not a pair of integers: {pair!r}")
        x, y = pair
        if not (0 <= x < n and 0 <= y < m):
            raise RelationParseError(
                f"pair #{i} = ({x}, {y}) out of range for {n}x{m}"
            )
        mat[x, y] = True
    return Relation(Carrier(n), Carrier(m), mat)
