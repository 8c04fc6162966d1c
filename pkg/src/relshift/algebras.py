"""Finite algebras given by operation tables.

An algebra is a carrier {0..n-1} with finitary operations (arity <= 3)
stored as flat row-major tables.  Compatible relations are the binary
relations closed under all operations applied coordinatewise; congruences
are the compatible equivalence relations.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .relations import (
    Carrier,
    Relation,
    ShapeError,
    diagonal,
    is_equivalence,
    is_reflexive,
    leq,
    meet,
    transitive_closure,
    union,
)

__all__ = [
    "Signature",
    "Algebra",
    "AlgebraParseError",
    "PairedObject",
    "MAX_ARITY",
    "evaluate",
    "is_compatible",
    "compatible_close",
    "principal_congruence",
    "all_congruences",
    "congruence_join",
    "congruence_lattice_is_modular",
    "as_paired_object",
    "algebra_from_json",
    "algebra_to_json",
]

MAX_ARITY = 3


class AlgebraParseError(ValueError):
    """An algebra file is malformed."""


@dataclass(frozen=True)
class Signature:
    """Operation names with their arities (constants through ternary)."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.ops]
        if len(names) != len(set(names)):
            raise ValueError("duplicate operation names")
        for name, arity in self.ops:
            if not 0 <= arity <= MAX_ARITY:
                raise ValueError(f"operation {name!r}: arity {arity} not in 0..{MAX_ARITY}")

    def arity(self, name: str) -> int:
        for n, a in self.ops:
            if n == name:
                return a
        raise KeyError(f"unknown operation {name!r}")


class Algebra:
    """A finite algebra: carrier, signature and one flat table per operation.

    Table index for arguments (a_0, ..., a_{k-1}) is
    sum(a_i * size**(k-1-i)), i.e. row-major by argument tuple.
    """

    __slots__ = ("name", "carrier", "sig", "tables", "_arrays")

    def __init__(
        self,
        name: str,
        carrier: Carrier,
        sig: Signature,
        tables: dict[str, tuple[int, ...]],
    ):
        n = carrier.size
        if set(tables) != {op for op, _ in sig.ops}:
            raise ValueError("tables do not match signature")
        arrays: dict[str, np.ndarray] = {}
        for op, arity in sig.ops:
            table = tuple(tables[op])
            if len(table) != n**arity:
                raise ValueError(
                    f"operation {op!r}: table length {len(table)}, expected {n**arity}"
                )
            if any(not (0 <= v < n) for v in table):
                raise ValueError(f"operation {op!r}: table entry out of range")
            arrays[op] = np.asarray(table, dtype=np.intp).reshape((n,) * arity)
            arrays[op].setflags(write=False)
        self.name = name
        self.carrier = carrier
        self.sig = sig
        self.tables = {op: tuple(tables[op]) for op, _ in sig.ops}
        self._arrays = arrays

    @property
    def size(self) -> int:
        return self.carrier.size

    def table_array(self, op: str) -> np.ndarray:
        """The operation table as an ndarray of shape (size,) * arity."""
        return self._arrays[op]

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, size={self.size}, ops={list(self.tables)})"


def evaluate(a: Algebra, op: str, args: tuple[int, ...]) -> int:
    arity = a.sig.arity(op)
    if len(args) != arity:
        raise ValueError(f"{op!r} expects {arity} arguments, got {len(args)}")
    for v in args:
        if not 0 <= v < a.size:
            raise ValueError(f"argument {v} out of range for size {a.size}")
    return int(a.table_array(op)[args]) if args else int(a.table_array(op)[()])


def is_compatible(a: Algebra, r: Relation) -> bool:
    """Whether R is closed under every operation applied coordinatewise."""
    if r.dom != a.carrier or r.cod != a.carrier:
        raise ShapeError("relation carrier does not match algebra carrier")
    return _is_compatible_between(a, a, r)


def _is_compatible_between(a: Algebra, b: Algebra, r: Relation) -> bool:
    """Compatibility of R: A -> B for same-signature algebras A and B."""
    prs = np.argwhere(r.members)
    xs, ys = prs[:, 0], prs[:, 1]
    for op, arity in a.sig.ops:
        fa, fb = a.table_array(op), b.table_array(op)
        if arity == 0:
            if not r.members[int(fa[()]), int(fb[()])]:
                return False
        elif arity == 1:
            if not r.members[fa[xs], fb[ys]].all():
                return False
        elif arity == 2:
            fx = fa[xs[:, None], xs[None, :]]
            fy = fb[ys[:, None], ys[None, :]]
            if not r.members[fx, fy].all():
                return False
        else:
            fx = fa[xs[:, None, None], xs[None, :, None], xs[None, None, :]]
            fy = fb[ys[:, None, None], ys[None, :, None], ys[None, None, :]]
            if not r.members[fx, fy].all():
                return False
    return True


def compatible_close(a: Algebra, seed: set[tuple[int, int]] | list[tuple[int, int]]) -> Relation:
    """Least compatible relation containing ``seed`` (subalgebra of A^2)."""
    n = a.size
    m = np.zeros((n, n), dtype=bool)
    for x, y in seed:
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"seed pair ({x}, {y}) out of range")
        m[x, y] = True
    while True:
        prs = np.argwhere(m)
        xs, ys = prs[:, 0], prs[:, 1]
        before = m.copy()
        for op, arity in a.sig.ops:
            f = a.table_array(op)
            if arity == 0:
                m[int(f[()]), int(f[()])] = True
            elif arity == 1:
                m[f[xs], f[ys]] = True
            elif arity == 2:
                m[f[xs[:, None], xs[None, :]], f[ys[:, None], ys[None, :]]] = True
            else:
                fx = f[xs[:, None, None], xs[None, :, None], xs[None, None, :]]
                fy = f[ys[:, None, None], ys[None, :, None], ys[None, None, :]]
                m[fx, fy] = True
        if np.array_equal(m, before):
            return Relation(a.carrier, a.carrier, m)


def principal_congruence(a: Algebra, x: int, y: int) -> Relation:
    """Least congruence identifying x and y."""
    n = a.size
    if not (0 <= x < n and 0 <= y < n):
        raise ValueError(f"elements ({x}, {y}) out of range for size {n}")
    rel = Relation.from_pairs(a.carrier, a.carrier, [(x, y)])
    rel = union(rel, diagonal(a.carrier))
    while True:
        closed = compatible_close(a, rel.pairs())
        closed = Relation(a.carrier, a.carrier, closed.members | closed.members.T)
        closed = transitive_closure(closed)
        if closed == rel:
            return rel
        rel = closed


def congruence_join(r: Relation, s: Relation) -> Relation:
    """Join of two congruences: transitive closure of the union."""
    return transitive_closure(union(r, s))


def all_congruences(a: Algebra) -> list[Relation]:
    """Every congruence of A, as the join closure of the principal ones.

    Returned in a deterministic order: sorted by pair list.
    """
    found = {diagonal(a.carrier)}
    for x in range(a.size):
        for y in range(x + 1, a.size):
            found.add(principal_congruence(a, x, y))
    while True:
        new = set()
        items = list(found)
        for r, s in itertools.combinations(items, 2):
            j = congruence_join(r, s)
            if j not in found:
                new.add(j)
        if not new:
            break
        found |= new
    return sorted(found, key=lambda r: r.pairs())


def congruence_lattice_is_modular(a: Algebra) -> bool:
    """Modularity of Con(A): x <= z implies x v (y ^ z) = (x v y) ^ z."""
    cons = all_congruences(a)
    for x in cons:
        for z in cons:
            if not leq(x, z):
                continue
            for y in cons:
                left = congruence_join(x, meet(y, z))
                right = meet(congruence_join(x, y), z)
                if left != right:
                    return False
    return True


@dataclass(frozen=True)
class PairedObject:
    """A reflexive compatible relation E packaged as an object of pairs.

    ``pairs`` lists the members of E in lexicographic order; e1 and e2 are
    the coordinate projections pair-index -> base element.
    """

    base: Algebra
    relation: Relation
    pairs: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int] = field(compare=False, repr=False)

    @property
    def carrier(self) -> Carrier:
        return Carrier(len(self.pairs))

    def e1(self, i: int) -> int:
        return self.pairs[i][0]

    def e2(self, i: int) -> int:
        return self.pairs[i][1]


def as_paired_object(a: Algebra, e: Relation) -> PairedObject:
    if not is_reflexive(e):
        raise ValueError("relation must be reflexive")
    if not is_compatible(a, e):
        raise ValueError("relation must be compatible")
    pairs = tuple(e.pairs())
    index = {p: i for i, p in enumerate(pairs)}
    return PairedObject(base=a, relation=e, pairs=pairs, index=index)


# ---------------------------------------------------------------------------
# JSON serialization:
# {"name": str, "size": n,
#  "operations": [{"name": str, "arity": k, "table": [...]}, ...]}
# ---------------------------------------------------------------------------


def algebra_to_json(a: Algebra) -> str:
    return json.dumps(
        {
            "name": a.name,
            "size": a.size,
            "operations": [
                {"name": op, "arity": arity, "table": list(a.tables[op])}
                for op, arity in a.sig.ops
            ],
        },
        indent=2,
    )


def algebra_from_json(text: str) -> Algebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraParseError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise AlgebraParseError("expected a JSON object")
    for key in ("name", "size", "operations"):
        if key not in doc:
            raise AlgebraParseError(f"missing key {key!r}")
    n = doc["size"]
    if not (isinstance(n, int) and n >= 1):
        raise AlgebraParseError("size must be a positive integer")
    ops: list[tuple[str, int]] = []
    tables: dict[str, tuple[int, ...]] = {}
    for spec in doc["operations"]:
        if not isinstance(spec, dict) or not {"name", "arity", "table"} <= set(spec):
            raise AlgebraParseError(f"malformed operation entry: {spec!r}")
        opname, arity, table = spec["name"], spec["arity"], spec["table"]
        if not (isinstance(arity, int) and 0 <= arity <= MAX_ARITY):
            raise AlgebraParseError(f"operation {opname!r}: bad arity {arity!r}")
        if not isinstance(table, list) or len(table) != n**arity:
            raise AlgebraParseError(
                f"operation {opname!r}: table length "
                f"{len(table) if isinstance(table, list) else '?'}, expected {n**arity}"
            )
        for i, v in enumerate(table):
            if not (isinstance(v, int) and 0 <= v < n):
                raise AlgebraParseError(
                    f"operation {opname!r}: table entry #{i} = {v!r} out of range"
                )
        ops.append((opname, arity))
        tables[opname] = tuple(table)
    try:
        return Algebra(str(doc["name"]), Carrier(n), Signature(tuple(ops)), tables)
    except ValueError as e:
        raise AlgebraParseError(str(e)) from e
