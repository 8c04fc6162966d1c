"""Decision procedures for the Shifting-Lemma family.

All quantifier scans are exhaustive over the finite carriers; every
"violated" verdict carries the lexicographically least witness so outputs
are stable, and every budget-limited scan reports "inconclusive" rather
than silently passing.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebras import Algebra, _is_compatible_between, all_congruences, is_compatible
from .relations import (
    Relation,
    ShapeError,
    compose,
    is_equivalence,
    is_positive,
    is_reflexive,
    leq,
    meet,
    opposite,
)

__all__ = [
    "RelationClass",
    "SLResult",
    "PreconditionError",
    "BudgetError",
    "DEFAULT_ENUM_BUDGET",
    "shifting_lemma",
    "shifting_lemma_forall",
    "shifting_principle_reduction",
    "permutability",
    "enumerate_class_relations",
    "enumerate_compatible_relations",
    "difunctional_all",
    "goursat_identity_all",
    "ee_properties",
]

DEFAULT_ENUM_BUDGET = 1 << 16


class PreconditionError(ValueError):
    """A check was called outside its contract (e.g. R ^ S not below T)."""


class BudgetError(RuntimeError):
    """An enumeration would exceed its candidate budget."""


class RelationClass(Enum):
    ARBITRARY = "arbitrary"
    REFLEXIVE = "reflexive"
    REFLEXIVE_POSITIVE = "reflexive-positive"
    EQUIVALENCE = "equivalence"

    @classmethod
    def parse(cls, text: str) -> "RelationClass":
        aliases = {
            "arbitrary": cls.ARBITRARY,
            "any": cls.ARBITRARY,
            "refl": cls.REFLEXIVE,
            "reflexive": cls.REFLEXIVE,
            "reflpos": cls.REFLEXIVE_POSITIVE,
            "refl-pos": cls.REFLEXIVE_POSITIVE,
            "reflexive-positive": cls.REFLEXIVE_POSITIVE,
            "eq": cls.EQUIVALENCE,
            "equiv": cls.EQUIVALENCE,
            "equivalence": cls.EQUIVALENCE,
        }
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown relation class {text!r}") from None


@dataclass(frozen=True)
class SLResult:
    """Outcome of a Shifting-Lemma check.

    verdict is "holds", "violated" or "inconclusive".  On violation the
    quadruple (x, y, u, v) satisfies all premises of the diagram while the
    conclusion (u, v) in T fails; for quantified checks the violating
    triple of relations is attached as well.
    """

    verdict: str
    quadruple: tuple[int, int, int, int] | None = None
    triple: tuple[Relation, Relation, Relation] | None = field(
        default=None, compare=False
    )
    reason: str | None = None

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def _common_carrier(r: Relation, s: Relation, t: Relation) -> int:
    carriers = {r.dom, r.cod, s.dom, s.cod, t.dom, t.cod}
    if len(carriers) != 1:
        raise ShapeError("R, S, T must be relations on one common carrier")
    return r.dom.size


def shifting_lemma(r: Relation, s: Relation, t: Relation) -> SLResult:
    """Exhaustive check of the shifting implication for one triple.

    Premises over (x, y, u, v): (x, y) in R ^ T, (x, u) in S, (y, v) in S,
    (u, v) in R; conclusion (u, v) in T.  Requires R ^ S <= T.
    """
    _common_carrier(r, s, t)
    if not leq(meet(r, s), t):
        raise PreconditionError("R ^ S <= T fails")
    rt = r.members & t.members
    premises = (
        rt[:, :, None, None]
        & s.members[:, None, :, None]
        & s.members[None, :, None, :]
        & r.members[None, None, :, :]
    )
    bad = premises & ~t.members[None, None, :, :]
    if not bad.any():
        return SLResult("holds")
    x, y, u, v = (int(i) for i in np.argwhere(bad)[0])
    return SLResult("violated", quadruple=(x, y, u, v))


def shifting_principle_reduction(r: Relation, s: Relation, t: Relation) -> bool:
    """Whether SL(R, S, R ^ T) holding implies SL(R, S, T) holding here.

    Always true (shrinking T to R ^ T only strengthens the conclusion);
    exposed so the reduction can be tested rather than assumed.
    """
    _common_carrier(r, s, t)
    if not leq(meet(r, s), t):
        raise PreconditionError("R ^ S <= T fails")
    inner = shifting_lemma(r, s, meet(r, t))
    if not inner.holds:
        return True
    return shifting_lemma(r, s, t).holds


def _enum_budget(default: int = DEFAULT_ENUM_BUDGET) -> int:
    env = os.environ.get("RELSHIFT_BUDGET")
    return int(env) if env else default


def enumerate_compatible_relations(
    a: Algebra, b: Algebra | None = None, budget: int | None = None
) -> list[Relation]:
    """All compatible relations A -> B (subalgebras of A x B), lexicographic.

    Raises BudgetError when the 2**(|A| * |B|) candidate count exceeds the
    budget.
    """
    b = a if b is None else b
    if budget is None:
        budget = _enum_budget()
    na, nb = a.size, b.size
    if 2 ** (na * nb) > budget:
        raise BudgetError(
            f"2^{na * nb} candidate relations exceed budget {budget}"
        )
    out = []
    for bits in range(2 ** (na * nb)):
        m = np.array(
            [(bits >> k) & 1 for k in range(na * nb)], dtype=bool
        ).reshape(na, nb)
        rel = Relation(a.carrier, b.carrier, m)
        if _is_compatible_between(a, b, rel):
            out.append(rel)
    return sorted(out, key=lambda r: r.pairs())


def enumerate_class_relations(
    a: Algebra, cls: RelationClass, budget: int | None = None
) -> list[Relation]:
    """All compatible relations on A in the given class, lexicographic."""
    if budget is None:
        budget = _enum_budget()
    n = a.size
    if cls is RelationClass.EQUIVALENCE:
        return sorted(all_congruences(a), key=lambda r: r.pairs())
    if cls is RelationClass.ARBITRARY:
        return enumerate_compatible_relations(a, a, budget)
    # reflexive cases: free choice only on the off-diagonal positions
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    if 2 ** len(off) > budget:
        raise BudgetError(f"2^{len(off)} candidate relations exceed budget {budget}")
    out = []
    for bits in range(2 ** len(off)):
        m = np.eye(n, dtype=bool)
        for k, (x, y) in enumerate(off):
            if (bits >> k) & 1:
                m[x, y] = True
        rel = Relation(a.carrier, a.carrier, m)
        if not is_compatible(a, rel):
            continue
        if cls is RelationClass.REFLEXIVE_POSITIVE and not is_positive(rel):
            continue
        out.append(rel)
    return sorted(out, key=lambda r: r.pairs())


def shifting_lemma_forall(
    a: Algebra,
    class_r: RelationClass,
    class_s: RelationClass,
    class_t: RelationClass,
    budget: int | None = None,
) -> SLResult:
    """Shifting Lemma quantified over all compatible relations of the given
    classes on A.  Returns the first violation in lexicographic triple
    order, or "inconclusive" when enumeration would exceed the budget."""
    try:
        rs = enumerate_class_relations(a, class_r, budget)
        ss = enumerate_class_relations(a, class_s, budget)
        ts = enumerate_class_relations(a, class_t, budget)
    except BudgetError as e:
        return SLResult("inconclusive", reason=str(e))
    for r, s, t in itertools.product(rs, ss, ts):
        if not leq(meet(r, s), t):
            continue
        res = shifting_lemma(r, s, t)
        if not res.holds:
            return SLResult("violated", quadruple=res.quadruple, triple=(r, s, t))
    return SLResult("holds")


def permutability(r: Relation, s: Relation) -> dict:
    """Classify a congruence pair as 2-permuting (RS = SR), 3-permuting
    (RSR = SRS) or neither, returning all four composites."""
    if not is_equivalence(r) or not is_equivalence(s):
        raise PreconditionError("R and S must be equivalence relations")
    rs = compose(r, s)
    sr = compose(s, r)
    rsr = compose(r, sr)
    srs = compose(s, rs)
    if rs == sr:
        level = "2-permute"
    elif rsr == srs:
        level = "3-permute"
    else:
        level = "neither"
    return {"level": level, "RS": rs, "SR": sr, "RSR": rsr, "SRS": srs}


def difunctional_all(
    a: Algebra, b: Algebra | None = None, budget: int | None = None
) -> SLResult:
    """Whether every compatible relation D: A -> B satisfies D D-op D = D."""
    try:
        rels = enumerate_compatible_relations(a, b, budget)
    except BudgetError as e:
        return SLResult("inconclusive", reason=str(e))
    for d in rels:
        if compose(d, compose(opposite(d), d)) != d:
            return SLResult("violated", triple=(d, d, d), reason="not difunctional")
    return SLResult("holds")


def goursat_identity_all(
    a: Algebra, b: Algebra | None = None, budget: int | None = None
) -> SLResult:
    """Whether every compatible D: A -> B satisfies (D D-op)(D D-op) = D D-op."""
    try:
        rels = enumerate_compatible_relations(a, b, budget)
    except BudgetError as e:
        return SLResult("inconclusive", reason=str(e))
    for d in rels:
        dd = compose(d, opposite(d))
        if compose(dd, dd) != dd:
            return SLResult("violated", triple=(d, d, d), reason="identity fails")
    return SLResult("holds")


def ee_properties(a: Algebra, e: Relation, budget: int | None = None) -> dict:
    """Symmetrization facts for one reflexive compatible E, plus whether
    every reflexive positive compatible relation on A is an equivalence."""
    if not is_reflexive(e):
        raise PreconditionError("E must be reflexive")
    if not is_compatible(a, e):
        raise PreconditionError("E must be compatible")
    ee_op = compose(e, opposite(e))
    op_ee = compose(opposite(e), e)
    record = {
        "ee_op_is_equivalence": is_equivalence(ee_op),
        "ee_op_equals_op_ee": ee_op == op_ee,
    }
    try:
        pos = enumerate_class_relations(a, RelationClass.REFLEXIVE_POSITIVE, budget)
        record["reflexive_positive_all_equivalence"] = all(
            is_equivalence(p) for p in pos
        )
    except BudgetError as err:
        record["reflexive_positive_all_equivalence"] = f"inconclusive: {err}"
    return record
