"""Corpus management and the cross-validation suite.

The bundled corpus spans the three regimes the characterization theorems
distinguish: Mal'tsev algebras (cyclic groups), a 3-permutable-only
algebra (the 2-element implication algebra), and algebras with neither
term condition (meet-semilattice, bare set, a unary algebra whose
congruence lattice is the pentagon N5).

``run_suite`` runs every check on every corpus algebra and assembles a
single deterministic JSON-ready report (schema "relshift-report/1").
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import __version__
from .algebras import (
    Algebra,
    Signature,
    all_congruences,
    as_paired_object,
    congruence_join,
    congruence_lattice_is_modular,
)
from .checks import (
    BudgetError,
    RelationClass,
    SLResult,
    difunctional_all,
    ee_properties,
    enumerate_class_relations,
    goursat_identity_all,
    permutability,
    shifting_lemma,
    shifting_lemma_forall,
)
from .constructions import (
    NoWitnessError,
    build_box,
    build_W,
    goursat_sl_witness,
    join_via_RSR,
    kernel_pair,
    maltsev_sl_witness,
)
from .relations import (
    Carrier,
    Relation,
    compose,
    is_symmetric,
    meet,
    opposite,
    transitive_closure,
    union,
)
from .terms import find_3perm_terms, find_maltsev_term

__all__ = [
    "ConsistencyError",
    "SCHEMA",
    "DEFAULT_SIZE_CAP",
    "bundled_corpus",
    "enumerate_reflexive_compatible",
    "run_suite",
    "box_join_replay",
]

SCHEMA = "relshift-report/1"
DEFAULT_SIZE_CAP = 4

# Class combinations exercised per algebra, keyed by the theorem layout
# they correspond to.
SUITE_CLASS_COMBOS: tuple[tuple[str, tuple[RelationClass, ...]], ...] = (
    ("eq,eq,eq", (RelationClass.EQUIVALENCE,) * 3),
    ("refl,refl,refl", (RelationClass.REFLEXIVE,) * 3),
    (
        "refl,eq,refl",
        (RelationClass.REFLEXIVE, RelationClass.EQUIVALENCE, RelationClass.REFLEXIVE),
    ),
    (
        "reflpos,refl,reflpos",
        (
            RelationClass.REFLEXIVE_POSITIVE,
            RelationClass.REFLEXIVE,
            RelationClass.REFLEXIVE_POSITIVE,
        ),
    ),
)


class ConsistencyError(RuntimeError):
    """A term condition was found but a check it implies was violated."""


def _cyclic_group(n: int) -> Algebra:
    add = tuple((i + j) % n for i in range(n) for j in range(n))
    neg = tuple((-i) % n for i in range(n))
    return Algebra(
        f"z{n}",
        Carrier(n),
        Signature((("add", 2), ("neg", 1), ("zero", 0))),
        {"add": add, "neg": neg, "zero": (0,)},
    )


def _meet_semilattice2() -> Algebra:
    return Algebra(
        "semilattice2", Carrier(2), Signature((("meet", 2),)), {"meet": (0, 0, 0, 1)}
    )


def _implication2() -> Algebra:
    # x -> y with 1 as "true": 0->0 = 1, 0->1 = 1, 1->0 = 0, 1->1 = 1
    return Algebra(
        "implication2", Carrier(2), Signature((("imp", 2),)), {"imp": (1, 1, 0, 1)}
    )


def _set2() -> Algebra:
    return Algebra("set2", Carrier(2), Signature(()), {})


def _n5_unary() -> Algebra:
    # Found by exhaustive search over two-unary-op algebras on 4 elements;
    # its 5 congruences form the non-modular pentagon N5.
    return Algebra(
        "n5_unary",
        Carrier(4),
        Signature((("f", 1), ("g", 1))),
        {"f": (0, 0, 2, 2), "g": (2, 3, 0, 1)},
    )


def bundled_corpus() -> dict[str, Algebra]:
    algebras = [
        _cyclic_group(2),
        _cyclic_group(3),
        _cyclic_group(4),
        _meet_semilattice2(),
        _implication2(),
        _set2(),
        _n5_unary(),
    ]
    return {a.name: a for a in algebras}


def enumerate_reflexive_compatible(
    a: Algebra, cls: RelationClass = RelationClass.REFLEXIVE, size_cap: int = DEFAULT_SIZE_CAP
) -> list[Relation]:
    """All compatible relations of the class on A, lexicographic order.

    Refuses outright (BudgetError) when the carrier exceeds the size cap.
    """
    if a.size > size_cap:
        raise BudgetError(
            f"carrier size {a.size} exceeds enumeration cap {size_cap}"
        )
    return enumerate_class_relations(a, cls)


def _sl_result_record(res: SLResult) -> dict:
    rec: dict = {"verdict": res.verdict}
    if res.quadruple is not None:
        rec["quadruple"] = list(res.quadruple)
    if res.triple is not None:
        rec["triple"] = {
            "R": res.triple[0].pairs(),
            "S": res.triple[1].pairs(),
            "T": res.triple[2].pairs(),
        }
    if res.reason:
        rec["reason"] = res.reason
    return rec


def box_join_replay(a: Algebra, s: Relation, r: Relation, t: Relation) -> bool:
    """Replay of the box/W supremum identity used in the Goursat argument:
    with B = (R box S) ^ Eq(s2) and W built from T and R on the S-pairs,
    checks B W B = W B W.  Meaningful on 3-permutable algebras only."""
    p = as_paired_object(a, s)
    box = build_box(r, p)
    w = build_W(t, r, p)
    b = meet(box, kernel_pair(p, 2))
    bwb = compose(b, compose(w, b))
    wbw = compose(w, compose(b, w))
    return bwb == wbw


def _witness_record(a: Algebra, kind: str, e: Relation) -> dict:
    builder = maltsev_sl_witness if kind == "maltsev" else goursat_sl_witness
    try:
        w = builder(a, e)
    except NoWitnessError as err:
        return {"status": "no-witness", "reason": str(err)}
    replay = shifting_lemma(w.R, w.S, w.T)
    x, y, u, v = w.quadruple
    premises_hold = (
        (x, y) in w.R
        and (x, y) in w.T
        and (x, u) in w.S
        and (y, v) in w.S
        and (u, v) in w.R
    )
    return {
        "status": "violated",
        "E": e.pairs(),
        "quadruple": list(w.quadruple),
        "replay_verdict": replay.verdict,
        "quadruple_violates": premises_hold and (u, v) not in w.T,
    }


def _algebra_record(a: Algebra, budget: int | None) -> dict:
    rec: dict = {"size": a.size}

    maltsev = find_maltsev_term(a)
    threeperm = find_3perm_terms(a)
    rec["terms"] = {
        "maltsev": {
            "status": maltsev.status,
            "term": maltsev.terms[0].sexpr() if maltsev.found else None,
        },
        "threeperm": {
            "status": threeperm.status,
            "r": threeperm.terms[0].sexpr() if threeperm.found else None,
            "s": threeperm.terms[1].sexpr() if threeperm.found else None,
        },
    }

    rec["shifting_lemma"] = {}
    for label, (cr, cs, ct) in SUITE_CLASS_COMBOS:
        res = shifting_lemma_forall(a, cr, cs, ct, budget)
        rec["shifting_lemma"][label] = _sl_result_record(res)

    rec["difunctional_all"] = _sl_result_record(difunctional_all(a, budget=budget))
    rec["goursat_identity_all"] = _sl_result_record(
        goursat_identity_all(a, budget=budget)
    )
    rec["congruence_lattice_modular"] = congruence_lattice_is_modular(a)

    cons = all_congruences(a)
    rec["congruence_count"] = len(cons)
    perm_table = []
    for i, j in itertools.combinations(range(len(cons)), 2):
        verdict = permutability(cons[i], cons[j])
        perm_table.append({"i": i, "j": j, "level": verdict["level"]})
    rec["permutability"] = perm_table

    # Remark-style join check: RSR vs SRS vs transitive closure of the union
    join_ok = all(
        join_via_RSR(r, s) == congruence_join(r, s)
        and join_via_RSR(s, r) == congruence_join(r, s)
        for r, s in itertools.combinations(cons, 2)
    )
    rec["join_via_rsr_matches"] = join_ok

    try:
        refl = enumerate_class_relations(a, RelationClass.REFLEXIVE, budget)
    except BudgetError as err:
        rec["ee_properties"] = f"inconclusive: {err}"
        refl = []
    else:
        ee_all = [ee_properties(a, e, budget) for e in refl]
        rec["ee_properties"] = {
            "all_ee_op_equivalence": all(r["ee_op_is_equivalence"] for r in ee_all),
            "all_ee_op_equals_op_ee": all(r["ee_op_equals_op_ee"] for r in ee_all),
            "reflexive_positive_all_equivalence": (
                ee_all[0]["reflexive_positive_all_equivalence"] if ee_all else True
            ),
        }

    # witness constructions where the predicates fail
    rec["witnesses"] = {}
    non_sym = next((e for e in refl if not is_symmetric(e)), None)
    if non_sym is not None:
        rec["witnesses"]["maltsev"] = _witness_record(a, "maltsev", non_sym)
    gap = next(
        (
            e
            for e in refl
            if compose(e, opposite(e)) != compose(opposite(e), e)
        ),
        None,
    )
    if gap is not None:
        rec["witnesses"]["goursat"] = _witness_record(a, "goursat", gap)

    # box/W supremum replay, meaningful only where the 3-perm terms exist
    if threeperm.found and refl:
        replay_ok = all(
            box_join_replay(a, s, r, t)
            for s in refl
            for r in cons
            for t in cons
        )
        rec["box_join_replay"] = replay_ok

    _check_consistency(a.name, rec)
    return rec


def _check_consistency(name: str, rec: dict) -> None:
    """Terms found must imply the corresponding forward-direction checks."""
    problems = []
    if rec["terms"]["threeperm"]["status"] == "found":
        for key in ("eq,eq,eq", "reflpos,refl,reflpos"):
            if rec["shifting_lemma"][key]["verdict"] == "violated":
                problems.append(f"shifting_lemma[{key}]")
        if rec["goursat_identity_all"]["verdict"] == "violated":
            problems.append("goursat_identity_all")
        ee = rec["ee_properties"]
        if isinstance(ee, dict) and not (
            ee["all_ee_op_equivalence"]
            and ee["all_ee_op_equals_op_ee"]
            and ee["reflexive_positive_all_equivalence"] is True
        ):
            problems.append("ee_properties")
    if rec["terms"]["maltsev"]["status"] == "found":
        if rec["shifting_lemma"]["refl,refl,refl"]["verdict"] == "violated":
            problems.append("shifting_lemma[refl,refl,refl]")
        if rec["difunctional_all"]["verdict"] == "violated":
            problems.append("difunctional_all")
    if problems:
        raise ConsistencyError(f"{name}: term condition contradicted by {problems}")


def run_suite(
    corpus: dict[str, Algebra],
    seed: int = 0,
    budget: int | None = None,
    corpus_id: str = "bundled",
) -> dict:
    """Run every check on every corpus algebra and assemble the report.

    Deterministic: identical corpus, seed and budgets give a byte-identical
    report.  The seed is recorded for any sampled follow-up runs even
    though the bundled suite itself is exhaustive.
    """
    report: dict = {
        "schema": SCHEMA,
        "corpus": corpus_id,
        "seed": seed,
        "budget": budget,
        "version": __version__,
        "algebras": {},
    }
    for name in sorted(corpus):
        try:
            report["algebras"][name] = _algebra_record(corpus[name], budget)
        except ConsistencyError:
            raise
        except Exception as err:  # per-algebra failure: record and continue
            report["algebras"][name] = {"error": f"{type(err).__name__}: {err}"}
    return report
