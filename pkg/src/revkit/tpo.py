"""Turning the canonical relation into a compatible total preorder.

Step I drops detached pairs (except those starting at a model of K), step II
takes the transitive closure and step III linearizes the resulting preorder.
A brute-force search over all weak orders serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import networkx as nx

from .assignments import Assignment
from .encoding import DetachedPairs, canonical_rel, detached_pairs
from .errors import CriticalLoopPresent, NotAPreorder, OmegaTooLarge, PostulatePrerequisiteFailed
from .logic import BaseLogic, bits
from .loops import detect_critical_loop
from .operators import Operator, PostulateReport, postulate_report
from .relations import PreferenceRelation, min_models, transitive_closure

MAX_WEAK_ORDER_OMEGA = 7


def linearize(pre: PreferenceRelation) -> PreferenceRelation:
    """Total preorder extending pre: equivalence classes laid out in a topological order."""
    if not pre.is_preorder():
        raise NotAPreorder("linearize needs a reflexive and transitive relation")
    n = pre.n
    cls_of = {}
    classes: list[int] = []
    for i in range(n):
        if i in cls_of:
            continue
        members = pre.rows[i] & pre.cols[i]
        for j in bits(members):
            cls_of[j] = len(classes)
        classes.append(members)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(classes)))
    for i, j in pre.pairs():
        a, b = cls_of[i], cls_of[j]
        if a != b:
            dag.add_edge(a, b)
    order = list(nx.lexicographical_topological_sort(dag, key=lambda c: bits(classes[c])[0]))
    level = {c: pos for pos, c in enumerate(order)}
    return PreferenceRelation.from_levels([level[cls_of[i]] for i in range(n)])


@dataclass
class PipelineTrace:
    k: int
    step0: PreferenceRelation
    detached: DetachedPairs
    step1: PreferenceRelation
    step2: PreferenceRelation
    step3: PreferenceRelation
    # class representative -> (revision models, min under step0..step3)
    snapshots: dict[int, tuple[int, int, int, int, int]] = field(default_factory=dict)

    @property
    def final(self) -> PreferenceRelation:
        return self.step3

    @property
    def compatible(self) -> bool:
        return all(s[4] == s[0] for s in self.snapshots.values())

    @property
    def minima_preserved(self) -> bool:
        return all(len(set(s[1:])) == 1 for s in self.snapshots.values())


def _require(report: PostulateReport, names) -> None:
    bad = [p for p in names if not report.results[p].passed]
    if bad:
        raise PostulatePrerequisiteFailed(bad)


def to_total_preorder(logic: BaseLogic, op: Operator, k: int, report: PostulateReport | None = None,
                      loop_check: bool = True) -> PipelineTrace:
    if report is None:
        report = postulate_report(logic, op, "full", ["G1", "G2", "G3", "G4", "G5", "G6"])
    _require(report, ["G1", "G2", "G3", "G5", "G6"])
    if loop_check:
        loop = detect_critical_loop(logic)
        if loop is not None:
            raise CriticalLoopPresent(loop)
    domain = "classes" if "G4" in report.results and report.results["G4"].passed else "bases"
    step0 = canonical_rel(logic, op, k, domain)
    det = detached_pairs(logic, op, k, domain)
    # rows of K-models stay full: F1 and F2 already fix them, and dropping a vacuously
    # detached pair there would let linearization rank a non-model below a model
    mk = logic.models_of(k)
    step1 = step0.minus(p for p in det.pairs if not mk >> p[0] & 1)
    step2 = transitive_closure(step1)
    step3 = linearize(step2)
    trace = PipelineTrace(k, step0, det, step1, step2, step3)
    for c in logic.classes():
        trace.snapshots[c.rep] = (op.revise_models(k, c.rep),) + tuple(
            min_models(r, c.models) for r in (step0, step1, step2, step3))
    return trace


def weak_orders(n: int) -> Iterator[list[int]]:
    """All total preorders on range(n) as level vectors, as ordered set partitions.

    Blocks are chosen first by the smallest remaining subsets in lexicographic order.
    """
    if n > MAX_WEAK_ORDER_OMEGA:
        raise OmegaTooLarge(n, MAX_WEAK_ORDER_OMEGA)
    levels = [0] * n

    def rec(remaining: tuple[int, ...], depth: int):
        if not remaining:
            yield list(levels)
            return
        for size in range(1, len(remaining) + 1):
            for block in combinations(remaining, size):
                for x in block:
                    levels[x] = depth
                rest = tuple(x for x in remaining if x not in block)
                yield from rec(rest, depth + 1)

    yield from rec(tuple(range(n)), 0)


@lru_cache(maxsize=None)
def weak_order_relations(n: int) -> tuple[PreferenceRelation, ...]:
    return tuple(PreferenceRelation.from_levels(lv) for lv in weak_orders(n))


def _quasi_faithful(rel: PreferenceRelation, k_models: int, full: int) -> bool:
    for i in bits(k_models):
        strict = rel.rows[i] & ~rel.cols[i]
        if strict & k_models:
            return False
        if (full & ~k_models) & ~strict:
            return False
    return True


def tpo_hits(logic: BaseLogic, op: Operator, k: int) -> Iterator[PreferenceRelation]:
    """Every quasi-faithful, min-complete weak order compatible with op at k."""
    targets = [(c.models, op.revise_models(k, c.rep)) for c in logic.classes()]
    mk = logic.models_of(k)
    for rel in weak_order_relations(logic.n):
        if not _quasi_faithful(rel, mk, logic.full):
            continue
        if all(min_models(rel, m) == r and (r or not m) for m, r in targets):
            yield rel


def brute_force_tpo_search(logic: BaseLogic, op: Operator, k_scope: str = "one",
                           k: int | None = None) -> Assignment | None:
    """First compatible weak order per K (one base or every class), or None if some K has none."""
    if logic.n > MAX_WEAK_ORDER_OMEGA:
        raise OmegaTooLarge(logic.n, MAX_WEAK_ORDER_OMEGA)
    if k_scope == "one":
        if k is None:
            raise ValueError("k_scope 'one' needs k")
        keys = [k]
    elif k_scope == "all":
        keys = [c.rep for c in logic.classes()]
    else:
        raise ValueError(f"unknown k_scope {k_scope!r}")
    rels = {}
    for key in keys:
        hit = next(tpo_hits(logic, op, key), None)
        if hit is None:
            return None
        rels[logic.models_of(key)] = hit
    return Assignment(logic, "semantic", rels)


def trace_to_dict(logic: BaseLogic, trace: PipelineTrace) -> dict:
    def mat(r):
        return [[int(x) for x in row] for row in r.matrix()]

    return {
        "k": logic.names(trace.k),
        "step0": mat(trace.step0),
        "detached": sorted([list(p) for p in trace.detached.pairs]),
        "step1": mat(trace.step1),
        "step2": mat(trace.step2),
        "step3": mat(trace.step3),
        "compatible": trace.compatible,
        "snapshots": [
            {"gamma": logic.names(g), "revision": logic.labels(s[0]),
             "min": [logic.labels(x) for x in s[1:]]}
            for g, s in trace.snapshots.items()
        ],
    }
