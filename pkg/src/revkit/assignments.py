"""Assignments K -> preference relation, faithfulness and compatibility."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import LogicError, PostulatePrerequisiteFailed
from .logic import BaseLogic, bits
from .operators import Operator, postulate_report
from .relations import (
    PreferenceRelation,
    min_complete_witness,
    min_expressibility_candidate,
    min_models,
    min_retractive_witness,
)


@dataclass
class Assignment:
    """Relations keyed by model set (semantic) or by base code (syntactic)."""

    logic: BaseLogic
    keying: str
    relations: dict[int, PreferenceRelation]

    def __post_init__(self):
        if self.keying not in ("semantic", "syntactic"):
            raise ValueError(f"unknown keying {self.keying!r}")

    def key_of(self, k: int) -> int:
        return self.logic.models_of(k) if self.keying == "semantic" else k

    def relation_for(self, k: int) -> PreferenceRelation:
        try:
            return self.relations[self.key_of(k)]
        except KeyError:
            raise LogicError(f"assignment has no relation for base {self.logic.names(k)}") from None

    def keys(self) -> list[int]:
        """One base per distinct relation slot, in canonical base order."""
        if self.keying == "semantic":
            return [c.rep for c in self.logic.classes()]
        return list(self.logic.bases())

    @classmethod
    def semantic(cls, logic: BaseLogic, fn: Callable[[int], PreferenceRelation]) -> "Assignment":
        """Build from a function of the model set of K."""
        return cls(logic, "semantic", {c.models: fn(c.models) for c in logic.classes()})

    @classmethod
    def syntactic(cls, logic: BaseLogic, fn: Callable[[int], PreferenceRelation]) -> "Assignment":
        return cls(logic, "syntactic", {b: fn(b) for b in logic.bases()})


def two_level(n: int, k_models: int) -> PreferenceRelation:
    """w1 <= w2 iff w1 |= K or w2 does not: models of K below everything else."""
    full = (1 << n) - 1
    return PreferenceRelation(n, tuple(full if k_models >> i & 1 else full & ~k_models for i in range(n)))


def trivial_assignment(logic: BaseLogic) -> Assignment:
    return Assignment.semantic(logic, lambda m: two_level(logic.n, m))


@dataclass
class FaithfulnessReport:
    F1: bool
    F2: bool
    F3: bool
    total: bool
    preorder_assignment: bool
    min_complete: bool
    min_retractive: bool
    min_expressible: bool
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def faithful(self) -> bool:
        return self.F1 and self.F2 and self.F3

    @property
    def quasi_faithful(self) -> bool:
        return self.F1 and self.F2

    @property
    def min_friendly(self) -> bool:
        return self.min_complete and self.min_retractive


def faithfulness_report(logic: BaseLogic, a: Assignment) -> FaithfulnessReport:
    w: dict[str, tuple] = {}
    for k in a.keys():
        rel = a.relation_for(k)
        mk = logic.models_of(k)
        if "F1" not in w:
            for i in bits(mk):
                strict_below = mk & ~rel.cols[i] & rel.rows[i]
                if strict_below:
                    w["F1"] = (k, i, bits(strict_below)[0])
                    break
        if "F2" not in w:
            outside = logic.full & ~mk
            for i in bits(mk):
                bad = outside & ~(rel.rows[i] & ~rel.cols[i])
                if bad:
                    w["F2"] = (k, i, bits(bad)[0])
                    break
        if "total" not in w:
            for i in range(logic.n):
                missing = logic.full & ~(rel.rows[i] | rel.cols[i])
                if missing:
                    w["total"] = (k, i, bits(missing)[0])
                    break
        if "preorder" not in w and not rel.is_preorder():
            w["preorder"] = (k,)
        if "min_complete" not in w:
            g = min_complete_witness(logic, rel)
            if g is not None:
                w["min_complete"] = (k, g)
        if "min_retractive" not in w:
            t = min_retractive_witness(logic, rel)
            if t is not None:
                w["min_retractive"] = (k,) + t
        if "min_expressible" not in w:
            for c in logic.classes():
                m = min_models(rel, c.models)
                if min_expressibility_candidate(logic, m) is None:
                    w["min_expressible"] = (k, c.rep, m)
                    break
    if a.keying == "syntactic":
        for b in logic.bases():
            rep = logic.representative(b)
            if a.relation_for(b) != a.relation_for(rep):
                w["F3"] = (b, rep)
                break
    return FaithfulnessReport(
        F1="F1" not in w, F2="F2" not in w, F3="F3" not in w,
        total="total" not in w,
        preorder_assignment="preorder" not in w,
        min_complete="min_complete" not in w,
        min_retractive="min_retractive" not in w,
        min_expressible="min_expressible" not in w,
        witnesses=w,
    )


def compatibility_check(logic: BaseLogic, op: Operator, a: Assignment) -> tuple[bool, tuple | None]:
    """Mod(K * G) = min(Mod(G), <=_K) for every K slot and every class of G."""
    for k in a.keys():
        rel = a.relation_for(k)
        for c in logic.classes():
            want = min_models(rel, c.models)
            got = op.revise_models(k, c.rep)
            if got != want:
                return False, (k, c.rep, got, want)
    return True, None


def compatible_relation(logic: BaseLogic, op: Operator, k: int, rel: PreferenceRelation) -> bool:
    return all(op.revise_models(k, c.rep) == min_models(rel, c.models) for c in logic.classes())


def extract_assignment(logic: BaseLogic, op: Operator, report=None) -> Assignment:
    """Canonical relation for every K; semantic keying iff the operator satisfies G4."""
    from .encoding import canonical_rel

    if report is None:
        report = postulate_report(logic, op, "full", ["G4", "G5", "G6"])
    if not report.passed("G5", "G6"):
        raise PostulatePrerequisiteFailed([p for p in ("G5", "G6") if not report.results[p].passed])
    if report.results.get("G4") is not None and report.results["G4"].passed:
        return Assignment(logic, "semantic",
                          {c.models: canonical_rel(logic, op, c.rep) for c in logic.classes()})
    return Assignment(logic, "syntactic",
                      {b: canonical_rel(logic, op, b, domain="bases") for b in logic.bases()})


def faithfulize(logic: BaseLogic, a: Assignment, op: Operator) -> Assignment:
    """Re-key by model set, each class taking the relation of its canonical representative."""
    rep = postulate_report(logic, op, "full", ["G4"])
    if not rep.passed("G4"):
        raise PostulatePrerequisiteFailed(["G4"])
    return Assignment(logic, "semantic", {c.models: a.relation_for(c.rep) for c in logic.classes()})


# serialization


def assignment_to_dict(logic: BaseLogic, a: Assignment) -> dict:
    entries = []
    for k in a.keys():
        key = "class_of" if a.keying == "semantic" else "base"
        entries.append({key: logic.names(k), "pairs": [list(p) for p in a.relation_for(k).pairs()]})
    return {"keying": a.keying, "entries": entries}


def assignment_from_dict(logic: BaseLogic, d: dict) -> Assignment:
    if not isinstance(d, dict):
        raise LogicError("assignment must be a JSON object")
    keying = d.get("keying", "semantic")
    if keying not in ("semantic", "syntactic"):
        raise LogicError(f"unknown keying {keying!r}", "keying")
    rels: dict[int, PreferenceRelation] = {}
    for i, e in enumerate(d.get("entries", [])):
        p = f"entries[{i}]"
        names = e.get("class_of", e.get("base"))
        code = logic.parse_base(names, p)
        try:
            rel = PreferenceRelation.from_pairs(logic.n, (tuple(x) for x in e["pairs"]))
        except (KeyError, ValueError, TypeError) as err:
            raise LogicError(str(err), p + ".pairs") from None
        rels[logic.models_of(code) if keying == "semantic" else code] = rel
    a = Assignment(logic, keying, rels)
    for k in a.keys():
        if a.key_of(k) not in rels:
            raise LogicError(f"no entry for base {logic.names(k)}", "entries")
    return a
