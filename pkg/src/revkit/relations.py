"""Preference relations over interpretations and their minimality properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import MinSetInexpressible
from .logic import BaseLogic, FamilyKind, bits


@dataclass(frozen=True)
class PreferenceRelation:
    """Binary relation on n interpretations; bit j of rows[i] means i <= j."""

    n: int
    rows: tuple[int, ...]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "PreferenceRelation":
        rows = [0] * n
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i}, {j}) outside 0..{n - 1}")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> "PreferenceRelation":
        n = len(matrix)
        return cls.from_pairs(n, ((i, j) for i in range(n) for j in range(n) if matrix[i][j]))

    @classmethod
    def full(cls, n: int) -> "PreferenceRelation":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_levels(cls, levels: list[int]) -> "PreferenceRelation":
        """Total preorder where i <= j iff levels[i] <= levels[j]."""
        n = len(levels)
        return cls.from_pairs(n, ((i, j) for i in range(n) for j in range(n) if levels[i] <= levels[j]))

    def le(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        return self.le(i, j) and not self.le(j, i)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """cols[j] has bit i set iff i <= j."""
        out = [0] * self.n
        for i, r in enumerate(self.rows):
            for j in bits(r):
                out[j] |= 1 << i
        return tuple(out)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.rows[i])]

    def matrix(self) -> list[list[bool]]:
        return [[self.le(i, j) for j in range(self.n)] for i in range(self.n)]

    def issubset(self, other: "PreferenceRelation") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def minus(self, pairs: Iterable[tuple[int, int]]) -> "PreferenceRelation":
        rows = list(self.rows)
        for i, j in pairs:
            rows[i] &= ~(1 << j)
        return PreferenceRelation(self.n, tuple(rows))

    def is_reflexive(self) -> bool:
        return all(r >> i & 1 for i, r in enumerate(self.rows))

    def is_total(self) -> bool:
        return totality_witness(self) is None

    def is_transitive(self) -> bool:
        return transitivity_witness(self) is None

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def __str__(self) -> str:
        return "\n".join("".join("1" if self.le(i, j) else "." for j in range(self.n)) for i in range(self.n))


def min_models(rel: PreferenceRelation, m: int) -> int:
    """Elements of m that are <= every element of m."""
    out = 0
    for i in bits(m):
        if m & ~rel.rows[i] == 0:
            out |= 1 << i
    return out


def transitive_closure(rel: PreferenceRelation) -> PreferenceRelation:
    rows = list(rel.rows)
    for k in range(rel.n):
        rk = rows[k]
        bit = 1 << k
        for i in range(rel.n):
            if rows[i] & bit:
                rows[i] |= rk
    return PreferenceRelation(rel.n, tuple(rows))


def totality_witness(rel: PreferenceRelation) -> tuple[int, int] | None:
    for i in range(rel.n):
        for j in range(i, rel.n):
            if not (rel.le(i, j) or rel.le(j, i)):
                return (i, j)
    return None


def transitivity_witness(rel: PreferenceRelation) -> tuple[int, int, int] | None:
    rows = rel.rows
    for i in range(rel.n):
        for j in bits(rows[i]):
            missing = rows[j] & ~rows[i]
            if missing:
                return (i, j, bits(missing)[0])
    return None


@dataclass
class RelationReport:
    total: bool
    reflexive: bool
    transitive: bool
    min_complete: bool
    min_retractive: bool
    min_friendly: bool
    min_expressible: bool
    witnesses: dict[str, tuple] = field(default_factory=dict)
    expressibility_witnesses: dict[int, int] = field(default_factory=dict)


def min_complete_witness(logic: BaseLogic, rel: PreferenceRelation) -> int | None:
    """First consistent base class (by representative) with no minimal model."""
    for c in logic.classes():
        if c.models and not min_models(rel, c.models):
            return c.rep
    return None


def min_retractive_witness(logic: BaseLogic, rel: PreferenceRelation) -> tuple[int, int, int] | None:
    """(gamma, w_low, w_min) with w_low <= w_min, w_min minimal, w_low not minimal."""
    for c in logic.classes():
        mins = min_models(rel, c.models)
        if not mins:
            continue
        for lo in bits(c.models & ~mins):
            hit = rel.rows[lo] & mins
            if hit:
                return (c.rep, lo, bits(hit)[0])
    return None


def min_expressibility_candidate(logic: BaseLogic, models: int) -> int | None:
    """The maximal base with exactly these models, or None if the family has none."""
    if logic.family.kind is FamilyKind.SINGLE:
        for s in logic.sentences:
            if s.models == models:
                return 1 << s.id
        return 0 if models == logic.full and logic.is_base(0) else None
    cand = logic.closure_of_models(models)
    if logic.models_of(cand) == models and logic.is_base(cand):
        return cand
    return None


def min_expressibility_witness(logic: BaseLogic, rel: PreferenceRelation, gamma: int) -> int:
    m = min_models(rel, logic.models_of(gamma))
    cand = min_expressibility_candidate(logic, m)
    if cand is None:
        raise MinSetInexpressible(m, logic.labels(m))
    return cand


def property_report(logic: BaseLogic, rel: PreferenceRelation) -> RelationReport:
    w: dict[str, tuple] = {}
    tw = totality_witness(rel)
    if tw:
        w["total"] = tw
    refl = next((i for i in range(rel.n) if not rel.le(i, i)), None)
    if refl is not None:
        w["reflexive"] = (refl,)
    trw = transitivity_witness(rel)
    if trw:
        w["transitive"] = trw
    mc = min_complete_witness(logic, rel)
    if mc is not None:
        w["min_complete"] = (mc,)
    mr = min_retractive_witness(logic, rel)
    if mr is not None:
        w["min_retractive"] = mr
    expr: dict[int, int] = {}
    for c in logic.classes():
        m = min_models(rel, c.models)
        if m in expr:
            continue
        cand = min_expressibility_candidate(logic, m)
        if cand is None:
            w.setdefault("min_expressible", (c.rep, m))
        else:
            expr[m] = cand
    return RelationReport(
        total=tw is None,
        reflexive=refl is None,
        transitive=trw is None,
        min_complete=mc is None,
        min_retractive=mr is None,
        min_friendly=mc is None and mr is None,
        min_expressible="min_expressible" not in w,
        witnesses=w,
        expressibility_witnesses=expr,
    )


def relation_to_dict(logic: BaseLogic | None, rel: PreferenceRelation, for_base: int | None = None) -> dict:
    d: dict = {}
    if for_base is not None and logic is not None:
        d["for_base"] = logic.names(for_base)
    d["pairs"] = [list(p) for p in rel.pairs()]
    return d


def relation_from_dict(n: int, d: dict) -> PreferenceRelation:
    return PreferenceRelation.from_pairs(n, (tuple(p) for p in d["pairs"]))
