"""Preference relations read off a revision operator for a fixed base K.

The canonical encoding puts w1 below w2 unless some revision shows evidence
against it; the literature encodings instead relate two interpretations only
when a revision rewards the first one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import FormInexpressible
from .logic import BaseLogic, FamilyKind, bits
from .operators import Operator
from .relations import PreferenceRelation, min_expressibility_candidate, transitive_closure

log = logging.getLogger(__name__)


def _domain(logic: BaseLogic, domain: str) -> list[int]:
    if domain == "classes":
        return [c.rep for c in logic.classes()]
    if domain == "bases":
        return list(logic.bases())
    raise ValueError(f"unknown domain {domain!r}")


def sqrel(logic: BaseLogic, op: Operator, k: int, domain: str = "classes") -> PreferenceRelation:
    """w1 below w2 iff every revision of k covering both that keeps w2 also keeps w1."""
    full = logic.full
    rows = [full] * logic.n
    for g in _domain(logic, domain):
        m = logic.models_of(g)
        r = op.revise_models(k, g) & m
        kept = m & r
        if not kept:
            continue
        for i in bits(m & ~r):
            rows[i] &= ~kept
    return PreferenceRelation(logic.n, tuple(rows))


def canonical_from_sqrel(logic: BaseLogic, sq: PreferenceRelation, k_models: int) -> PreferenceRelation:
    rows = []
    for i in range(logic.n):
        if k_models >> i & 1:
            rows.append(logic.full)
        else:
            rows.append(sq.rows[i] & ~k_models)
    return PreferenceRelation(logic.n, tuple(rows))


def canonical_rel(logic: BaseLogic, op: Operator, k: int, domain: str = "classes") -> PreferenceRelation:
    """K-models below everything; among non-models, the sqrel order."""
    return canonical_from_sqrel(logic, sqrel(logic, op, k, domain), logic.models_of(k))


@dataclass(frozen=True)
class DetachedPairs:
    """Symmetric, irreflexive set of interpretation pairs no revision keeps."""

    pairs: frozenset[tuple[int, int]]

    def unordered(self) -> set[frozenset[int]]:
        return {frozenset(p) for p in self.pairs}

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def detached_pairs(logic: BaseLogic, op: Operator, k: int, domain: str = "classes") -> DetachedPairs:
    attached = [0] * logic.n
    for g in _domain(logic, domain):
        m = logic.models_of(g)
        kept = op.revise_models(k, g) & m
        if not kept:
            continue
        for i in bits(kept):
            attached[i] |= m
        for i in bits(m):
            attached[i] |= kept
    out = set()
    for i in range(logic.n):
        for j in range(logic.n):
            if i != j and not attached[i] >> j & 1:
                out.add((i, j))
    return DetachedPairs(frozenset(out))


# literature encodings


def _form(logic: BaseLogic, i: int, j: int) -> int:
    b = min_expressibility_candidate(logic, (1 << i) | (1 << j))
    if b is None:
        raise FormInexpressible((i, j))
    return b


def km_pair(logic: BaseLogic, op: Operator, k: int, i: int, j: int) -> bool:
    """w_i <= w_j iff w_i |= K or w_i |= K * form(w_i, w_j); needs a base with exactly {w_i, w_j}."""
    form = _form(logic, i, j)
    if logic.models_of(k) >> i & 1:
        return True
    return bool(op.revise_models(k, form) >> i & 1)


def km_rel(logic: BaseLogic, op: Operator, k: int) -> PreferenceRelation:
    return PreferenceRelation.from_pairs(
        logic.n, ((i, j) for i in range(logic.n) for j in range(logic.n) if km_pair(logic, op, k, i, j)))


def common_sentences_base(logic: BaseLogic, models: int) -> int | None:
    """All sentences true in every interpretation of models, packed as a base of the family.

    Single-sentence families fold the set with the conjunction table; None when the
    set is empty and the family disallows the empty base.
    """
    s = logic.closure_of_models(models)
    if logic.family.kind is FamilyKind.SINGLE:
        ids = bits(s)
        if not ids:
            return 0 if logic.is_base(0) else None
        acc = 1 << ids[0]
        for x in ids[1:]:
            acc = logic.union(acc, 1 << x)
        return acc
    return s if logic.is_base(s) else None


def _rewarded_pairs(logic: BaseLogic, op: Operator, k: int):
    for i in range(logic.n):
        for j in range(logic.n):
            g = common_sentences_base(logic, (1 << i) | (1 << j))
            if g is None:
                log.debug("pair (%d, %d) skipped: no base for the common sentences", i, j)
                yield i, j, False
                continue
            yield i, j, bool(op.revise_models(k, g) >> i & 1)


def dpw_rel(logic: BaseLogic, op: Operator, k: int) -> PreferenceRelation:
    """Transitive closure of {(w1, w2) | w1 |= K * (t(w1) & t(w2))}."""
    base = PreferenceRelation.from_pairs(logic.n, ((i, j) for i, j, hit in _rewarded_pairs(logic, op, k) if hit))
    return transitive_closure(base)


def aiguier_rel(logic: BaseLogic, op: Operator, k: int) -> PreferenceRelation:
    """w1 <= w2 iff w1 |= K or w1 |= K * {w1, w2}*."""
    mk = logic.models_of(k)
    return PreferenceRelation.from_pairs(
        logic.n, ((i, j) for i, j, hit in _rewarded_pairs(logic, op, k) if hit or mk >> i & 1))


ENCODERS = {
    "canonical": canonical_rel,
    "sqrel": sqrel,
    "km": km_rel,
    "dpw": dpw_rel,
    "aiguier": aiguier_rel,
}
