"""Finite base logics: sentences with model sets, base families and abstract union.

Model sets are int bitmasks over the interpretations (bit i set iff the i-th
interpretation is a model).  Bases are int bitmasks over sentence ids, called
base codes.  Both encodings are immutable and hashable, which keeps every
exhaustive sweep cheap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Sequence

from .errors import (
    ConjunctionUnavailable,
    EnumerationCapExceeded,
    LogicError,
    UnknownSentenceId,
)

DEFAULT_ENUM_CAP = 12
# single-sentence logics with more distinct model sets check conjunctions lazily
EAGER_CONJ_LIMIT = 4096


def enum_cap() -> int:
    """Enumeration cap in sentences; REVKIT_ENUM_CAP overrides the default."""
    raw = os.environ.get("REVKIT_ENUM_CAP")
    return int(raw) if raw else DEFAULT_ENUM_CAP


def bits(mask: int) -> list[int]:
    """Indices of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FamilyKind(str, Enum):
    ARBITRARY = "ArbitrarySets"
    FINITE = "FiniteSets"
    SINGLE = "SingleSentences"
    BELIEF = "BeliefSets"


@dataclass(frozen=True)
class BaseFamily:
    kind: FamilyKind = FamilyKind.ARBITRARY
    allow_empty: bool = True


@dataclass(frozen=True)
class Sentence:
    id: int
    name: str
    models: int


@dataclass(frozen=True)
class SemanticClass:
    """All bases sharing one model set, in canonical base order."""

    id: int
    models: int
    members: tuple[int, ...]

    @property
    def rep(self) -> int:
        return self.members[0]


@dataclass
class StructureReport:
    supports_conjunction: bool
    conjunction_witness: tuple[int, int] | None
    is_disjunctive: bool
    disjunction_witness: tuple[int, int] | None
    has_universal_base: bool
    universal_base: int | None
    is_trio_expressible: bool
    trio_witness: tuple[int, int, int] | None
    extra: dict[str, Any] = field(default_factory=dict)


class BaseLogic:
    """A finite logic (L, Omega, |=) with a base family and its abstract union."""

    def __init__(
        self,
        interpretations: Sequence[str],
        sentences: Sequence[tuple[str, int]],
        family: BaseFamily = BaseFamily(),
        conjunction: dict[tuple[int, int], int] | None = None,
    ):
        labels = [str(x) for x in interpretations]
        if len(set(labels)) != len(labels):
            raise LogicError("duplicate interpretation label", "interpretations")
        self.interpretations: tuple[str, ...] = tuple(labels)
        self.n = len(labels)
        self.full = (1 << self.n) - 1
        names = [name for name, _ in sentences]
        if len(set(names)) != len(names):
            raise LogicError("duplicate sentence name", "sentences")
        for i, (name, m) in enumerate(sentences):
            if m < 0 or m & ~self.full:
                raise LogicError(f"models of {name!r} outside Omega", f"sentences[{i}].models")
        self.sentences: tuple[Sentence, ...] = tuple(
            Sentence(i, name, m) for i, (name, m) in enumerate(sentences)
        )
        self.smods: tuple[int, ...] = tuple(s.models for s in self.sentences)
        self.index = {s.name: s.id for s in self.sentences}
        self.family = family
        self.conjunction: dict[tuple[int, int], int] | None = None
        self._mod_cache: dict[int, int] = {0: self.full}
        self._by_models: dict[int, int] = {}
        for s in self.sentences:
            self._by_models.setdefault(s.models, s.id)
        if family.kind is FamilyKind.SINGLE:
            self.conjunction = self._complete_conjunction(conjunction or {})
        elif conjunction:
            self.conjunction = self._complete_conjunction(conjunction, strict=False)

    # construction helpers

    def _complete_conjunction(self, table, strict=True):
        out = {}
        size = len(self.sentences)
        for (a, b), c in table.items():
            for x in (a, b, c):
                if not 0 <= x < size:
                    raise UnknownSentenceId(f"sentence id {x} out of range", "conjunction")
            if self.smods[c] != self.smods[a] & self.smods[b]:
                raise ConjunctionUnavailable(
                    a, b, f"conjunction entry ({self.sentences[a].name}, {self.sentences[b].name}) -> "
                    f"{self.sentences[c].name} breaks Mod(a^b) = Mod(a) & Mod(b)")
            out[(a, b)] = c
            out.setdefault((b, a), c)
        if not strict:
            return out
        # derived entries are looked up on demand; the closure check is eager for small logics
        sets = list(self._by_models)
        if len(sets) <= EAGER_CONJ_LIMIT:
            for i, m1 in enumerate(sets):
                for m2 in sets[i + 1:]:
                    if m1 & m2 not in self._by_models:
                        a, b = self._by_models[m1], self._by_models[m2]
                        raise ConjunctionUnavailable(a, b, "single-sentence bases need a conjunction for "
                                                     f"({self.sentences[a].name}, {self.sentences[b].name})")
        return out

    def with_family(self, family: BaseFamily, conjunction=None) -> "BaseLogic":
        return BaseLogic(self.interpretations, [(s.name, s.models) for s in self.sentences],
                         family, conjunction if conjunction is not None else self.conjunction)

    # naming

    def sid(self, item: int | str) -> int:
        if isinstance(item, str):
            if item not in self.index:
                raise UnknownSentenceId(f"unknown sentence {item!r}")
            return self.index[item]
        if not 0 <= item < len(self.sentences):
            raise UnknownSentenceId(f"unknown sentence id {item}")
        return item

    def base(self, *items: int | str) -> int:
        """Base code for the given sentence names or ids (not validated against the family)."""
        return mask_of(self.sid(x) for x in items)

    def ids(self, code: int) -> tuple[int, ...]:
        return tuple(bits(code))

    def names(self, code: int) -> list[str]:
        return [self.sentences[i].name for i in bits(code)]

    def labels(self, models: int) -> list[str]:
        return [self.interpretations[i] for i in bits(models)]

    def models_from_labels(self, labels: Iterable[str], path: str = "") -> int:
        pos = {x: i for i, x in enumerate(self.interpretations)}
        m = 0
        for lab in labels:
            if lab not in pos:
                raise LogicError(f"unknown interpretation {lab!r}", path)
            m |= 1 << pos[lab]
        return m

    # semantics

    def models_of(self, code: int) -> int:
        m = self._mod_cache.get(code)
        if m is None:
            if code >> len(self.sentences):
                raise UnknownSentenceId(f"base {code:#x} mentions unknown sentence ids")
            m = self.full
            for i in bits(code):
                m &= self.smods[i]
            self._mod_cache[code] = m
        return m

    def closure(self, code: int) -> int:
        m = self.models_of(code)
        return mask_of(i for i, sm in enumerate(self.smods) if m & ~sm == 0)

    def closure_of_models(self, models: int) -> int:
        """The maximal base {phi | models is a subset of Mod(phi)}."""
        return mask_of(i for i, sm in enumerate(self.smods) if models & ~sm == 0)

    def union(self, b1: int, b2: int) -> int:
        kind = self.family.kind
        if kind is FamilyKind.SINGLE:
            if b1 == 0 or b2 == 0:
                return b1 | b2
            a, b = bits(b1), bits(b2)
            if len(a) != 1 or len(b) != 1:
                raise LogicError("single-sentence union applied to a non-singleton base")
            c = self.conjunction.get((a[0], b[0])) if self.conjunction is not None else None
            if c is None and self.conjunction is not None:
                c = self._by_models.get(self.smods[a[0]] & self.smods[b[0]])
            if c is None:
                raise ConjunctionUnavailable(a[0], b[0])
            return 1 << c
        if kind is FamilyKind.BELIEF:
            return self.closure(b1 | b2)
        return b1 | b2

    def entails(self, b1: int, b2: int) -> bool:
        return self.models_of(b1) & ~self.models_of(b2) == 0

    def equivalent(self, b1: int, b2: int) -> bool:
        return self.models_of(b1) == self.models_of(b2)

    def consistent(self, b: int) -> bool:
        return self.models_of(b) != 0

    def jointly_consistent(self, b1: int, b2: int) -> bool:
        return self.models_of(b1) & self.models_of(b2) != 0

    # family membership

    def is_base(self, code: int) -> bool:
        if code < 0 or code >> len(self.sentences):
            return False
        if code == 0:
            if self.family.kind is FamilyKind.BELIEF:
                return self.family.allow_empty and self.closure(0) == 0
            return self.family.allow_empty
        if self.family.kind is FamilyKind.SINGLE:
            return code & (code - 1) == 0
        if self.family.kind is FamilyKind.BELIEF:
            return self.closure(code) == code
        return True

    def check_base(self, code: int, path: str = "") -> int:
        if not self.is_base(code):
            kind = self.family.kind.value
            raise LogicError(f"{self.names(code)} is not a base of family {kind}"
                             f" (allow_empty={self.family.allow_empty})", path)
        return code

    # enumeration

    def family_size(self) -> int:
        kind = self.family.kind
        if kind is FamilyKind.SINGLE:
            return len(self.sentences) + (1 if self.family.allow_empty else 0)
        if kind is FamilyKind.BELIEF:
            return len(self._belief_bases)
        return (1 << len(self.sentences)) - (0 if self.family.allow_empty else 1)

    def _check_cap(self, cap: int | None) -> None:
        cap = enum_cap() if cap is None else cap
        if self.family.kind in (FamilyKind.ARBITRARY, FamilyKind.FINITE):
            size = len(self.sentences)
        else:
            size = max(self.family_size() - 1, 0).bit_length()
        if size > cap:
            raise EnumerationCapExceeded(size, cap)

    @cached_property
    def _belief_bases(self) -> list[int]:
        expressible = {self.full}
        for sm in self.smods:
            expressible |= {sm & m for m in expressible}
        out = {self.closure_of_models(m) for m in expressible}
        if not self.family.allow_empty:
            out.discard(0)
        return list(out)

    @cached_property
    def _bases(self) -> tuple[int, ...]:
        kind = self.family.kind
        if kind is FamilyKind.SINGLE:
            out = [1 << i for i in range(len(self.sentences))]
            if self.family.allow_empty:
                out.append(0)
        elif kind is FamilyKind.BELIEF:
            out = list(self._belief_bases)
        else:
            size = len(self.sentences)
            smods = self.smods
            table = [self.full] * (1 << size)
            for c in range(1, 1 << size):
                low = c & -c
                table[c] = table[c ^ low] & smods[low.bit_length() - 1]
            self._mod_cache.update(enumerate(table))
            out = list(range(0 if self.family.allow_empty else 1, 1 << size))
        out.sort(key=base_key)
        return tuple(out)

    def bases(self, cap: int | None = None) -> tuple[int, ...]:
        """Every base of the family in canonical order (size, then sorted ids)."""
        self._check_cap(cap)
        return self._bases

    @cached_property
    def _classes(self) -> tuple[SemanticClass, ...]:
        groups: dict[int, list[int]] = {}
        for b in self._bases:
            groups.setdefault(self.models_of(b), []).append(b)
        ordered = sorted(groups.items(), key=lambda kv: base_key(kv[1][0]))
        return tuple(SemanticClass(i, m, tuple(mem)) for i, (m, mem) in enumerate(ordered))

    def classes(self, cap: int | None = None) -> tuple[SemanticClass, ...]:
        """Semantic classes ordered by their representative (fewest sentences, then ids)."""
        self._check_cap(cap)
        return self._classes

    @cached_property
    def class_by_models(self) -> dict[int, SemanticClass]:
        return {c.models: c for c in self.classes()}

    def expressible(self, models: int) -> bool:
        return models in self.class_by_models

    def representative(self, code: int) -> int:
        return self.class_by_models[self.models_of(code)].rep

    # reports

    def structure_report(self) -> StructureReport:
        by_models = {}
        for s in self.sentences:
            by_models.setdefault(s.models, s.id)
        conj_w = None
        for a, b in combinations(range(len(self.sentences)), 2):
            if (self.smods[a] & self.smods[b]) not in by_models:
                conj_w = (a, b)
                break
        classes = self.classes()
        exprs = self.class_by_models
        disj_w = None
        for c1, c2 in combinations(classes, 2):
            if (c1.models | c2.models) not in exprs:
                disj_w = (c1.rep, c2.rep)
                break
        universal = exprs.get(self.full)
        trio_w = None
        for t in combinations(range(self.n), 3):
            if mask_of(t) not in exprs:
                trio_w = t
                break
        return StructureReport(
            supports_conjunction=conj_w is None,
            conjunction_witness=conj_w,
            is_disjunctive=disj_w is None,
            disjunction_witness=disj_w,
            has_universal_base=universal is not None,
            universal_base=universal.rep if universal else None,
            is_trio_expressible=trio_w is None,
            trio_witness=trio_w,
        )

    # serialization

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "interpretations": list(self.interpretations),
            "sentences": [{"name": s.name, "models": self.labels(s.models)} for s in self.sentences],
            "family": {"kind": self.family.kind.value, "allow_empty": self.family.allow_empty},
        }
        if self.conjunction is not None and self.family.kind is FamilyKind.SINGLE:
            d["conjunction"] = [
                [self.sentences[a].name, self.sentences[b].name, self.sentences[c].name]
                for (a, b), c in sorted(self.conjunction.items()) if a <= b
            ]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BaseLogic":
        if not isinstance(d, dict):
            raise LogicError("logic file must be a JSON object")
        interps = d.get("interpretations")
        if not isinstance(interps, list) or not interps:
            raise LogicError("missing or empty list", "interpretations")
        pos = {str(x): i for i, x in enumerate(interps)}
        sents = d.get("sentences")
        if not isinstance(sents, list):
            raise LogicError("missing list", "sentences")
        parsed = []
        for i, s in enumerate(sents):
            if not isinstance(s, dict) or "name" not in s or "models" not in s:
                raise LogicError("expected {name, models}", f"sentences[{i}]")
            m = 0
            for j, lab in enumerate(s["models"]):
                if str(lab) not in pos:
                    raise LogicError(f"unknown interpretation {lab!r}", f"sentences[{i}].models[{j}]")
                m |= 1 << pos[str(lab)]
            parsed.append((str(s["name"]), m))
        fam = d.get("family", {})
        try:
            kind = FamilyKind(fam.get("kind", "ArbitrarySets"))
        except ValueError:
            raise LogicError(f"unknown family kind {fam.get('kind')!r}", "family.kind") from None
        family = BaseFamily(kind, bool(fam.get("allow_empty", kind is not FamilyKind.SINGLE)))
        names = {name: i for i, (name, _) in enumerate(parsed)}
        table = None
        if "conjunction" in d:
            table = {}
            for i, row in enumerate(d["conjunction"]):
                if not isinstance(row, list) or len(row) != 3:
                    raise LogicError("expected [a, b, a_and_b]", f"conjunction[{i}]")
                try:
                    a, b, c = (names[x] for x in row)
                except KeyError as e:
                    raise UnknownSentenceId(f"unknown sentence {e.args[0]!r}", f"conjunction[{i}]") from None
                table[(a, b)] = c
        return cls(list(map(str, interps)), parsed, family, table)

    def parse_base(self, names: Any, path: str = "") -> int:
        if not isinstance(names, list):
            raise LogicError("base must be a list of sentence names", path)
        code = 0
        for j, x in enumerate(names):
            if x not in self.index:
                raise UnknownSentenceId(f"unknown sentence {x!r}", f"{path}[{j}]")
            code |= 1 << self.index[x]
        return self.check_base(code, path)


def base_key(code: int) -> tuple[int, tuple[int, ...]]:
    """Canonical base order: fewer sentences first, then lexicographic ids."""
    ids = tuple(bits(code))
    return (len(ids), ids)


def lex_key(code: int) -> tuple[int, ...]:
    """Plain lexicographic order on sorted id tuples (a proper prefix sorts first)."""
    return tuple(bits(code))


# functional surface


def models_of(logic: BaseLogic, base: int) -> int:
    return logic.models_of(base)


def abstract_union(logic: BaseLogic, b1: int, b2: int) -> int:
    return logic.union(b1, b2)


def entails(logic: BaseLogic, b1: int, b2: int) -> bool:
    return logic.entails(b1, b2)


def consequence_closure(logic: BaseLogic, base: int) -> int:
    return logic.closure(base)


def structure_report(logic: BaseLogic) -> StructureReport:
    return logic.structure_report()


def enumerate_bases(logic: BaseLogic, cap: int | None = None) -> tuple[int, ...]:
    return logic.bases(cap)


def semantic_classes(logic: BaseLogic, cap: int | None = None) -> list[int]:
    return [c.rep for c in logic.classes(cap)]
