"""Theorem-instance harness: representation checks, preorder enforcement, seeded sweeps."""

from __future__ import annotations

import random
import time
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any, Callable

from .assignments import (
    Assignment,
    compatibility_check,
    extract_assignment,
    faithfulness_report,
    two_level,
)
from .encoding import canonical_rel, sqrel
from .logic import BaseFamily, BaseLogic, FamilyKind, bits
from .loops import detect_critical_loop
from .operators import (
    Operator,
    from_assignment,
    operators_equivalent,
    postulate_report,
)
from .relations import PreferenceRelation, min_expressibility_candidate, min_models
from .tpo import to_total_preorder, tpo_hits

AGM = ("G1", "G2", "G3", "G4", "G5", "G6")
QUASI = ("G1", "G2", "G3", "G5", "G6")


@dataclass
class Clause:
    name: str
    status: str  # "pass", "fail" or "not_applicable"
    detail: str = ""
    witness: Any = None


@dataclass
class RepresentationReport:
    postulates: Any
    clauses: list[Clause] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.clauses)

    def clause(self, name: str) -> Clause:
        return next(c for c in self.clauses if c.name == name)


def _assignment_flags(logic, op, a: Assignment, need_faithful: bool):
    fr = faithfulness_report(logic, a)
    ok_compat, cw = compatibility_check(logic, op, a)
    missing = []
    if not fr.min_expressible:
        missing.append("min-expressible")
    if not fr.min_friendly:
        missing.append("min-friendly")
    if need_faithful and not fr.faithful:
        missing.append("faithful")
    if not fr.quasi_faithful:
        missing.append("quasi-faithful")
    if not ok_compat:
        missing.append("compatible")
    return missing, (fr.witnesses, cw)


def check_representation(logic: BaseLogic, op: Operator, threads: int = 1) -> RepresentationReport:
    """Both directions of the representation results, clause by clause, for one operator."""
    rep = postulate_report(logic, op, "full", list(AGM) + ["G4w"], threads=threads)
    out = RepresentationReport(rep)
    failed = {p: rep[p].witness for p in rep.failed()}
    agm_ok = rep.passed(*AGM)
    quasi_ok = rep.passed(*QUASI)

    # faithful regime
    if agm_ok:
        a = extract_assignment(logic, op, rep)
        missing, w = _assignment_flags(logic, op, a, True)
        out.clauses.append(Clause("faithful-representation", "fail" if missing else "pass",
                                  "missing: " + ", ".join(missing) if missing else
                                  "extracted assignment is min-expressible, min-friendly, faithful, compatible",
                                  w if missing else None))
        back = from_assignment(logic, a, check=False)
        diff = operators_equivalent(op, back)
        out.clauses.append(Clause("round-trip", "fail" if diff else "pass",
                                  "operator rebuilt from its extracted assignment"
                                  + (" differs" if diff else " is semantically equal"), diff))
    else:
        out.clauses.append(Clause("faithful-representation", "not_applicable",
                                  "G1-G6 do not all hold", failed))

    # quasi-faithful regime
    if quasi_ok:
        a = extract_assignment(logic, op, rep)
        missing, w = _assignment_flags(logic, op, a, False)
        out.clauses.append(Clause("quasi-faithful-representation", "fail" if missing else "pass",
                                  "missing: " + ", ".join(missing) if missing else
                                  "extracted assignment is min-expressible, min-friendly, quasi-faithful, compatible",
                                  w if missing else None))
    else:
        out.clauses.append(Clause("quasi-faithful-representation", "not_applicable",
                                  "G1-G3, G5, G6 do not all hold", failed))

    # total preorders
    loop = detect_critical_loop(logic)
    if not quasi_ok:
        out.clauses.append(Clause("preorder-representation", "not_applicable",
                                  "G1-G3, G5, G6 do not all hold", failed))
    elif loop is not None:
        out.clauses.append(Clause("preorder-representation", "not_applicable",
                                  "the logic admits a critical loop", loop))
    else:
        keys = [c.rep for c in logic.classes()] if agm_ok else list(logic.bases())
        keying = "semantic" if agm_ok else "syntactic"
        rels = {}
        bad = None
        for k in keys:
            trace = to_total_preorder(logic, op, k, rep, loop_check=False)
            rels[logic.models_of(k) if agm_ok else k] = trace.final
            if not trace.compatible and bad is None:
                bad = k
        a = Assignment(logic, keying, rels)
        missing, w = _assignment_flags(logic, op, a, agm_ok)
        fr = faithfulness_report(logic, a)
        if not (fr.total and fr.preorder_assignment):
            missing.append("total preorder")
        out.clauses.append(Clause("preorder-representation", "fail" if missing else "pass",
                                  "missing: " + ", ".join(missing) if missing else
                                  "pipeline yields a compatible min-complete total preorder assignment",
                                  w if missing else None))
    return out


def representation_to_dict(logic: BaseLogic, r: RepresentationReport) -> dict:
    from .operators import report_to_dict

    def enc(x):
        if x is None or isinstance(x, (bool, int, str, float)):
            return x
        if isinstance(x, dict):
            return {str(k): enc(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [enc(v) for v in x]
        return str(x)

    return {
        "postulates": report_to_dict(logic, r.postulates),
        "clauses": [{"name": c.name, "status": c.status, "detail": c.detail,
                     "witness": enc(c.witness) if not hasattr(c.witness, "edges") else
                     {"k": logic.names(c.witness.k), "nodes": [logic.names(g) for g in c.witness.nodes],
                      "edges": [logic.names(e) for e in c.witness.edges]}}
                    for c in r.clauses],
        "ok": r.ok,
    }


# preorder enforcement


@dataclass
class EnforcingResult:
    enforcing: bool
    witness: PreferenceRelation | None
    exhaustive: bool
    trio_expressible: bool
    relations_checked: int

    @property
    def agrees(self) -> bool:
        return self.enforcing == self.trio_expressible


@lru_cache(maxsize=None)
def total_relations(n: int) -> tuple[PreferenceRelation, ...]:
    """Every total relation on range(n); each unordered pair is one of <, >, or both ways."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for choice in product((0, 1, 2), repeat=len(pairs)):
        rows = [1 << i for i in range(n)]
        for (i, j), c in zip(pairs, choice):
            if c != 1:
                rows[i] |= 1 << j
            if c != 0:
                rows[j] |= 1 << i
        out.append(PreferenceRelation(n, tuple(rows)))
    return tuple(out)


def _min_friendly(rel: PreferenceRelation, class_models: list[int]) -> bool:
    for m in class_models:
        mins = min_models(rel, m)
        if not mins:
            return False
        for lo in bits(m & ~mins):
            if rel.rows[lo] & mins:
                return False
    return True


def trio_counterexample(n: int, triple: tuple[int, int, int]) -> PreferenceRelation:
    """Total min-friendly non-transitive relation for a logic where the triple is not expressible.

    Points outside the triple form a chain below it; inside, a1 <= a2, a1 ~ a3, a2 <= a3.
    """
    a1, a2, a3 = triple
    others = [x for x in range(n) if x not in triple]
    pairs = [(i, i) for i in range(n)]
    for pos, x in enumerate(others):
        pairs += [(x, y) for y in others[pos + 1:]]
        pairs += [(x, t) for t in triple]
    pairs += [(a1, a2), (a1, a3), (a3, a1), (a2, a3)]
    return PreferenceRelation.from_pairs(n, pairs)


def check_preorder_enforcing(logic: BaseLogic, exhaustive_limit: int = 4, samples: int = 2000,
                             seed: int = 0) -> EnforcingResult:
    """Is every total min-friendly relation transitive?  Exhaustive up to exhaustive_limit worlds."""
    sr = logic.structure_report()
    class_models = [c.models for c in logic.classes() if c.models]
    n = logic.n
    exhaustive = n <= exhaustive_limit
    if exhaustive:
        candidates = total_relations(n)
    else:
        rng = random.Random(seed)
        candidates = tuple(_random_total(rng, n) for _ in range(samples))
    found = None
    for rel in candidates:
        if not rel.is_transitive() and _min_friendly(rel, class_models):
            found = rel
            break
    if found is not None and sr.trio_witness is not None:
        built = trio_counterexample(n, sr.trio_witness)
        if _min_friendly(built, class_models) and not built.is_transitive():
            found = built
    if found is None and not exhaustive and sr.trio_witness is not None:
        # sampling missed it; the constructed relation is a certificate on its own
        built = trio_counterexample(n, sr.trio_witness)
        if _min_friendly(built, class_models):
            found = built
    return EnforcingResult(found is None, found, exhaustive, sr.is_trio_expressible, len(candidates))


def _random_total(rng: random.Random, n: int) -> PreferenceRelation:
    rows = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.randrange(3)
            if c != 1:
                rows[i] |= 1 << j
            if c != 0:
                rows[j] |= 1 << i
    return PreferenceRelation(n, tuple(rows))


# seeded generators


PROFILES = {
    "micro": {"max_omega": 5, "max_sentences": 8},
    "small": {"max_omega": 7, "max_sentences": 12},
}


def _profile(profile: str) -> dict:
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; known: {', '.join(PROFILES)}") from None


def case_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"revkit/{seed}/{index}")


def generate_logic(rng: random.Random, profile: str = "micro") -> BaseLogic:
    prof = _profile(profile)
    n = rng.randint(2, prof["max_omega"])
    full = (1 << n) - 1
    kind = rng.choice([FamilyKind.ARBITRARY, FamilyKind.FINITE, FamilyKind.SINGLE, FamilyKind.BELIEF])
    while True:
        m = rng.randint(1, prof["max_sentences"])
        masks = [rng.randrange(0, full + 1) for _ in range(m)]
        if kind is FamilyKind.SINGLE:
            # close under intersection so a conjunction table exists
            closed = list(dict.fromkeys(masks))
            for a in closed:
                for b in list(closed):
                    if (a & b) not in closed:
                        closed.append(a & b)
            if len(closed) > prof["max_sentences"]:
                continue
            masks = closed
        break
    allow_empty = rng.random() < 0.5 if kind is not FamilyKind.SINGLE else False
    sents = [(f"s{i}", mk) for i, mk in enumerate(masks)]
    return BaseLogic([f"w{i}" for i in range(n)], sents, BaseFamily(kind, allow_empty))


def _random_levels(rng: random.Random, n: int, bottom: int) -> list[int]:
    """Random weak order with the points of bottom (if any) forming the lowest level."""
    levels = [0] * n
    shift = 1 if bottom else 0
    for i in range(n):
        if not bottom >> i & 1:
            levels[i] = shift + rng.randrange(n)
    return levels


def _min_expressible(logic: BaseLogic, rel: PreferenceRelation) -> bool:
    return all(min_expressibility_candidate(logic, min_models(rel, c.models)) is not None
               for c in logic.classes())


def generate_relation_for(logic: BaseLogic, rng: random.Random, k_models: int, tries: int = 20) -> PreferenceRelation:
    """Faithful min-expressible total preorder for a K with these models."""
    for _ in range(tries):
        rel = PreferenceRelation.from_levels(_random_levels(rng, logic.n, k_models))
        if _min_expressible(logic, rel):
            return rel
    return two_level(logic.n, k_models) if k_models else PreferenceRelation.full(logic.n)


def generate_assignment(logic: BaseLogic, rng: random.Random, keying: str = "semantic") -> Assignment:
    if keying == "semantic":
        return Assignment(logic, "semantic",
                          {c.models: generate_relation_for(logic, rng, c.models) for c in logic.classes()})
    return Assignment(logic, "syntactic",
                      {b: generate_relation_for(logic, rng, logic.models_of(b)) for b in logic.bases()})


def generate_operator(logic: BaseLogic, rng: random.Random, keying: str = "semantic") -> Operator:
    return from_assignment(logic, generate_assignment(logic, rng, keying), check=False)


def generate(seed: int, profile: str = "micro", what: str = "logic"):
    """Reproducible logic, assignment or operator for a seed."""
    rng = case_rng(seed, 0)
    logic = generate_logic(rng, profile)
    if what == "logic":
        return logic
    if what == "assignment":
        return generate_assignment(logic, rng)
    if what == "operator":
        return generate_operator(logic, rng)
    raise ValueError(f"unknown generator target {what!r}")


# sweeps


@dataclass
class SweepOutcome:
    name: str
    description: str
    cases: int = 0
    applicable: int = 0
    violations: list[tuple[int, str]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


SWEEPS: dict[str, str] = {
    "a": "operators built from faithful min-expressible min-friendly assignments satisfy G1-G6",
    "b": "extracted assignments are compatible, min-friendly, min-expressible and faithful",
    "c": "operators satisfying G1, G5, G6 satisfy G4w",
    "c3": "operators satisfying G1, G3, G5, G6 satisfy G4w",
    "d": "the canonical relation contains every compatible faithful weak order",
    "e": "with a universal base the sq relation equals the canonical relation",
    "f": "transitive closure adds only detached pairs on loop-free logics",
    "trio": "preorder-enforcing iff trio-expressible",
}


def _case(seed: int, index: int, profile: str, which: tuple[str, ...]) -> dict[str, tuple[bool, str] | None]:
    """Run the selected sweeps on one seeded case; None marks a sweep whose premise fails."""
    rng = case_rng(seed, index)
    logic = generate_logic(rng, profile)
    out: dict[str, tuple[bool, str] | None] = {}
    a = generate_assignment(logic, rng)
    op = from_assignment(logic, a, check=False)
    needs_op = {"a", "b", "d", "e", "f"} & set(which)
    rep = postulate_report(logic, op, "full", list(AGM)) if needs_op else None

    if "a" in which:
        bad = rep.failed()
        out["a"] = (not bad, f"fails {bad}" if bad else "")
    if "b" in which:
        if rep.passed(*AGM):
            ext = extract_assignment(logic, op, rep)
            missing, _ = _assignment_flags(logic, op, ext, True)
            out["b"] = (not missing, f"missing {missing}" if missing else "")
        else:
            out["b"] = None
    if "c" in which or "c3" in which:
        # syntactic assignments may break G4 while keeping G1, G5, G6
        sa = generate_assignment(logic, rng, "syntactic")
        cop = from_assignment(logic, sa, check=False)
        if rng.random() < 0.5:
            cop = _perturbed(logic, cop, rng)
        crep = postulate_report(logic, cop, "full", ["G1", "G3", "G4w", "G5", "G6"])
        # a premise verified only on class representatives proves nothing here
        for name, premise in (("c", ("G1", "G5", "G6")), ("c3", ("G1", "G3", "G5", "G6"))):
            if name not in which:
                continue
            if crep.exhaustive and crep.passed(*premise):
                out[name] = (crep.passed("G4w"), f"G4w witness {crep['G4w'].witness}; "
                             f"G3 {crep['G3'].status}")
            else:
                out[name] = None
    if "d" in which:
        if logic.n <= 5 and rep.passed(*AGM):
            msg = ""
            for c in logic.classes():
                canon = canonical_rel(logic, op, c.rep)
                for hit in tpo_hits(logic, op, c.rep):
                    if not hit.issubset(canon):
                        msg = f"K={logic.names(c.rep)}: weak order {hit} not inside canonical {canon}"
                        break
                if msg:
                    break
            out["d"] = (not msg, msg)
        else:
            out["d"] = None
    if "e" in which:
        sr = logic.structure_report()
        if sr.has_universal_base and rep.passed(*AGM):
            msg = ""
            for c in logic.classes():
                if sqrel(logic, op, c.rep) != canonical_rel(logic, op, c.rep):
                    msg = f"K={logic.names(c.rep)}"
                    break
            out["e"] = (not msg, msg)
        else:
            out["e"] = None
    if "f" in which:
        if rep.passed(*QUASI) and detect_critical_loop(logic) is None:
            msg = ""
            for c in logic.classes():
                tr = to_total_preorder(logic, op, c.rep, rep, loop_check=False)
                added = set(tr.step2.pairs()) - set(tr.step1.pairs())
                extra = sorted(p for p in added if p not in tr.detached)
                if extra:
                    msg = f"K={logic.names(c.rep)}: closure added non-detached pairs {extra}"
                    break
            out["f"] = (not msg, msg)
        else:
            out["f"] = None
    if "trio" in which:
        if logic.n <= 4:
            res = check_preorder_enforcing(logic)
            out["trio"] = (res.agrees, f"enforcing={res.enforcing} trio={res.trio_expressible}")
        else:
            out["trio"] = None
    return out


def _perturbed(logic: BaseLogic, op: Operator, rng: random.Random) -> Operator:
    """Copy of op with one random revision result replaced, to exercise failing premises."""
    from .operators import RuleOperator

    bases = list(logic.bases())
    k, g = rng.choice(bases), rng.choice(bases)
    r = rng.choice(bases)

    def fn(k2, g2):
        return r if (k2, g2) == (k, g) else op.revise(k2, g2)

    return RuleOperator(logic, fn, "perturbed")


def sweep(profile: str = "micro", n: int = 1000, seed: int = 7, which: tuple[str, ...] | None = None,
          threads: int = 1, progress: Callable[[int], None] | None = None) -> list[SweepOutcome]:
    """Run the seeded property sweeps; results aggregate in case order regardless of threads."""
    which = tuple(which) if which else tuple(SWEEPS)
    for w in which:
        if w not in SWEEPS:
            raise ValueError(f"unknown sweep {w!r}")
    outcomes = {w: SweepOutcome(w, SWEEPS[w]) for w in which}
    start = time.perf_counter()

    def run(i):
        return _case(seed, i, profile, which)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, range(n)))
    else:
        results = []
        for i in range(n):
            results.append(run(i))
            if progress:
                progress(i)
    for i, res in enumerate(results):
        for w, r in res.items():
            o = outcomes[w]
            o.cases += 1
            if r is None:
                continue
            o.applicable += 1
            if not r[0]:
                o.violations.append((i, r[1]))
    total = time.perf_counter() - start
    for o in outcomes.values():
        o.seconds = total
    return list(outcomes.values())


def junit_xml(outcomes: list[SweepOutcome], suite: str = "revkit.sweep") -> str:
    failures = sum(1 for o in outcomes if not o.ok)
    ts = ET.Element("testsuite", name=suite, tests=str(len(outcomes)), failures=str(failures),
                    errors="0", time=f"{sum(o.seconds for o in outcomes[:1]):.3f}")
    for o in outcomes:
        tc = ET.SubElement(ts, "testcase", classname=suite, name=f"sweep_{o.name}")
        ET.SubElement(tc, "system-out").text = (
            f"{o.description}: {o.applicable}/{o.cases} cases applicable, {len(o.violations)} violations")
        if not o.ok:
            f = ET.SubElement(tc, "failure", message=f"{len(o.violations)} violations")
            f.text = "\n".join(f"case {i}: {msg}" for i, msg in o.violations[:20])
    return ET.tostring(ts, encoding="unicode")
