"""Base change operators and exhaustive checks of the revision postulates."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .errors import LogicError, OperatorUndefined
from .logic import BaseLogic

POSTULATES = ("G1", "G2", "G3", "G4", "G4w", "G5", "G6", "EDF", "Acyc")
# Full-mode triple checks fall back to class representatives above this family size.
FULL_TRIPLE_LIMIT = 64


class Operator:
    """A total map from pairs of bases to bases."""

    kind = "external"

    def __init__(self, logic: BaseLogic):
        self.logic = logic

    def revise(self, k: int, gamma: int) -> int:
        raise NotImplementedError

    def revise_models(self, k: int, gamma: int) -> int:
        """Model set of revise(k, gamma); subclasses may shortcut."""
        return self.logic.models_of(self.revise(k, gamma))

    def to_dict(self) -> dict:
        return materialize(self).to_dict()


class TrivialRevision(Operator):
    """K * G = K u G when jointly consistent, otherwise G."""

    kind = "trivial"

    def revise(self, k, gamma):
        lg = self.logic
        if lg.jointly_consistent(k, gamma):
            return lg.union(k, gamma)
        return gamma

    def revise_models(self, k, gamma):
        mg = self.logic.models_of(gamma)
        both = self.logic.models_of(k) & mg
        return both if both else mg

    def to_dict(self):
        return {"kind": "trivial"}


class UnionOperator(Operator):
    """Plain abstract union K u G, ignoring consistency."""

    kind = "union"

    def revise(self, k, gamma):
        return self.logic.union(k, gamma)

    def revise_models(self, k, gamma):
        return self.logic.models_of(k) & self.logic.models_of(gamma)

    def to_dict(self):
        return {"kind": "union"}


class RuleOperator(Operator):
    """Operator given by a Python callable (k, gamma) -> base."""

    kind = "rule"

    def __init__(self, logic, fn: Callable[[int, int], int], name: str = "rule",
                 models_fn: Callable[[int, int], int] | None = None):
        super().__init__(logic)
        self.fn = fn
        self.name = name
        self._models_fn = models_fn

    def revise(self, k, gamma):
        return self.fn(k, gamma)

    def revise_models(self, k, gamma):
        if self._models_fn is not None:
            return self._models_fn(k, gamma)
        return self.logic.models_of(self.fn(k, gamma))


class TableOperator(Operator):
    """Explicit table with a fallback for missing pairs."""

    kind = "table"

    def __init__(self, logic, table: dict[tuple[int, int], int], fallback: str = "trivial"):
        super().__init__(logic)
        if fallback not in ("trivial", "error"):
            raise ValueError(f"unknown fallback {fallback!r}")
        self.table = dict(table)
        self.fallback = fallback
        self._trivial = TrivialRevision(logic)

    def revise(self, k, gamma):
        r = self.table.get((k, gamma))
        if r is not None:
            return r
        if self.fallback == "error":
            raise OperatorUndefined(k, gamma)
        return self._trivial.revise(k, gamma)

    def revise_models(self, k, gamma):
        r = self.table.get((k, gamma))
        if r is not None:
            return self.logic.models_of(r)
        if self.fallback == "error":
            raise OperatorUndefined(k, gamma)
        return self._trivial.revise_models(k, gamma)

    def to_dict(self):
        lg = self.logic
        entries = [
            {"k": lg.names(k), "gamma": lg.names(g), "result": lg.names(r)}
            for (k, g), r in sorted(self.table.items(), key=lambda kv: (_order(lg, kv[0][0]), _order(lg, kv[0][1])))
        ]
        return {"kind": "table", "fallback": self.fallback, "entries": entries}


def _order(logic, code):
    from .logic import base_key
    return base_key(code)


def trivial_revision(logic: BaseLogic) -> TrivialRevision:
    return TrivialRevision(logic)


def revise(op: Operator, k: int, gamma: int) -> int:
    return op.revise(k, gamma)


def materialize(op: Operator, only_nontrivial: bool = True) -> TableOperator:
    """Table copy of op over every base pair, omitting pairs that agree with trivial revision."""
    lg = op.logic
    triv = TrivialRevision(lg)
    table = {}
    for k in lg.bases():
        for g in lg.bases():
            r = op.revise(k, g)
            if only_nontrivial and r == triv.revise(k, g):
                continue
            table[(k, g)] = r
    return TableOperator(lg, table, "trivial" if only_nontrivial else "error")


def operators_equivalent(op1: Operator, op2: Operator) -> tuple[int, int] | None:
    """First base pair where the two operators give different model sets, or None."""
    lg = op1.logic
    for k in lg.bases():
        for g in lg.bases():
            if op1.revise_models(k, g) != op2.revise_models(k, g):
                return (k, g)
    return None


# serialization


def operator_from_dict(logic: BaseLogic, d: dict) -> Operator:
    if not isinstance(d, dict):
        raise LogicError("operator file must be a JSON object")
    kind = d.get("kind")
    if kind == "trivial":
        return TrivialRevision(logic)
    if kind == "union":
        return UnionOperator(logic)
    if kind == "table":
        fallback = d.get("fallback", "trivial")
        if fallback not in ("trivial", "error"):
            raise LogicError(f"unknown fallback {fallback!r}", "fallback")
        table = {}
        for i, e in enumerate(d.get("entries", [])):
            p = f"entries[{i}]"
            if not isinstance(e, dict):
                raise LogicError("expected {k, gamma, result}", p)
            k = logic.parse_base(e.get("k"), p + ".k")
            g = logic.parse_base(e.get("gamma"), p + ".gamma")
            table[(k, g)] = logic.parse_base(e.get("result"), p + ".result")
        return TableOperator(logic, table, fallback)
    if kind == "from_assignment":
        from .assignments import assignment_from_dict
        return from_assignment(logic, assignment_from_dict(logic, d["assignment"]))
    if kind == "from_loop":
        from .loops import loop_from_dict, operator_from_loop
        return operator_from_loop(logic, loop_from_dict(logic, d["loop"]))
    raise LogicError(f"unknown operator kind {kind!r}", "kind")


# operators induced by assignments


class AssignmentOperator(Operator):
    """K * G is the maximal base whose models are the minimal models of G under the relation of K."""

    kind = "from_assignment"

    def __init__(self, logic, assignment):
        super().__init__(logic)
        self.assignment = assignment
        self._cache: dict[tuple[int, int], int] = {}

    def revise(self, k, gamma):
        from .relations import min_expressibility_witness
        key = (self.assignment.key_of(k), self.logic.models_of(gamma))
        r = self._cache.get(key)
        if r is None:
            r = min_expressibility_witness(self.logic, self.assignment.relation_for(k), gamma)
            self._cache[key] = r
        return r

    def revise_models(self, k, gamma):
        return self.logic.models_of(self.revise(k, gamma))

    def to_dict(self):
        from .assignments import assignment_to_dict
        return {"kind": "from_assignment", "assignment": assignment_to_dict(self.logic, self.assignment)}


def from_assignment(logic: BaseLogic, assignment, check: bool = True) -> AssignmentOperator:
    """Operator selecting minimal models; raises MinSetInexpressible eagerly when check is set."""
    from .relations import min_expressibility_witness
    op = AssignmentOperator(logic, assignment)
    if check:
        for key in assignment.keys():
            rel = assignment.relation_for(key)
            for c in logic.classes():
                min_expressibility_witness(logic, rel, c.rep)
    return op


# postulate checking


@dataclass
class PostulateResult:
    name: str
    status: str  # "pass", "fail" or "unchecked"
    witness: dict[str, Any] | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class PostulateReport:
    mode: str
    results: dict[str, PostulateResult] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    exhaustive: bool = True

    def passed(self, *names: str) -> bool:
        return all(self.results[n].passed for n in names)

    def failed(self) -> list[str]:
        return [n for n, r in self.results.items() if r.status == "fail"]

    def __getitem__(self, name: str) -> PostulateResult:
        return self.results[name]


def _first(items: Sequence, fn: Callable, threads: int):
    """fn over items in order; the first non-None result (deterministic under threading)."""
    if threads <= 1 or len(items) < 2:
        for x in items:
            r = fn(x)
            if r is not None:
                return r
        return None
    with ThreadPoolExecutor(max_workers=threads) as ex:
        for r in ex.map(fn, items):
            if r is not None:
                return r
    return None


class _Revisions:
    """Memoized model sets of K * G."""

    def __init__(self, op: Operator):
        self.op = op
        self.cache: dict[tuple[int, int], int] = {}

    def __call__(self, k: int, g: int) -> int:
        key = (k, g)
        r = self.cache.get(key)
        if r is None:
            r = self.op.revise_models(k, g)
            self.cache[key] = r
        return r


def postulate_report(
    logic: BaseLogic,
    op: Operator,
    mode: str = "full",
    postulates: Iterable[str] | None = None,
    acyc_max_len: int | None = None,
    threads: int = 1,
    triple_limit: int = FULL_TRIPLE_LIMIT,
) -> PostulateReport:
    """Check the revision postulates exhaustively.

    full: G1-G4, G4w quantify over every base pair; the triple postulates use class
    representatives once G4 holds (exact), otherwise every base when the family is small.
    semantic: everything over class representatives; G4 and G4w are left unchecked.
    """
    if mode not in ("full", "semantic"):
        raise ValueError(f"unknown mode {mode!r}")
    wanted = list(postulates) if postulates is not None else [p for p in POSTULATES]
    for p in wanted:
        if p not in POSTULATES:
            raise ValueError(f"unknown postulate {p!r}")
    report = PostulateReport(mode)
    report.exhaustive = True
    classes = logic.classes()
    reps = [c.rep for c in classes]
    rev = _Revisions(op)
    mods = logic.models_of

    if mode == "full":
        bases = list(logic.bases())
        rep_of = {b: logic.class_by_models[mods(b)].rep for b in bases}
        _pair_postulates(logic, op, bases, rep_of, rev, report, wanted, threads)
        g4_ok = report.results["G4"].passed if "G4" in report.results else None
        if g4_ok is None:
            g4_ok = _pair_postulates_g4_only(logic, op, bases, rep_of, rev, threads)
        if g4_ok:
            domain = reps
            report.notes.append("triple postulates quantified over class representatives (exact: G4 holds)")
        elif len(bases) <= triple_limit:
            domain = bases
            report.notes.append("triple postulates quantified over every base (G4 fails)")
        else:
            domain = reps
            report.exhaustive = False
            report.notes.append("triple postulates quantified over class representatives only; "
                                "G4 fails, so this is not exhaustive")
    else:
        domain = reps
        report.notes.append("semantic mode: every postulate quantified over class representatives; "
                            "sound only for operators satisfying G4")
        _pair_postulates(logic, op, reps, {r: r for r in reps}, rev, report,
                         [p for p in wanted if p in ("G1", "G2", "G3")], threads)
        for p in ("G4", "G4w"):
            if p in wanted:
                report.results[p] = PostulateResult(p, "unchecked", note="needs full mode")

    if "G5" in wanted or "G6" in wanted:
        _triple_postulates(logic, domain, rev, report, wanted, threads)
    if "EDF" in wanted:
        report.results["EDF"] = _edf(logic, domain, rev, threads)
    if "Acyc" in wanted:
        report.notes.append("Acyc reads the unions in its statement as the abstract union")
        report.results["Acyc"] = _acyc(logic, domain, rev, acyc_max_len)
    report.results = {p: report.results[p] for p in POSTULATES if p in report.results}
    return report


def _pair_postulates(logic, op, bases, rep_of, rev, report, wanted, threads):
    mods = logic.models_of
    need_g4 = "G4" in wanted or "G4w" in wanted
    rep_rows: dict[int, dict[int, int]] = {}
    rep_gammas = [g for g in bases if rep_of[g] == g]
    if need_g4:
        for r in sorted(set(rep_of.values()), key=bases.index):
            rep_rows[r] = {g: rev(r, g) for g in rep_gammas}

    gm = [(g, mods(g), rep_of[g]) for g in bases]
    revise = op.revise_models

    def scan(k):
        mk = mods(k)
        found = {}
        rrow = rep_rows.get(rep_of[k]) if need_g4 else None
        own = {rg: revise(k, rg) for rg in rep_gammas} if need_g4 else None
        # when K's own rep-gamma row equals its class rep's row, G4w can only fail where G4 does
        same_rows = need_g4 and own == rrow
        for g, mg, rg in gm:
            r = revise(k, g)
            both = mk & mg
            if not (r & ~mg or (both and r != both) or (mg and not r)
                    or (need_g4 and (r != rrow[rg] or not same_rows))):
                continue
            if "G1" not in found and r & ~mg:
                found["G1"] = {"k": k, "gamma": g, "result": r, "gamma_models": mg}
            if "G2" not in found and both and r != both:
                found["G2"] = {"k": k, "gamma": g, "result": r, "union_models": both}
            if "G3" not in found and mg and not r:
                found["G3"] = {"k": k, "gamma": g, "result": r}
            if need_g4:
                if "G4" not in found and r != rrow[rg]:
                    found["G4"] = {"k": k, "gamma": g, "k2": rep_of[k], "gamma2": rg,
                                   "result": r, "result2": rrow[rg]}
                if "G4w" not in found:
                    r2 = own[rg]
                    if r != r2:
                        found["G4w"] = {"k": k, "gamma1": g, "gamma2": rg, "result1": r, "result2": r2}
        return found

    merged: dict[str, dict] = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(scan, bases))
    else:
        parts = (scan(k) for k in bases)
    for part in parts:
        for name, w in part.items():
            merged.setdefault(name, w)
    for p in ("G1", "G2", "G3", "G4", "G4w"):
        if p in wanted:
            w = merged.get(p)
            report.results[p] = PostulateResult(p, "fail" if w else "pass", w)


def _pair_postulates_g4_only(logic, op, bases, rep_of, rev, threads) -> bool:
    tmp = PostulateReport("full")
    _pair_postulates(logic, op, bases, rep_of, rev, tmp, ["G4"], threads)
    return tmp.results["G4"].passed


def _triple_postulates(logic, domain, rev, report, wanted, threads):
    mods = logic.models_of

    def scan(k):
        found = {}
        for g1 in domain:
            r1 = rev(k, g1)
            for g2 in domain:
                m2 = mods(g2)
                u = logic.union(g1, g2)
                ru = rev(k, u)
                lhs = r1 & m2
                if "G5" not in found and lhs & ~ru:
                    found["G5"] = {"k": k, "gamma1": g1, "gamma2": g2, "result1": r1,
                                   "gamma2_models": m2, "result_union": ru}
                if "G6" not in found and lhs and ru & ~lhs:
                    found["G6"] = {"k": k, "gamma1": g1, "gamma2": g2, "result1": r1,
                                   "gamma2_models": m2, "result_union": ru}
            if len(found) == 2:
                break
        return found

    merged: dict[str, dict] = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(scan, domain))
    else:
        parts = (scan(k) for k in domain)
    for part in parts:
        for name, w in part.items():
            merged.setdefault(name, w)
    for p in ("G5", "G6"):
        if p in wanted:
            w = merged.get(p)
            report.results[p] = PostulateResult(p, "fail" if w else "pass", w)


def _edf(logic, domain, rev, threads) -> PostulateResult:
    mods = logic.models_of
    by_models: dict[int, list[int]] = {}
    for g in domain:
        by_models.setdefault(mods(g), []).append(g)

    def scan(k):
        for g1 in domain:
            r1 = rev(k, g1)
            for g2 in domain:
                u = mods(g1) | mods(g2)
                r2 = rev(k, g2)
                for g in by_models.get(u, ()):
                    r = rev(k, g)
                    if r not in (r1, r2, r1 | r2):
                        return {"k": k, "gamma": g, "gamma1": g1, "gamma2": g2,
                                "result": r, "result1": r1, "result2": r2}
        return None

    w = _first(domain, scan, threads)
    return PostulateResult("EDF", "fail" if w else "pass", w)


def _acyc(logic, domain, rev, max_len) -> PostulateResult:
    """Walk G1 -> ... -> Gn (Gi consistent with K * Gi+1) closing back to G1 must give G1 ~ K * Gn."""
    mods = logic.models_of
    size = len(domain)
    limit = size if max_len is None else max_len
    for k in domain:
        res = [rev(k, g) for g in domain]
        gm = [mods(g) for g in domain]
        edge = [[gm[a] & res[b] != 0 for b in range(size)] for a in range(size)]
        for a in range(size):
            # breadth-first walks from a, lengths 1 .. limit - 1
            prev = {a: None}
            depth = {a: 0}
            queue = deque([a])
            while queue:
                x = queue.popleft()
                if depth[x] >= limit - 1:
                    continue
                for y in range(size):
                    if edge[x][y] and y not in depth:
                        depth[y] = depth[x] + 1
                        prev[y] = x
                        queue.append(y)
            for b in range(size):
                if b != a and b in depth and edge[b][a] and not edge[a][b]:
                    path = [b]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    path.reverse()
                    return PostulateResult("Acyc", "fail", {"k": k, "cycle": [domain[i] for i in path]})
    note = "" if max_len is None else f"walks up to length {max_len}"
    return PostulateResult("Acyc", "pass", None, note)


def report_to_dict(logic: BaseLogic, report: PostulateReport) -> dict:
    def enc(v, key):
        if isinstance(v, list):
            return [logic.names(x) for x in v]
        if key in ("k", "k2", "gamma", "gamma1", "gamma2"):
            return logic.names(v)
        return logic.labels(v)

    out = {"mode": report.mode, "notes": list(report.notes), "postulates": {}}
    for name, r in report.results.items():
        entry: dict[str, Any] = {"status": r.status}
        if r.witness:
            entry["witness"] = {key: enc(v, key) for key, v in r.witness.items()}
        if r.note:
            entry["note"] = r.note
        out["postulates"][name] = entry
    return out
