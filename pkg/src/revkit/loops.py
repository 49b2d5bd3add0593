"""Critical loops: detection, the operator they induce, and strict circles.

A critical loop is a ring of edge bases G(0,1), G(1,2), ..., G(n,0), each
inconsistent with K, around pairwise inconsistent node bases G(i) with
G(i), G(i+1) inside G(i,i+1), such that every base consistent with three or
more nodes still has a consistent base strictly outside all edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import networkx as nx

from .errors import InvalidLoop, PostulatePrerequisiteFailed
from .logic import BaseLogic, SemanticClass, bits, lex_key
from .operators import Operator, TrivialRevision, postulate_report


@dataclass(frozen=True)
class CriticalLoop:
    k: int
    edges: tuple[int, ...]
    nodes: tuple[int, ...]
    # covering base (consistent with >= 3 nodes) -> consistent base outside all edges
    certificates: tuple[tuple[int, int], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.nodes)


def _nonempty_subset_table(logic: BaseLogic) -> list[bool]:
    """has[m]: some consistent base has its models inside m."""
    exprs = logic.class_by_models
    size = 1 << logic.n
    has = [False] * size
    for m in range(1, size):
        if m in exprs:
            has[m] = True
            continue
        for i in bits(m):
            if has[m ^ (1 << i)]:
                has[m] = True
                break
    return has


def _covering(classes: list[SemanticClass], node_masks: list[int]) -> list[SemanticClass]:
    return [c for c in classes if sum(1 for nm in node_masks if c.models & nm) >= 3]


def _certificate(logic, k_models, cover_models, union_edges, classes) -> SemanticClass | None:
    best = None
    for c in classes:
        if c.models and c.models & ~(cover_models & ~union_edges) == 0:
            if not c.models & k_models:
                return c
            if best is None:
                best = c
    return best


def detect_critical_loop(logic: BaseLogic, max_len: int | None = None) -> CriticalLoop | None:
    """Least critical loop by (length, K class, node classes, edge classes), or None."""
    classes = list(logic.classes())
    has = _nonempty_subset_table(logic)
    limit = logic.n if max_len is None else max_len
    consistent = [c for c in classes if c.models]
    exprs = logic.class_by_models

    def cond3(node_masks, union):
        return all(has[c.models & ~union] for c in _covering(classes, node_masks))

    for length in range(3, limit + 1):
        best_key = None
        best = None

        def extend(chain: list[SemanticClass], used: int):
            if len(chain) == length:
                finish(chain)
                return
            for c in consistent:
                if c.id <= chain[0].id or c.models & used:
                    continue
                masks = [x.models for x in chain] + [c.models]
                if len(masks) >= 3:
                    # a base whose models are exactly three nodes leaves nothing outside the edges
                    if any((a | b | c.models) in exprs for a, b in combinations(masks[:-1], 2)):
                        continue
                    if not cond3(masks, used | c.models):
                        continue
                extend(chain + [c], used | c.models)

        def finish(chain):
            nonlocal best_key, best
            options = []
            for i in range(length):
                need = chain[i].models | chain[(i + 1) % length].models
                opts = [c for c in classes if need & ~c.models == 0]
                if not opts:
                    return
                options.append(opts)
            masks = [x.models for x in chain]
            for edges in product(*options):
                union = 0
                for e in edges:
                    union |= e.models
                k = next((c for c in classes if not c.models & union), None)
                if k is None:
                    continue
                key = (k.id, tuple(x.id for x in chain), tuple(e.id for e in edges))
                if best_key is not None and key >= best_key:
                    continue
                if not cond3(masks, union):
                    continue
                best_key = key
                best = (k, chain, edges, union)

        for first in consistent:
            extend([first], first.models)
        if best is not None:
            k, chain, edges, union = best
            certs = []
            for c in _covering(classes, [x.models for x in chain]):
                cert = _certificate(logic, k.models, c.models, union, classes)
                certs.append((c.rep, cert.rep))
            return CriticalLoop(k.rep, tuple(e.rep for e in edges), tuple(x.rep for x in chain), tuple(certs))
    return None


def validate_loop(logic: BaseLogic, loop: CriticalLoop) -> None:
    """Raise InvalidLoop unless all three loop conditions hold."""
    n = len(loop.nodes)
    if n < 3 or len(loop.edges) != n:
        raise InvalidLoop("a loop needs at least three nodes and one edge per node")
    mods = logic.models_of
    mk = mods(loop.k)
    nm = [mods(g) for g in loop.nodes]
    em = [mods(e) for e in loop.edges]
    for i, m in enumerate(nm):
        if not m:
            raise InvalidLoop(f"node {i} is inconsistent")
    for i, m in enumerate(em):
        if m & mk:
            raise InvalidLoop(f"edge {i} is consistent with K")
        if (nm[i] | nm[(i + 1) % n]) & ~m:
            raise InvalidLoop(f"edge {i} does not contain nodes {i} and {(i + 1) % n}")
    for i in range(n):
        for j in range(i + 1, n):
            if nm[i] & nm[j]:
                raise InvalidLoop(f"nodes {i} and {j} are jointly consistent")
    union = 0
    for m in em:
        union |= m
    has = _nonempty_subset_table(logic)
    for c in _covering(list(logic.classes()), nm):
        if not has[c.models & ~union]:
            raise InvalidLoop(f"base {logic.names(c.rep)} meets three nodes but has no consistent "
                              "base outside the edges")


class LoopOperator(Operator):
    """Revision that follows the loop around K and is trivial revision elsewhere."""

    kind = "from_loop"

    def __init__(self, logic: BaseLogic, loop: CriticalLoop):
        super().__init__(logic)
        validate_loop(logic, loop)
        self.loop = loop
        self.k_models = logic.models_of(loop.k)
        self.node_models = [logic.models_of(g) for g in loop.nodes]
        self._trivial = TrivialRevision(logic)
        self.candidates = self._outside_bases()

    def _outside_bases(self) -> list[tuple[tuple[int, ...], int, int]]:
        """Bases certifying condition (3) that are inconsistent with K, as (lex key, code, models)."""
        lg = self.logic
        union = 0
        for e in self.loop.edges:
            union |= lg.models_of(e)
        covers = _covering(list(lg.classes()), self.node_models)
        out = []
        for c in lg.classes():
            if not c.models or c.models & self.k_models:
                continue
            if any(c.models & ~(cv.models & ~union) == 0 for cv in covers):
                code = min(c.members, key=lex_key)
                out.append((lex_key(code), code, c.models))
        out.sort()
        return out

    def revise(self, k, gamma):
        lg = self.logic
        if lg.models_of(k) != self.k_models:
            return self._trivial.revise(k, gamma)
        mg = lg.models_of(gamma)
        if mg & self.k_models:
            return lg.union(gamma, k)
        for _, code, m in self.candidates:
            if m & mg:
                return lg.union(gamma, code)
        n = len(self.node_models)
        for i in range(n):
            if not self.node_models[i] & mg:
                continue
            others = [j for j in range(n) if j != i and j != (i + 1) % n]
            if all(not self.node_models[j] & mg for j in others):
                return lg.union(gamma, self.loop.nodes[i])
        return gamma

    def to_dict(self):
        return {"kind": "from_loop", "loop": loop_to_dict(self.logic, self.loop)}


def operator_from_loop(logic: BaseLogic, loop: CriticalLoop) -> LoopOperator:
    return LoopOperator(logic, loop)


# strict circles


@dataclass(frozen=True)
class StrictCircle:
    k: int
    interpretations: tuple[int, ...]


def strict_circles(logic: BaseLogic, op: Operator, k: int, max_len: int | None = None,
                   check: bool = True) -> list[StrictCircle]:
    """Simple cycles w0 < w1 <= ... <= wn <= w0 of the canonical relation avoiding detached pairs."""
    from .encoding import canonical_rel, detached_pairs

    if check:
        rep = postulate_report(logic, op, "full", ["G1", "G2", "G3", "G5", "G6"])
        if rep.failed():
            raise PostulatePrerequisiteFailed(rep.failed())
    rel = canonical_rel(logic, op, k)
    det = detached_pairs(logic, op, k)
    g = nx.DiGraph()
    g.add_nodes_from(range(logic.n))
    for i, j in rel.pairs():
        if i != j and (i, j) not in det:
            g.add_edge(i, j)
    bound = logic.n if max_len is None else max_len
    found = set()
    for cyc in nx.simple_cycles(g, length_bound=bound):
        if len(cyc) < 3:
            continue
        rotations = []
        for s in range(len(cyc)):
            rot = tuple(cyc[s:] + cyc[:s])
            if rel.lt(rot[0], rot[1]):
                rotations.append(rot)
        if rotations:
            found.add(min(rotations))
    return [StrictCircle(k, c) for c in sorted(found, key=lambda c: (len(c), c))]


# serialization


def loop_to_dict(logic: BaseLogic, loop: CriticalLoop) -> dict:
    return {
        "k": logic.names(loop.k),
        "edges": [logic.names(e) for e in loop.edges],
        "nodes": [logic.names(g) for g in loop.nodes],
        "edge_models": [logic.labels(logic.models_of(e)) for e in loop.edges],
        "node_models": [logic.labels(logic.models_of(g)) for g in loop.nodes],
        "certificates": [
            {"covering": logic.names(a), "outside": logic.names(b),
             "outside_models": logic.labels(logic.models_of(b))}
            for a, b in loop.certificates
        ],
    }


def loop_from_dict(logic: BaseLogic, d: dict) -> CriticalLoop:
    try:
        k = logic.parse_base(d["k"], "k")
        edges = tuple(logic.parse_base(e, f"edges[{i}]") for i, e in enumerate(d["edges"]))
        nodes = tuple(logic.parse_base(g, f"nodes[{i}]") for i, g in enumerate(d["nodes"]))
    except (KeyError, TypeError) as e:
        raise InvalidLoop(f"malformed loop: {e}") from None
    certs = tuple((logic.parse_base(c["covering"]), logic.parse_base(c["outside"]))
                  for c in d.get("certificates", []))
    return CriticalLoop(k, edges, nodes, certs)

