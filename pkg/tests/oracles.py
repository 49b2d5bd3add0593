"""Naive reference implementations on Python sets, written straight from the definitions.

They share nothing with the bitmask code in revkit except the logic object used
to enumerate bases and read sentence model sets.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


def world_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def mods(logic, code: int) -> frozenset[int]:
    """Intersection of the sentences' model sets; the empty base has every world."""
    out = set(range(logic.n))
    for i, s in enumerate(logic.sentences):
        if code >> i & 1:
            out &= world_set(s.models)
    return frozenset(out)


def all_bases(logic) -> list[int]:
    """Family members by brute force over every subset of sentences."""
    from revkit.logic import FamilyKind

    size = len(logic.sentences)
    out = []
    for code in range(1 << size):
        ids = [i for i in range(size) if code >> i & 1]
        kind = logic.family.kind
        if code == 0:
            if not logic.family.allow_empty:
                continue
            if kind is FamilyKind.BELIEF and any(len(world_set(s.models)) == logic.n for s in logic.sentences):
                continue
            out.append(0)
            continue
        if kind is FamilyKind.SINGLE and len(ids) != 1:
            continue
        if kind is FamilyKind.BELIEF:
            m = mods(logic, code)
            closed = all(code >> i & 1 for i, s in enumerate(logic.sentences) if m <= world_set(s.models))
            if not closed:
                continue
        out.append(code)
    return out


def minimal(rel: set[tuple[int, int]], m: frozenset[int]) -> frozenset[int]:
    return frozenset(w for w in m if all((w, v) in rel for v in m))


def sq_relation(logic, op, k, bases=None) -> set[tuple[int, int]]:
    bases = all_bases(logic) if bases is None else bases
    res = {g: world_set(op.revise_models(k, g)) for g in bases}
    gm = {g: mods(logic, g) for g in bases}
    out = set()
    for w1, w2 in product(range(logic.n), repeat=2):
        if all(w1 in res[g] for g in bases if w1 in gm[g] and w2 in gm[g] and w2 in res[g]):
            out.add((w1, w2))
    return out


def canonical_relation(logic, op, k, bases=None) -> set[tuple[int, int]]:
    sq = sq_relation(logic, op, k, bases)
    mk = mods(logic, k)
    return {(a, b) for a, b in product(range(logic.n), repeat=2)
            if a in mk or (a not in mk and b not in mk and (a, b) in sq)}


def detached(logic, op, k, bases=None) -> set[tuple[int, int]]:
    bases = all_bases(logic) if bases is None else bases
    out = set()
    for a, b in product(range(logic.n), repeat=2):
        if a == b:
            continue
        free = True
        for g in bases:
            m = mods(logic, g)
            if a in m and b in m:
                r = world_set(op.revise_models(k, g))
                if a in r or b in r:
                    free = False
                    break
        if free:
            out.add((a, b))
    return out


def transitive(rel) -> bool:
    return all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)


def closure(rel) -> set[tuple[int, int]]:
    out = set(rel)
    while True:
        new = {(a, c) for a, b in out for b2, c in out if b == b2} - out
        if not new:
            return out
        out |= new


def postulates(logic, op) -> dict[str, bool]:
    """G1-G6 and G4w over every base, pair and triple, from their statements."""
    bases = all_bases(logic)
    M = {b: mods(logic, b) for b in bases}
    R = {(k, g): world_set(op.revise_models(k, g)) for k in bases for g in bases}
    out = {p: True for p in ("G1", "G2", "G3", "G4", "G4w", "G5", "G6")}
    for k in bases:
        for g in bases:
            r = R[k, g]
            if not r <= M[g]:
                out["G1"] = False
            both = M[k] & M[g]
            if both and r != both:
                out["G2"] = False
            if M[g] and not r:
                out["G3"] = False
            for k2 in bases:
                if M[k2] != M[k]:
                    continue
                for g2 in bases:
                    if M[g2] == M[g] and R[k2, g2] != r:
                        out["G4"] = False
                        if k2 == k:
                            out["G4w"] = False
            for g2 in bases:
                u = M[logic.union(g, g2)]
                ru = R[k, logic.union(g, g2)]
                lhs = r & M[g2]
                assert u == M[g] & M[g2]
                if not lhs <= ru:
                    out["G5"] = False
                if lhs and not ru <= lhs:
                    out["G6"] = False
    return out


def weak_orders(n: int):
    """Total preorders as level tuples, via surjections onto 0..j-1 (independent of revkit)."""
    seen = set()
    for j in range(1, n + 1):
        for lv in product(range(j), repeat=n):
            if len(set(lv)) == j and lv not in seen:
                seen.add(lv)
                yield lv


def levels_relation(lv) -> set[tuple[int, int]]:
    n = len(lv)
    return {(a, b) for a in range(n) for b in range(n) if lv[a] <= lv[b]}


def fubini(n: int) -> int:
    """Ordered Bell numbers by the recurrence a(n) = sum C(n,k) a(n-k)."""
    from math import comb

    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def has_critical_loop(logic) -> bool:
    """Search the loop conditions directly over classes; small logics only."""
    classes = {}
    for b in all_bases(logic):
        classes.setdefault(mods(logic, b), b)
    sets = list(classes)
    consistent = [m for m in sets if m]
    for length in range(3, logic.n + 1):
        for nodes in permutations(consistent, length):
            if any(a & b for a, b in combinations(nodes, 2)):
                continue
            if nodes[0] != min(nodes, key=lambda s: sorted(s)):
                continue
            opts = []
            for i in range(length):
                need = nodes[i] | nodes[(i + 1) % length]
                opts.append([e for e in sets if need <= e])
            for edges in product(*opts):
                union = frozenset().union(*edges)
                if not any(not (k & union) for k in sets):
                    continue
                ok = True
                for cov in sets:
                    if sum(1 for nd in nodes if cov & nd) >= 3:
                        if not any(x and x <= cov - union for x in sets):
                            ok = False
                            break
                if ok:
                    return True
    return False
