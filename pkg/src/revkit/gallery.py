"""Built-in example logics, operators and relations.

Every instance is a small finite construction; loading is cheap except for
the larger propositional logics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .assignments import Assignment, assignment_to_dict
from .errors import OutOfScopeInfinite, UnknownGalleryName
from .logic import BaseFamily, BaseLogic, FamilyKind, mask_of
from .operators import Operator, RuleOperator, TableOperator, TrivialRevision
from .relations import PreferenceRelation, relation_to_dict

INFINITE_NAMES = ("PL_inf", "B_Z", "B_f1", "B_f2")
MAX_PL_ATOMS = 4


@dataclass
class GalleryEntry:
    name: str
    logic: BaseLogic
    operator: Operator | None = None
    assignment: Assignment | None = None
    relations: dict[str, PreferenceRelation] = field(default_factory=dict)
    # handy bases by short name, e.g. "K" or "p1"
    bases: dict[str, int] = field(default_factory=dict)


# L_Ex and its operator


def _l_ex() -> GalleryEntry:
    sents = [(f"psi{i}", 1 << i) for i in range(6)]
    sents += [("phi0", 0b000011), ("phi1", 0b000110), ("phi2", 0b000101),
              ("chi", 0b111111), ("chi'", 0b110111)]
    logic = BaseLogic([f"w{i}" for i in range(6)], sents, BaseFamily(FamilyKind.ARBITRARY, True))
    k_ex = logic.base("psi3")
    mk_ex = logic.models_of(k_ex)
    psi = [logic.base(f"psi{i}") for i in range(6)]

    def choose(k, gamma):
        """Which branch fires, and the model set it produces."""
        mk = logic.models_of(k)
        mg = logic.models_of(gamma)
        if mk != mk_ex:
            return ("trivial", mk & mg)
        if mk & mg:
            return ("K", mk & mg)
        has = [bool(mg >> i & 1) for i in range(6)]
        if has[4]:
            return (4, 1 << 4)
        if has[0] and not has[2]:
            return (0, 1)
        if has[1] and not has[0]:
            return (1, 1 << 1)
        if has[2] and not has[1]:
            return (2, 1 << 2)
        return ("gamma", mg)

    def fn(k, gamma):
        tag, _ = choose(k, gamma)
        if tag == "trivial":
            return logic.union(k, gamma) if logic.jointly_consistent(k, gamma) else gamma
        if tag == "K":
            return logic.union(k, gamma)
        if tag == "gamma":
            return gamma
        return logic.union(gamma, psi[tag])

    def models_fn(k, gamma):
        tag, m = choose(k, gamma)
        if tag == "trivial" and not m:
            return logic.models_of(gamma)
        return m

    op = RuleOperator(logic, fn, "op_ex", models_fn)
    return GalleryEntry("L_Ex", logic, op, bases={"K": k_ex})


# counterexample logics for the relation properties


def _b_mr() -> GalleryEntry:
    logic = BaseLogic([f"w{i}" for i in range(4)], [("gamma", 0b1111)],
                      BaseFamily(FamilyKind.SINGLE, False), {(0, 0): 0})
    pairs = [(i, i) for i in range(4)]
    pairs += [(3, i) for i in range(3)] + [(i, 3) for i in range(3)]
    pairs += [(0, 1), (1, 2), (2, 0)]
    le1 = PreferenceRelation.from_pairs(4, pairs)
    le2 = le1.minus((i, 3) for i in range(3))
    return GalleryEntry("B_mr", logic, relations={"le1": le1, "le2": le2},
                        bases={"gamma": logic.base("gamma")})


def _b_rps() -> GalleryEntry:
    logic = BaseLogic(["rock", "paper", "scissors"], [("all-three", 0b111)],
                      BaseFamily(FamilyKind.ARBITRARY, True))
    rel = PreferenceRelation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (1, 0), (2, 1), (0, 2)])
    return GalleryEntry("B_rps", logic, relations={"rps": rel},
                        bases={"all-three": logic.base("all-three")})


def _b_nb() -> GalleryEntry:
    logic = BaseLogic(["w1", "w2"], [("none", 0), ("both", 0b11)], BaseFamily(FamilyKind.ARBITRARY, True))
    full = PreferenceRelation.full(2)
    skew = PreferenceRelation.from_pairs(2, [(0, 0), (0, 1), (1, 1)])
    a = Assignment.semantic(logic, lambda m: full if m else skew)
    return GalleryEntry("B_nb", logic, assignment=a, relations={"consistent": full, "inconsistent": skew},
                        bases={"none": logic.base("none"), "both": logic.base("both")})


# the threshold logic where G5 and G6 fail


def _b_four() -> GalleryEntry:
    sents = [(f"[>={i}]", mask_of(range(i, 4))) for i in range(5)]
    conj = {(a, b): max(a, b) for a in range(5) for b in range(5)}
    logic = BaseLogic([str(i) for i in range(4)], sents, BaseFamily(FamilyKind.SINGLE, False), conj)
    at_least = [logic.base(f"[>={i}]") for i in range(5)]

    def fn(k, gamma):
        if logic.jointly_consistent(k, gamma):
            return logic.union(k, gamma)
        if gamma == at_least[1]:
            return at_least[3]
        return gamma

    op = RuleOperator(logic, fn, "op_four")
    return GalleryEntry("B_four", logic, op, bases={f">={i}": b for i, b in enumerate(at_least)})


# the four-world logic whose canonical relation is not transitive


_EX10_12_TABLE = {
    "bot": ["bot", "phi", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    "phi": ["bot", "phi", "gamma1", "gamma1", "gamma2", "gamma3", "gamma4"],
    "psi": ["bot", "gamma1", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    "gamma1": ["bot", "gamma1", "gamma1", "gamma1", "gamma2", "gamma3", "gamma4"],
    "gamma2": ["bot", "gamma2", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    "gamma3": ["bot", "phi", "gamma3", "gamma1", "gamma2", "gamma3", "gamma4"],
    "gamma4": ["bot", "gamma4", "gamma3", "gamma1", "gamma2", "gamma3", "gamma4"],
}


def _ex10_12() -> GalleryEntry:
    order = ["bot", "phi", "psi", "gamma1", "gamma2", "gamma3", "gamma4"]
    mods = {"bot": 0, "phi": 0b1011, "psi": 0b0101,
            "gamma1": 0b0001, "gamma2": 0b0010, "gamma3": 0b0100, "gamma4": 0b1000}
    # conjunctions are derived from the model sets, so Mod(a ^ b) = Mod(a) & Mod(b) holds
    logic = BaseLogic(["w1", "w2", "w3", "w4"], [(s, mods[s]) for s in order],
                      BaseFamily(FamilyKind.SINGLE, False))
    table = {}
    for k, row in _EX10_12_TABLE.items():
        for g, r in zip(order, row):
            table[(logic.base(k), logic.base(g))] = logic.base(r)
    op = TableOperator(logic, table, fallback="error")
    return GalleryEntry("ex10_12", logic, op, bases={s: logic.base(s) for s in order})


# propositional logic over n atoms, one sentence per truth table


def world_label(n: int, w: int) -> str:
    """Truth values of p1..pn in world w, as a bit string."""
    return "".join("1" if w >> i & 1 else "0" for i in range(n))


def truth_table_name(n: int, models: int) -> str:
    return "tt" + "".join("1" if models >> w & 1 else "0" for w in range(1 << n))


def pl(n: int) -> GalleryEntry:
    if not 1 <= n <= MAX_PL_ATOMS:
        raise UnknownGalleryName(f"pl needs 1 <= n <= {MAX_PL_ATOMS}, got {n}")
    size = 1 << n
    worlds = [world_label(n, w) for w in range(size)]
    # every model set is a sentence, so conjunctions are derived automatically
    sents = [(truth_table_name(n, m), m) for m in range(1 << size)]
    logic = BaseLogic(worlds, sents, BaseFamily(FamilyKind.SINGLE, False))
    named = {"top": (1 << size) - 1, "bottom": 0}
    for i in range(n):
        atom = mask_of(w for w in range(size) if w >> i & 1)
        named[f"p{i + 1}"] = atom
        named[f"not p{i + 1}"] = ((1 << size) - 1) & ~atom
    bases = {k: 1 << m for k, m in named.items()}
    return GalleryEntry(f"PL_{n}", logic, TrivialRevision(logic), bases=bases)


_LOADERS = {
    "L_Ex": _l_ex,
    "B_mr": _b_mr,
    "B_rps": _b_rps,
    "B_nb": _b_nb,
    "B_four": _b_four,
    "ex10_12": _ex10_12,
}


def names() -> list[str]:
    return list(_LOADERS) + [f"PL_{n}" for n in range(1, MAX_PL_ATOMS + 1)]


def load(name: str, n: int | None = None) -> GalleryEntry:
    """Load a gallery instance; "pl" takes n, or use "PL_2" style names."""
    if name in INFINITE_NAMES:
        raise OutOfScopeInfinite(f"{name} has infinitely many interpretations and is out of scope")
    if name in _LOADERS:
        return _LOADERS[name]()
    if name.lower() == "pl":
        if n is None:
            raise UnknownGalleryName("pl needs the number of atoms n")
        return pl(n)
    if name.startswith("PL_") and name[3:].isdigit():
        return pl(int(name[3:]))
    raise UnknownGalleryName(f"unknown gallery instance {name!r}; known: {', '.join(names())}")


def export(name: str, out_dir: str | Path, n: int | None = None) -> list[Path]:
    """Write <name>.json (logic) plus operator, assignment and relation files where present."""
    entry = load(name, n)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lg = entry.logic
    files: dict[str, dict] = {f"{entry.name}.json": lg.to_dict()}
    if entry.operator is not None:
        files[f"op_{entry.name}.json"] = entry.operator.to_dict()
        if entry.name == "L_Ex":
            files["opEx.json"] = files.pop(f"op_{entry.name}.json")
    if entry.assignment is not None:
        files[f"assignment_{entry.name}.json"] = assignment_to_dict(lg, entry.assignment)
    for key, rel in entry.relations.items():
        files[f"relation_{entry.name}_{key}.json"] = relation_to_dict(lg, rel)
    written = []
    for fname, data in files.items():
        p = out / fname
        p.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        written.append(p)
    return written
