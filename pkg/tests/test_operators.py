import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

import oracles
from revkit import (
    TableOperator,
    TrivialRevision,
    UnionOperator,
    from_assignment,
    gallery,
    operators_equivalent,
    postulate_report,
)
from revkit.errors import MinSetInexpressible, OperatorUndefined
from revkit.operators import materialize, operator_from_dict
from revkit.verify import _perturbed, case_rng, generate_logic, generate_operator

AGM7 = ["G1", "G2", "G3", "G4", "G4w", "G5", "G6"]


def test_trivial_revision_pl2(pl2):
    rep = postulate_report(pl2.logic, pl2.operator, "full", AGM7 + ["EDF", "Acyc"])
    assert rep.failed() == []
    assert pl2.logic.models_of(pl2.operator.revise(pl2.bases["p1"], pl2.bases["not p1"])) == \
        pl2.logic.models_of(pl2.bases["not p1"])


def test_union_operator_fails_consistency(pl2):
    rep = postulate_report(pl2.logic, UnionOperator(pl2.logic), "full", ["G1", "G3"])
    assert rep["G1"].passed
    assert not rep["G3"].passed


def test_table_operator_fallbacks(ex1012):
    lg = ex1012.logic
    t = TableOperator(lg, {}, fallback="error")
    with pytest.raises(OperatorUndefined):
        t.revise(ex1012.bases["phi"], ex1012.bases["psi"])
    with pytest.raises(ValueError):
        TableOperator(lg, {}, fallback="nope")


def test_materialize_and_json_round_trip(four):
    lg = four.logic
    tab = materialize(four.operator)
    assert operators_equivalent(tab, four.operator) is None
    again = operator_from_dict(lg, tab.to_dict())
    assert operators_equivalent(again, four.operator) is None
    assert operators_equivalent(TrivialRevision(lg), four.operator) is not None


def test_semantic_mode_leaves_g4_unchecked(pl2):
    rep = postulate_report(pl2.logic, pl2.operator, "semantic", ["G1", "G4", "G5"])
    assert rep["G4"].status == "unchecked"
    assert rep["G1"].passed and rep["G5"].passed


def test_unknown_postulate_rejected(pl2):
    with pytest.raises(ValueError):
        postulate_report(pl2.logic, pl2.operator, "full", ["G9"])
    with pytest.raises(ValueError):
        postulate_report(pl2.logic, pl2.operator, "bogus")


def test_from_assignment_inexpressible():
    e = gallery.load("B_nb")
    with pytest.raises(MinSetInexpressible) as err:
        from_assignment(e.logic, e.assignment)
    assert err.value.models == 0b01


def test_threads_do_not_change_report(four):
    one = postulate_report(four.logic, four.operator, "full", AGM7 + ["EDF"])
    many = postulate_report(four.logic, four.operator, "full", AGM7 + ["EDF"], threads=4)
    assert {k: (v.status, v.witness) for k, v in one.results.items()} == \
        {k: (v.status, v.witness) for k, v in many.results.items()}


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6), st.booleans())
def test_postulates_match_oracle(seed, perturb):
    rng = case_rng(seed, 0)
    lg = generate_logic(rng, "micro")
    if len(lg.bases()) > 20:
        return
    op = generate_operator(lg, rng, rng.choice(["semantic", "syntactic"]))
    if perturb:
        op = _perturbed(lg, op, rng)
    rep = postulate_report(lg, op, "full", AGM7)
    want = oracles.postulates(lg, op)
    assert rep.exhaustive
    assert {p: rep[p].passed for p in AGM7} == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_assignment_operators_satisfy_agm(seed):
    # representation, one direction: faithful min-expressible total preorders give G1-G6
    rng = case_rng(seed, 0)
    lg = generate_logic(rng, "micro")
    op = generate_operator(lg, rng)
    rep = postulate_report(lg, op, "full", ["G1", "G2", "G3", "G4", "G5", "G6"])
    assert rep.failed() == []
