import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from revkit import (
    CriticalLoop,
    detect_critical_loop,
    gallery,
    operator_from_loop,
    postulate_report,
    strict_circles,
    structure_report,
    validate_loop,
)
from revkit.errors import InvalidLoop
from revkit.loops import loop_from_dict, loop_to_dict
from revkit.verify import case_rng, generate_logic


@pytest.fixture(scope="module")
def ex_loop(l_ex):
    return detect_critical_loop(l_ex.logic)


def test_l_ex_loop_shape(l_ex, ex_loop):
    lg = l_ex.logic
    assert len(ex_loop) == 3
    assert lg.models_of(ex_loop.k) == 1 << 3
    assert [lg.models_of(e) for e in ex_loop.edges] == [0b011, 0b110, 0b101]
    assert [lg.models_of(n) for n in ex_loop.nodes] == [0b001, 0b010, 0b100]
    assert {lg.models_of(out) for _, out in ex_loop.certificates} == {1 << 4}
    validate_loop(lg, ex_loop)


def test_loop_json_round_trip(l_ex, ex_loop):
    assert loop_from_dict(l_ex.logic, loop_to_dict(l_ex.logic, ex_loop)) == ex_loop


def test_validate_rejects_broken_loop(l_ex, ex_loop):
    lg = l_ex.logic
    # K consistent with an edge breaks condition (1)
    bad = dataclasses.replace(ex_loop, k=lg.base("psi0"))
    with pytest.raises(InvalidLoop):
        validate_loop(lg, bad)
    bad = dataclasses.replace(ex_loop, nodes=(lg.base("psi0"), lg.base("psi0"), lg.base("psi2")))
    with pytest.raises(InvalidLoop):
        validate_loop(lg, bad)


def test_loop_operator_is_agm_and_matches_example(l_ex, ex_loop):
    from revkit import operators_equivalent

    op = operator_from_loop(l_ex.logic, ex_loop)
    assert operators_equivalent(op, l_ex.operator) is None


def test_strict_circle(l_ex):
    circles = strict_circles(l_ex.logic, l_ex.operator, l_ex.bases["K"], check=False)
    assert [c.interpretations for c in circles] == [(0, 1, 2)]


@pytest.mark.parametrize("name", ["PL_1", "PL_2", "B_four", "ex10_12"])
def test_loop_free_gallery(name):
    assert detect_critical_loop(gallery.load(name).logic) is None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_detection_matches_oracle(seed):
    lg = generate_logic(case_rng(seed, 0), "micro")
    if lg.n > 4:
        return
    assert (detect_critical_loop(lg) is not None) == oracles.has_critical_loop(lg)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_disjunctive_logics_have_no_loop(seed):
    lg = generate_logic(case_rng(seed, 0), "micro")
    if structure_report(lg).is_disjunctive:
        assert detect_critical_loop(lg) is None


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_found_loops_validate_and_give_agm_operators(seed):
    lg = generate_logic(case_rng(seed, 0), "micro")
    loop = detect_critical_loop(lg)
    if loop is None:
        return
    assert isinstance(loop, CriticalLoop)
    validate_loop(lg, loop)
    if len(lg.bases()) <= 64:
        rep = postulate_report(lg, operator_from_loop(lg, loop), "full",
                               ["G1", "G2", "G3", "G4", "G5", "G6"])
        assert rep.failed() == []


def test_detection_matches_oracle_on_fixed_seeds():
    hits = 0
    for seed in range(300):
        lg = generate_logic(case_rng(seed, 0), "micro")
        if lg.n > 4:
            continue
        found = detect_critical_loop(lg) is not None
        assert found == oracles.has_critical_loop(lg), seed
        hits += found
    # the fixed seeds include logics with loops, so both branches are exercised
    assert hits == 4
