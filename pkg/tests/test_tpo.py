import pytest
from hypothesis import given, settings, strategies as st

import oracles
from revkit import (
    PreferenceRelation,
    brute_force_tpo_search,
    compatibility_check,
    detect_critical_loop,
    linearize,
    postulate_report,
    to_total_preorder,
    weak_orders,
)
from revkit.errors import CriticalLoopPresent, NotAPreorder, OmegaTooLarge, PostulatePrerequisiteFailed
from revkit.tpo import tpo_hits
from revkit.verify import case_rng, generate_logic, generate_operator


@pytest.mark.parametrize("n", range(1, 7))
def test_weak_order_counts(n):
    got = {tuple(lv) for lv in weak_orders(n)}
    assert len(got) == oracles.fubini(n)
    # same relations as the surjection-based oracle
    rels = {frozenset(oracles.levels_relation(lv)) for lv in got}
    want = {frozenset(oracles.levels_relation(lv)) for lv in oracles.weak_orders(n)}
    assert rels == want


def test_weak_order_count_frozen():
    assert sum(1 for _ in weak_orders(6)) == 4683


def test_weak_order_cap():
    with pytest.raises(OmegaTooLarge):
        next(weak_orders(8))


def test_linearize():
    pre = PreferenceRelation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (2, 0)])
    lin = linearize(pre)
    assert lin.is_total() and lin.is_preorder() and pre.issubset(lin)
    assert lin.lt(1, 2) and lin.lt(2, 0)
    with pytest.raises(NotAPreorder):
        linearize(PreferenceRelation.from_pairs(2, [(0, 1)]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.data())
def test_linearize_extends(n, data):
    pairs = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    pre = PreferenceRelation.from_pairs(n, oracles.closure(pairs | {(i, i) for i in range(n)}))
    lin = linearize(pre)
    assert lin.is_total() and lin.is_preorder()
    assert pre.issubset(lin)
    # strict pairs stay strict
    for i, j in pre.pairs():
        if pre.lt(i, j):
            assert lin.lt(i, j)


def test_l_ex_pipeline_refuses(l_ex, l_ex_report):
    with pytest.raises(CriticalLoopPresent):
        to_total_preorder(l_ex.logic, l_ex.operator, l_ex.bases["K"], l_ex_report)
    assert brute_force_tpo_search(l_ex.logic, l_ex.operator, "one", l_ex.bases["K"]) is None


def test_four_pipeline_needs_postulates(four):
    with pytest.raises(PostulatePrerequisiteFailed):
        to_total_preorder(four.logic, four.operator, four.bases[">=4"])


def test_ex1012_pipeline(ex1012):
    k = ex1012.bases["gamma4"]
    tr = to_total_preorder(ex1012.logic, ex1012.operator, k)
    assert tr.compatible and tr.minima_preserved
    assert tr.final.is_total() and tr.final.is_preorder()
    assert brute_force_tpo_search(ex1012.logic, ex1012.operator, "one", k) is not None
    # frozen: w4 lowest, then w2, w3, w1
    lv = [sum(1 for j in range(4) if tr.final.lt(j, i)) for i in range(4)]
    assert lv == [3, 1, 2, 0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_pipeline_on_loop_free_cases(seed):
    rng = case_rng(seed, 0)
    lg = generate_logic(rng, "micro")
    if detect_critical_loop(lg) is not None:
        return
    op = generate_operator(lg, rng)
    rep = postulate_report(lg, op, "full", ["G1", "G2", "G3", "G4", "G5", "G6"])
    for c in lg.classes():
        tr = to_total_preorder(lg, op, c.rep, rep, loop_check=False)
        assert tr.compatible and tr.minima_preserved
        assert tr.final.is_total() and tr.final.is_preorder()
        # step I only drops detached pairs; step II only adds detached pairs
        assert tr.step1.issubset(tr.step0)
        assert set(tr.step0.pairs()) - set(tr.step1.pairs()) <= set(tr.detached.pairs)
        assert set(tr.step2.pairs()) - set(tr.step1.pairs()) <= set(tr.detached.pairs)
    a = brute_force_tpo_search(lg, op, "all")
    assert a is not None
    assert compatibility_check(lg, op, a)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_hits_are_inside_canonical(seed):
    from revkit import canonical_rel

    rng = case_rng(seed, 0)
    lg = generate_logic(rng, "micro")
    op = generate_operator(lg, rng)
    for c in lg.classes():
        canon = canonical_rel(lg, op, c.rep)
        for hit in tpo_hits(lg, op, c.rep):
            assert hit.issubset(canon)
