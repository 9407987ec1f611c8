import random

import pytest

from graphs import (
    ADUAL_ONE_EDGE_CLASS,
    ADUAL_TWO_CLASSES,
    EDGE_REGULAR_SQUARE,
    NOT_EDGE_REGULAR_SQUARE,
    RDUAL_EDGE_PAIR,
    RDUAL_MERGED_PAIR,
    RDUAL_MISSING_EDGE,
)
from symlat.classes import sup_B
from symlat.coloured_graph import cg_join, cg_leq, unit, zero
from symlat.search import (
    SearchError,
    audit_coherence,
    brute_force_duals,
    complete_Pi_colourings,
    dual_accept_B,
    dual_reject_B,
    dual_set,
    eh_search,
    enumerate_Pi_lattice,
    maximal,
    minimal,
)
from symlat.classes import is_permutation_generated

FOUR = [1, 2, 3, 4]


def test_square_duals_contain_known_members():
    da = dual_accept_B(EDGE_REGULAR_SQUARE)
    dr = dual_reject_B(EDGE_REGULAR_SQUARE)
    assert ADUAL_TWO_CLASSES in da and ADUAL_ONE_EDGE_CLASS in da
    assert {RDUAL_MERGED_PAIR, RDUAL_MISSING_EDGE, RDUAL_EDGE_PAIR} <= set(dr)


def test_duals_require_edge_regular():
    with pytest.raises(SearchError):
        dual_reject_B(NOT_EDGE_REGULAR_SQUARE)
    with pytest.raises(SearchError):
        dual_accept_B(NOT_EDGE_REGULAR_SQUARE)


def test_zero_accept_dual_has_all_bipartitions():
    da = dual_accept_B(zero(FOUR))
    two_block = [g for g in da if not g.edges]
    assert len(two_block) == 7  # 2-block partitions of a 4-set


def test_unit_reject_dual_drops_each_edge():
    dr = dual_reject_B(unit(FOUR))
    full_atomic = [g for g in dr if len(g.edges) == 5 and len(g.vertex_classes) == 4]
    assert len(full_atomic) == 6


@pytest.mark.parametrize("seed", range(15))
def test_B_duals_match_brute_force(seed, members_c4):
    B = members_c4["B"]
    g = random.Random(seed).choice(B)
    assert set(dual_reject_B(g)) == set(brute_force_duals(B, [g], "r"))
    assert set(dual_accept_B(g)) == set(brute_force_duals(B, [g], "a"))


@pytest.mark.parametrize("seed", range(5))
def test_dual_set_matches_brute_force(seed, members_c4):
    B = members_c4["B"]
    rng = random.Random(100 + seed)
    pair = [rng.choice(B), rng.choice(B)]
    assert set(dual_set(pair, dual_reject_B, "r")) == set(brute_force_duals(B, pair, "r"))
    join_B = lambda a, b: sup_B(cg_join(a, b))
    assert set(dual_set(pair, dual_accept_B, "a", join=join_B)) == set(brute_force_duals(B, pair, "a"))


def test_dual_set_singleton():
    assert dual_set([EDGE_REGULAR_SQUARE], dual_reject_B, "r") == dual_reject_B(EDGE_REGULAR_SQUARE)


def test_trivial_duals(members_c4):
    B = members_c4["B"]
    assert dual_reject_B(zero(FOUR)) == []
    assert brute_force_duals(B, [zero(FOUR)], "r") == []
    others = [g for g in B if g != zero(FOUR)]
    assert set(brute_force_duals(B, [zero(FOUR)], "a")) == set(minimal(others))
    below_unit = [g for g in B if g != unit(FOUR)]
    assert set(brute_force_duals(B, [unit(FOUR)], "r")) == set(maximal(below_unit))


def test_antichain_reduction():
    ms = minimal([zero(FOUR), EDGE_REGULAR_SQUARE, unit(FOUR)])
    assert ms == [zero(FOUR)]
    assert maximal([zero(FOUR), EDGE_REGULAR_SQUARE, unit(FOUR)]) == [unit(FOUR)]


def test_Pi_lattice():
    lat = enumerate_Pi_lattice(FOUR)
    assert len(lat) == 251
    assert len(complete_Pi_colourings(FOUR)) == 22
    assert all(is_permutation_generated(g) for g in lat)
    with pytest.raises(SearchError):
        enumerate_Pi_lattice(range(5))


# --------------------------------------------------------------------------
# searches with synthetic tests


def membership_test(m0):
    return lambda g: cg_leq(m0, g)


@pytest.mark.parametrize("seed", range(20))
def test_membership_oracle_search_B(seed, members_c4):
    m0 = random.Random(seed).choice(members_c4["B"])
    tr = eh_search("B", test=membership_test(m0), labels=FOUR)
    assert tr.min_accepted == [m0]
    assert audit_coherence(tr) == []


@pytest.mark.parametrize("seed", range(5))
def test_membership_oracle_search_Pi(seed):
    m0 = random.Random(seed).choice(enumerate_Pi_lattice(FOUR))
    tr = eh_search("Pi", test=membership_test(m0), labels=FOUR)
    assert tr.min_accepted == [m0]


def test_always_accept_reaches_zero():
    tr = eh_search("B", test=lambda g: True, labels=FOUR)
    assert tr.min_accepted == [zero(FOUR)]
    tr = eh_search("Pi", test=lambda g: True, labels=FOUR)
    assert tr.min_accepted == [zero(FOUR)]


def test_two_true_models(members_c4):
    rng = random.Random(7)
    B = members_c4["B"]
    while True:
        a, b = rng.choice(B), rng.choice(B)
        if not cg_leq(a, b) and not cg_leq(b, a):
            break
    tr = eh_search("B", test=lambda g: cg_leq(a, g) or cg_leq(b, g), labels=FOUR)
    assert set(tr.min_accepted) == {a, b}


@pytest.mark.parametrize("seed", range(5))
def test_order_invariance(seed, members_c4):
    m0 = random.Random(50).choice(members_c4["B"])
    base = eh_search("B", test=membership_test(m0), labels=FOUR)
    shuffled = eh_search("B", test=membership_test(m0), labels=FOUR, order_seed=seed)
    assert set(shuffled.min_accepted) == set(base.min_accepted)
    assert [len(s.candidates) for s in shuffled.stages] == [len(s.candidates) for s in base.stages]


def test_parallel_matches_serial(members_c4):
    m0 = random.Random(51).choice(members_c4["B"])
    a = eh_search("B", test=membership_test(m0), labels=FOUR)
    b = eh_search("B", test=membership_test(m0), labels=FOUR, jobs=4)
    assert a.to_dict() == b.to_dict()


def test_nonexistent_mle_flagged():
    def test(g):
        if g == unit(FOUR):
            return True, None, None
        return False, None, "nonexistent MLE: synthetic"

    tr = eh_search("B", test=test, labels=FOUR)
    assert tr.min_accepted == [unit(FOUR)]
    assert tr.flags and all(v.startswith("nonexistent MLE") for v in tr.flags.values())


def test_search_errors():
    with pytest.raises(SearchError):
        eh_search("R", test=lambda g: True, labels=FOUR)
    with pytest.raises(SearchError):
        eh_search("B")


def test_everything_rejected():
    tr = eh_search("B", test=lambda g: False, labels=FOUR)
    assert tr.min_accepted == [] and tr.stages == []
    assert tr.max_rejected == [unit(FOUR)]


def test_trace_bookkeeping():
    m0 = EDGE_REGULAR_SQUARE
    tr = eh_search("B", test=membership_test(m0), labels=FOUR)
    tested = [c.graph for c in tr.initial] + [c.graph for s in tr.stages for c in s.candidates]
    assert len(tested) == len(set(tested)) == tr.total_tested
    d = tr.to_dict()
    assert len(d["stages"]) == len(tr.stages)
