import pytest
from hypothesis import given
from hypothesis import strategies as st

from schreiertrees.action import distances_from
from schreiertrees.balls import ball_code
from schreiertrees.closure import (
    AccumulationPresentation,
    Converge,
    Finite,
    InfiniteRankError,
    Ladder,
    CantorSetExpr,
    cb_rank,
    cb_rank_presentation,
    census,
    detect_limits,
    dovetail_schedule,
    empirical_derivative_chain,
    presentation_levels,
    presentation_reference_families,
    standard_expr,
)
from schreiertrees.trees import FamilyError, NatSet, PlainFamily, SetSchedule, SingleD, SLFamily, Vertex


def brute_census(fam, r, R):
    out = {}
    for v, d in distances_from(fam, fam.root(), R).items():
        c = ball_code(fam, v, r)
        n, m = out.get(c, (0, -1))
        out[c] = (n + 1, max(m, d))
    return out


def as_table(c):
    return {k: (s.count, s.max_dist) for k, s in c.stats.items()}


def test_plain_single_type():
    c = census(PlainFamily(3), 2, 6)
    assert len(c.codes) == 1
    assert c.total() == 1 + sum(3 * 2 ** (n - 1) for n in range(1, 7))


def test_single_d_small_window():
    c = census(SingleD(""), 1, 4)
    assert as_table(c) == brute_census(SingleD(""), 1, 4)
    assert len(c.codes) == 2


def test_sl_with_empty_schedules_sees_both_degrees():
    fam = SLFamily(SetSchedule())
    degs = set()
    for code in census(fam, 1, 8).codes:
        degs.add(code.count(b"(") - 1)  # children of the root
    assert {2, 3} <= degs


@pytest.mark.parametrize("name, r, R", [("singled", 2, 9), ("sl1", 2, 10), ("sl2", 3, 10), ("master_b", 2, 7)])
def test_pruned_census_matches_brute_force(families, name, r, R):
    fam = families[name]
    pruned = census(fam, r, R)
    assert as_table(pruned) == brute_census(fam, r, R)
    assert as_table(census(fam, r, R, prune=False)) == as_table(pruned)


def test_recurrence():
    p = PlainFamily(3)
    assert detect_limits([census(p, 2, 8), census(p, 2, 16)]) == census(p, 2, 8).codes
    d = SingleD("")
    lim = detect_limits([census(d, 2, 8), census(d, 2, 16)])
    assert lim == {ball_code(p, Vertex(""), 2)}


def test_rank_examples():
    pt = NatSet((), (1,))
    assert cb_rank(Finite((pt,))) == 1
    assert cb_rank(Converge(pt, (), (Finite((pt,)),))) == 2
    assert cb_rank(Converge(pt, (), (Converge(pt, (), (Finite((pt,)),)),))) == 3
    assert cb_rank(Converge(pt, (Finite((pt,)),), ())) == 1
    with pytest.raises(InfiniteRankError):
        Ladder(pt).rank()


@pytest.mark.parametrize("alpha, rank", [(1, 4), (2, 5), (3, 6)])
def test_presentation_rank(alpha, rank):
    res = cb_rank_presentation(AccumulationPresentation.standard(standard_expr(alpha)))
    assert res.rank == rank == alpha + 3
    levels = presentation_levels(AccumulationPresentation.standard(standard_expr(alpha)))
    assert levels == {"S": 0, "TN": alpha, "That3": alpha + 1, "T3": alpha + 2}


def test_presentation_rejects_bad_templates():
    N = standard_expr(1)
    p = AccumulationPresentation(N, [("S", "S"), ("TN", "T_N"), ("That3", "That3"), ("T3", "T3")], {"S": ["TN"], "TN": ["That3"]})
    with pytest.raises(FamilyError):
        cb_rank_presentation(p)
    p = AccumulationPresentation(
        N, [("S", "S"), ("TN", "T_N"), ("That3", "That3"), ("T3", "T3")], {"S": ["TN"], "TN": ["That3"], "That3": ["T3"], "T3": ["S"]}
    )
    with pytest.raises(FamilyError):
        cb_rank_presentation(p)
    finite_point = Finite((NatSet.finite([1]),))
    with pytest.raises(FamilyError):
        cb_rank_presentation(AccumulationPresentation.standard(finite_point))


def test_presentation_json_roundtrip():
    p = AccumulationPresentation.standard(standard_expr(2))
    q = AccumulationPresentation.from_json(p.to_json())
    assert q.to_json() == p.to_json()
    assert cb_rank_presentation(q).rank == 5


def test_chain_small_cases():
    assert empirical_derivative_chain({"0000000000"}, 10) == [frozenset({"0000000000"})]
    pts = {"0" * 10} | {"0" * k + "1" + "0" * (9 - k) for k in range(10)}
    chain = empirical_derivative_chain(pts, 10)
    assert len(chain) == 2 and chain[1] == frozenset({"0" * 8})


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_chain_matches_rank_on_standard(rank):
    e = standard_expr(rank)
    assert len(empirical_derivative_chain(e.evaluate(10), 10)) == rank


natsets = st.builds(
    NatSet,
    st.lists(st.integers(0, 1), max_size=3).map(tuple),
    st.lists(st.integers(0, 1), min_size=1, max_size=2).map(tuple),
)


@st.composite
def uniform_exprs(draw, rank):
    if rank == 1:
        return Finite(tuple(draw(st.lists(natsets, min_size=1, max_size=3))))
    return Converge(draw(natsets), (), (draw(uniform_exprs(rank - 1)),))


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(st.just(k), uniform_exprs(k))))
def test_chain_matches_rank_on_uniform_nestings(pair):
    k, e = pair
    assert e.rank() == k
    assert len(empirical_derivative_chain(e.evaluate(12), 12)) == k


@given(st.integers(1, 3).flatmap(uniform_exprs))
def test_expr_json_roundtrip_and_points(e):
    again = CantorSetExpr.from_json(e.to_json())
    assert again.evaluate(8) == e.evaluate(8)
    pts = [p for _, p in zip(range(12), e.iter_points())]
    assert {p.bits(8) for p in pts} <= e.evaluate(8)


def test_dovetail_hits_every_point_repeatedly():
    sched = dovetail_schedule(standard_expr(2))
    idx = [sched.index(i) for i in range(1, 40)]
    assert idx[:6] == [1, 1, 2, 1, 2, 3]
    assert all(idx.count(j) >= 2 for j in range(1, 5))
    finite = dovetail_schedule(Finite((NatSet.finite([1]), NatSet.finite([2]))))
    assert [finite(i) for i in range(1, 5)] == [NatSet.finite([1]), NatSet.finite([2])] * 2


def test_reference_families():
    fams = presentation_reference_families(standard_expr(2), 3)
    assert [f.kind for f in fams] == ["TL", "TL", "TL", "SingleD", "PlainT3"]
