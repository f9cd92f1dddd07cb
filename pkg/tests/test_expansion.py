import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schreiertrees.action import act, orbit_ball
from schreiertrees.expansion import (
    contract_Hn,
    decomposition_check,
    induced_edges,
    min_ratio_search,
    ratio,
)
from schreiertrees.gamma5 import P, build_H, connected_subsets
from schreiertrees.trees import FAR, NEAR, Code, MasterCodeFamily, PlainFamily, Vertex

H = build_H(Code("", "b"), Code("", "c"))
S = MasterCodeFamily(H.C)
S2 = MasterCodeFamily(H.C_prime)


def brute_ratio(fam, gens, F):
    out = set(F)
    for v in F:
        for g in gens:
            out.add(act(fam, g, v))
    return Fraction(len(out), len(F))


def test_ratio_examples():
    assert ratio(S, H.generators, {P}) == 1
    assert ratio(S2, H.generators, {P}) >= 2
    p5 = PlainFamily(5)
    ball = set(orbit_ball(p5, Vertex("c"), 1))
    assert ratio(p5, ["a", "b"], ball) == brute_ratio(p5, ["a", "b"], ball) == Fraction(14, 6)


def test_single_vertices():
    rep = min_ratio_search(S, H.generators, max_size=1, window=3)
    assert rep.min_ratio == 1 and rep.worst_set == [""]
    rep = min_ratio_search(PlainFamily(5), ["a", "b"], max_size=1, window=3)
    assert rep.min_ratio == 3


def test_plain_tree_is_non_amenable_at_small_scale():
    p5 = PlainFamily(5)
    rep = min_ratio_search(p5, ["a", "b", "c"], max_size=6, window=6)
    assert rep.min_ratio == Fraction(7, 3)
    allowed = set(orbit_ball(p5, Vertex(""), 6))
    brute = min(brute_ratio(p5, "abc", F) for F in connected_subsets(p5, allowed, 6) if Vertex("") in F)
    assert rep.min_ratio == brute


def test_search_on_s_c_prime_small():
    seeds = [P] + [Vertex(k, NEAR) for k in S2.d_keys(3)]
    rep = min_ratio_search(S2, H.generators, max_size=5, window=6, seeds=seeds)
    assert rep.min_ratio > 1
    assert rep.tested_sets > 1000
    js = rep.to_json()
    assert js["min_ratio_label"].startswith("upper bound")
    assert Fraction(js["m"]) == min(Fraction(1, 5), rep.delta)
    greedy = min_ratio_search(S2, H.generators, max_size=5, window=6, strategy="greedy", seeds=seeds)
    assert greedy.min_ratio >= rep.min_ratio


def test_bad_strategy():
    with pytest.raises(ValueError):
        min_ratio_search(S2, H.generators, strategy="random")


def _components(rng, fam, count):
    """Pairwise far-apart connected sets."""
    comps = []
    centers = rng.sample(orbit_ball(fam, P, 7), 40)
    used = set()
    for c in centers:
        F = {c}
        while len(F) < rng.randint(1, 5):
            v = rng.choice(sorted(F, key=str))
            F.add(rng.choice(sorted(fam.neighbors(v).values(), key=str)))
        halo = set()
        for v in F:
            halo |= set(orbit_ball(fam, v, 2))
        if halo & used:
            continue
        used |= halo
        comps.append(F)
        if len(comps) == count:
            break
    return comps


@pytest.mark.parametrize("seed", range(10))
def test_decomposition_inequality(seed):
    rng = random.Random(seed)
    comps = _components(rng, S2, rng.randint(2, 4))
    assert len(comps) >= 2
    res = decomposition_check(S2, H.generators, comps)
    assert res["holds"], res


def test_overlapping_components_rejected():
    with pytest.raises(ValueError):
        decomposition_check(S2, H.generators, [{P}, {P, Vertex("a")}])


def test_contraction():
    key = "c"  # first D-edge of S_C'
    assert S2.is_d_edge(key)
    G = {Vertex(key), Vertex(key, NEAR), Vertex(key, FAR), Vertex(key + "a")}
    before = induced_edges(S2, G)
    after = contract_Hn(S2, G)
    assert len(before) - len(after.edges) == 2 and len(G) - len(after.nodes) == 2
    plain = {Vertex(""), Vertex("b"), Vertex("bc")}
    c = contract_Hn(S2, plain)
    assert c.nodes == plain and c.edges == induced_edges(S2, plain)


@given(st.integers(0, 10_000))
def test_contraction_keeps_full_degree_vertices(seed):
    rng = random.Random(seed)
    verts = orbit_ball(S2, P, 5)
    G = {rng.choice(verts)}
    while len(G) < 12:
        v = rng.choice(sorted(G, key=str))
        G.add(rng.choice(sorted(S2.neighbors(v).values(), key=str)))
    c = contract_Hn(S2, G)
    assert c.nodes == {v for v in G if S2.degree(v) == 5}
    assert c.is_connected() or not all(v.tag == 0 for v in G)
