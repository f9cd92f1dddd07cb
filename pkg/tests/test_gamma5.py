import random

import pytest

from schreiertrees.action import act, orbit_ball
from schreiertrees.gamma5 import (
    P,
    build_H,
    connected_subsets,
    decorated_distance,
    drift_escape,
    escape_sweep,
    escape_witness,
    fixed_point_witness,
    master_tree_window,
    on_master_tree,
)
from schreiertrees.action import distances_from
from schreiertrees.trees import Code, FamilyError, MasterCodeFamily, Vertex

PAIRS = [
    (Code("", "b"), Code("", "c")),
    (Code("", "c"), Code("", "b")),
    (Code("", "b"), Code("bb", "c" + "b")),
    (Code("", "bc"), Code("", "cb")),
    (Code("bc", "b"), Code("bb", "c")),
]


def test_master_window():
    assert len(master_tree_window(0).vertices) == 1
    w = master_tree_window(2)
    assert w.vertices == ["", "b", "c", "ba", "ca"]
    big = master_tree_window(40)
    for n in range(1, 5):
        assert len(big.endpoints[n]) == 2**n
    for v in big.vertices:
        assert on_master_tree(v)
    assert on_master_tree("bac") and not on_master_tree("ab") and not on_master_tree("bacb")


def test_h_for_first_pair():
    H = build_H(*PAIRS[0])
    assert H.gamma == "baeab"
    assert H.alpha == "baeab"
    assert H.generators[0] == H.gamma and len(H.generators) == len(set(H.generators))


@pytest.mark.parametrize("C, C2", PAIRS)
def test_generators_fix_base_and_alpha_separates(C, C2):
    H = build_H(C, C2)
    assert all(fixed_point_witness(H).values())
    S2 = MasterCodeFamily(C2)
    assert act(S2, H.alpha, P) != P


def test_equal_codes_rejected():
    with pytest.raises(FamilyError):
        build_H(Code("", "b"), Code("b", "b"))


def test_decorated_distance_matches_bfs():
    fam = MasterCodeFamily(Code("", "c"))
    rng = random.Random(5)
    dist = distances_from(fam, P, 6)
    for v, d in dist.items():
        assert decorated_distance(fam, P, v) == d
    verts = list(dist)
    for _ in range(40):
        u = rng.choice(verts)
        local = distances_from(fam, u, 4)
        for v, d in rng.sample(sorted(local.items(), key=str), 10):
            assert decorated_distance(fam, u, v) == d


def test_escape_examples():
    H = build_H(*PAIRS[0])
    S2 = MasterCodeFamily(H.C_prime)
    e = escape_witness(S2, H.generators, {P})
    assert e.verdict == "escaped"
    S = MasterCodeFamily(H.C)
    assert escape_witness(S, H.generators, {P}).verdict == "invariant"
    off = Vertex("dbd")
    assert not on_master_tree(off.addr)
    d = drift_escape(S2, H.gamma, H.delta, {off})
    assert d.verdict == "escaped" and len(d.word) <= 2 * 18
    rng = random.Random(2)
    verts = orbit_ball(S2, P, 5)
    for _ in range(30):
        F = set(rng.sample(verts, rng.randint(1, 8)))
        assert escape_witness(S2, H.generators, F).verdict == "escaped"


def _naive_connected(fam, allowed, max_size):
    out = set()
    layer = {frozenset([v]) for v in allowed}
    while layer:
        out |= layer
        nxt = set()
        for F in layer:
            if len(F) == max_size:
                continue
            for v in F:
                for z in fam.neighbors(v).values():
                    if z in allowed and z not in F:
                        nxt.add(F | {z})
        layer = nxt
    return out


def test_connected_subsets_complete_and_unique():
    fam = MasterCodeFamily(Code("", "b"))
    allowed = set(orbit_ball(fam, P, 2))
    got = list(connected_subsets(fam, allowed, 4))
    assert len(got) == len(set(got))
    assert set(got) == _naive_connected(fam, allowed, 4)


@pytest.mark.parametrize("C, C2", PAIRS[:3])
def test_sweep_agrees_with_brute_force_at_small_scale(C, C2):
    H = build_H(C, C2)
    fam = MasterCodeFamily(C2)
    radius, size = 5, 5
    sweep = escape_sweep(H, radius, size)
    ball = set(orbit_ball(fam, P, radius))
    bad = [F for F in connected_subsets(fam, ball, size) if escape_witness(fam, H.generators, F).verdict != "escaped"]
    assert sweep.ok == (not bad)
    assert set(sweep.uncertified) <= ball


@pytest.mark.parametrize("C, C2", PAIRS)
def test_full_sweep(C, C2):
    sweep = escape_sweep(build_H(C, C2), 10, 8)
    assert sweep.ok
    assert sweep.to_json()["status"] == "all connected sets escape"
