"""Seeded generators of test configurations shared by the unit and acceptance suites."""

import random

from schreiertrees.eqcompact import BranchId, translate_keys
from schreiertrees.trees import DKeysFamily
from schreiertrees.words import GAMMA3


def random_address(rng, length, start=""):
    w = start
    while len(w) < len(start) + length:
        x = rng.choice("abc")
        if not w or w[-1] != x:
            w += x
    return w


def key_of(addr):
    return addr[:-1] if addr.endswith("a") else addr


def keys_inside(rng, branch, count, depth=5):
    child = branch.child()
    out = set()
    while len(out) < count:
        tail = random_address(rng, rng.randint(0, depth), child)
        tail = GAMMA3.reduce(tail)
        k = key_of(tail)
        if branch.contains_edge(k, k + "a"):
            out.add(k)
    return out


def dominance_configuration(seed, steps=2):
    """``(T, chain, y, branches)`` where each family in ``chain`` dominates the one before."""
    rng = random.Random(seed)
    y = random_address(rng, rng.randint(0, 3))
    # branch roots at distance 1..3 from y; the branch must avoid y
    base_keys = set()
    for _ in range(rng.randint(0, 2)):
        base_keys.add(key_of(random_address(rng, rng.randint(0, 1), y)))
    chain = [DKeysFamily(sorted(base_keys))]
    branches = []
    keys = set(base_keys)
    for _ in range(steps):
        for _attempt in range(50):
            root = random_address(rng, rng.randint(1, 3), y)
            root = GAMMA3.reduce(root)
            away = [x for x in "abc" if not BranchId(root, x).contains_vertex(y)]
            if not away:
                continue
            br = BranchId(root, rng.choice(away))
            if any(br.contains_edge(k, k + "a") for k in keys):
                continue
            break
        else:
            raise RuntimeError("no free branch found")
        keys |= keys_inside(rng, br, rng.randint(1, 3))
        chain.append(DKeysFamily(sorted(keys)))
        branches.append(br)
    return chain, y, branches


def broken_configuration(seed):
    """``(T, S, y)`` where T has a D-edge at y that S lacks."""
    rng = random.Random(1000 + seed)
    y = random_address(rng, rng.randint(0, 4))
    k = key_of(y)
    extra = {key_of(random_address(rng, rng.randint(3, 6), y)) for _ in range(rng.randint(0, 2))}
    T = DKeysFamily(sorted({k} | extra))
    S = DKeysFamily(sorted(extra - {k}))
    return T, S, y


def coloring_configuration(seed):
    """``(A, y, B, r)``: B is A seen from y, then with one key added or dropped
    far enough out that the balls agree for a while."""
    rng = random.Random(2000 + seed)
    keys = {key_of(random_address(rng, rng.randint(0, 6))) for _ in range(rng.randint(1, 4))}
    y = GAMMA3.reduce(random_address(rng, rng.randint(0, 4)))
    moved = set(translate_keys(keys, y, GAMMA3))
    if rng.random() < 0.75:
        change = key_of(GAMMA3.reduce(random_address(rng, rng.randint(2, 12))))
        moved ^= {change}
    r = rng.randint(1, 6)
    return DKeysFamily(sorted(keys)), y, DKeysFamily(sorted(moved)), r
