"""Expansion ratios ``|F u g_1 F u ... u g_r F| / |F|`` in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .action import act
from .gamma5 import decorated_distance
from .trees import FAR, NEAR, OLD, AddressFamily, Vertex


class _Images:
    """Memoized generator images of vertices."""

    def __init__(self, family, generators):
        self.family = family
        self.generators = list(generators)
        self._memo: dict = {}

    def of(self, v) -> tuple:
        try:
            return self._memo[v]
        except KeyError:
            out = tuple(act(self.family, g, v) for g in self.generators)
            self._memo[v] = out
            return out

    def ratio(self, F) -> Fraction:
        F = set(F)
        if not F:
            raise ValueError("F must be nonempty")
        big = set(F)
        for v in F:
            big.update(self.of(v))
        return Fraction(len(big), len(F))

    def boundary(self, F) -> set:
        F = set(F)
        out = set()
        for v in F:
            out.update(self.of(v))
        return out - F


def ratio(family, generators, F) -> Fraction:
    return _Images(family, generators).ratio(F)


@dataclass
class ExpansionReport:
    generators: list
    family: dict
    tested_sets: int
    min_ratio: Fraction
    worst_set: list
    max_size: int
    window: int
    strategy: str
    proven_floor: Fraction | None = None
    notes: list = field(default_factory=list)

    @property
    def delta(self) -> Fraction:
        return self.min_ratio - 1

    @property
    def m(self) -> Fraction:
        return min(Fraction(1, self.max_size), self.delta)

    @property
    def r_gen(self) -> int:
        return len(self.generators)

    def to_json(self):
        return {
            "generators": self.generators,
            "family": self.family,
            "strategy": self.strategy,
            "max_size": self.max_size,
            "window": self.window,
            "tested_sets": self.tested_sets,
            "min_ratio": str(self.min_ratio),
            "min_ratio_label": "upper bound on the infimum over the tested class",
            "worst_set": self.worst_set,
            "delta": str(self.delta),
            "m": str(self.m),
            "r_gen": self.r_gen,
            "proven_floor": None if self.proven_floor is None else str(self.proven_floor),
            "notes": self.notes,
        }


class _Window:
    """Vertices within ``radius`` of the base, tested by distance for address
    families and materialized otherwise."""

    def __init__(self, family, radius, banned=()):
        self.family, self.radius = family, radius
        self.banned = set(banned)
        if isinstance(family, AddressFamily):
            self._set = None
        else:
            self._set = _ball(family, family.root(), radius)

    def __contains__(self, v):
        if v in self.banned:
            return False
        if self._set is not None:
            return v in self._set
        return decorated_distance(self.family, Vertex(""), v) <= self.radius

    def without(self, banned):
        w = _Window.__new__(_Window)
        w.family, w.radius, w._set = self.family, self.radius, self._set
        w.banned = self.banned | set(banned)
        return w


def _ball(family, center, radius):
    seen = {center}
    layer = [center]
    for _ in range(radius):
        nxt = []
        for u in layer:
            for z in family.neighbors(u).values():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        layer = nxt
    return seen


def min_ratio_search(
    family,
    generators,
    max_size: int = 8,
    window: int = 10,
    strategy: str = "exhaustive",
    seeds: Iterable | None = None,
) -> ExpansionReport:
    """Smallest ratio over connected vertex sets near the seeds.

    ``exhaustive`` visits every connected set with at most ``max_size``
    vertices that contains a seed and lies in the radius-``window`` ball
    around the base. ``greedy`` grows sets from the seeds, always adding the
    neighbor that keeps the ratio lowest.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    images = _Images(family, generators)
    root = family.root()
    seeds = sorted(set(seeds) if seeds is not None else {root}, key=str)
    fmt = family.format_vertex
    best = None
    worst = None
    tested = 0
    if strategy == "exhaustive":
        allowed = _Window(family, window)
        for F in _anchored_sets(family, allowed, seeds, max_size):
            tested += 1
            q = images.ratio(F)
            if best is None or q < best or (q == best and _key(F, fmt) < _key(worst, fmt)):
                best, worst = q, F
    elif strategy == "greedy":
        allowed = _Window(family, window)
        for s in seeds:
            F = {s}
            for _ in range(max_size):
                tested += 1
                q = images.ratio(F)
                if best is None or q < best:
                    best, worst = q, frozenset(F)
                if len(F) == max_size:
                    break
                cand = sorted(
                    {z for v in F for z in family.neighbors(v).values() if z in allowed} - F, key=str
                )
                if not cand:
                    break
                F = F | {min(cand, key=lambda z: (images.ratio(F | {z}), str(z)))}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return ExpansionReport(
        list(generators),
        family.to_json(),
        tested,
        best,
        sorted((fmt(v) for v in worst), key=lambda s: (len(s), s)),
        max_size,
        window,
        strategy,
    )


def _key(F, fmt):
    return sorted((len(fmt(v)), fmt(v)) for v in F)


def _anchored_sets(family, allowed, seeds, max_size):
    """Connected subsets of ``allowed`` meeting ``seeds``, each once."""
    seen_seed = []
    for s in seeds:
        if s not in allowed:
            continue
        # sets containing s but no earlier seed
        sub = allowed.without(seen_seed)
        yield from _sets_containing(family, sub, s, max_size)
        seen_seed.append(s)


def _sets_containing(family, allowed, root, max_size):
    def nbrs(v):
        return [z for z in family.neighbors(v).values() if z in allowed]

    def grow(current, frontier, excluded):
        yield frozenset(current)
        if len(current) == max_size:
            return
        frontier = list(frontier)
        excluded = set(excluded)
        while frontier:
            v = frontier.pop()
            new = [z for z in nbrs(v) if z not in current and z not in excluded and z not in frontier]
            yield from grow(current | {v}, frontier + new, excluded)
            excluded.add(v)

    yield from grow({root}, nbrs(root), set())


def decomposition_check(family, generators, components) -> dict:
    """Check ``ratio(union) >= 1 + m/r`` where m is the least relative
    boundary over the components and r the number of generators."""
    images = _Images(family, generators)
    comps = [set(c) for c in components]
    union = set().union(*comps)
    if sum(len(c) for c in comps) != len(union):
        raise ValueError("components overlap")
    m = min(Fraction(len(images.boundary(c)), len(c)) for c in comps)
    r = len(images.generators)
    lhs = images.ratio(union)
    rhs = 1 + m / r
    return {"ratio": lhs, "bound": rhs, "m": m, "r": r, "holds": lhs >= rhs}


@dataclass
class ContractedGraph:
    nodes: set
    edges: set  # frozenset pairs of node addresses

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        start = next(iter(self.nodes))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for z in adj[u] - seen:
                seen.add(z)
                stack.append(z)
        return seen == self.nodes


def contract_Hn(family, G) -> ContractedGraph:
    """Shrink each fully contained inserted path to one edge and drop inserted
    vertices, keeping the full-degree vertices of G."""
    G = set(G)
    nodes = {v for v in G if v.tag == OLD}
    edges = set()
    for v in nodes:
        for c, z in family.neighbors(v).items():
            if z.tag == OLD and z in G:
                edges.add(frozenset((v, z)))
    for v in G:
        if v.tag == NEAR:
            far = Vertex(v.addr, FAR)
            ends = Vertex(v.addr), Vertex(v.addr + "a")
            if far in G and all(e in G for e in ends):
                edges.add(frozenset(ends))
    return ContractedGraph(nodes, edges)


def induced_edges(family, G) -> set:
    G = set(G)
    return {frozenset((v, z)) for v in G for z in family.neighbors(v).values() if z in G}
