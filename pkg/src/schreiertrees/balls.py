"""Rooted balls, canonical codes and the rooted-tree distance.

Inside a ball of radius r a vertex at distance r contributes only the edge
leading to it; its other edges are outside and do not enter the code.  Its
true degree is kept as metadata (``frontier_degree``) for display only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .trees import COLOR_ORDER, AddressFamily, TreeFamily

_RANK = {c: i for i, c in enumerate(COLOR_ORDER)}


@dataclass
class RootedBall:
    radius: int
    labels: list  # node id -> original vertex
    parent: list  # node id -> parent id (root: -1)
    color: list  # node id -> color of the edge to the parent (root: "")
    depth: list
    frontier_degree: dict = field(default_factory=dict)

    @property
    def root(self) -> int:
        return 0

    @property
    def nodes(self) -> range:
        return range(len(self.labels))

    @property
    def edges(self) -> list[tuple[int, int, str]]:
        return [(self.parent[i], i, self.color[i]) for i in range(1, len(self.labels))]

    @property
    def boundary(self) -> list[int]:
        return [i for i in self.nodes if self.depth[i] == self.radius]

    def children(self) -> list[list[int]]:
        kids = [[] for _ in self.labels]
        for i in range(1, len(self.labels)):
            kids[self.parent[i]].append(i)
        return kids

    def relabeled(self, perm: list[int]) -> "RootedBall":
        """The same ball with node ``i`` renamed ``perm[i]`` (root stays 0)."""
        if perm[0] != 0:
            raise ValueError("relabeling must fix the root")
        n = len(self.labels)
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return RootedBall(
            self.radius,
            [self.labels[inv[j]] for j in range(n)],
            [-1 if inv[j] == 0 else perm[self.parent[inv[j]]] for j in range(n)],
            [self.color[inv[j]] for j in range(n)],
            [self.depth[inv[j]] for j in range(n)],
            {perm[i]: d for i, d in self.frontier_degree.items()},
        )


def _neighbor_fn(family: TreeFamily, undecorated: bool):
    if not undecorated:
        return family.neighbors
    if not isinstance(family, AddressFamily):
        raise TypeError("undecorated balls need an address family")
    return family.undecorated_neighbors


def _root_of(family, v, undecorated):
    if undecorated and not isinstance(v, str):
        if v.tag:
            raise ValueError("inserted vertices do not exist in the undecorated tree")
        return v.addr
    return v


def extract_ball(family: TreeFamily, v, r: int, undecorated: bool = False) -> RootedBall:
    """Exact radius-r ball around v; ``undecorated`` reads D-edges as color ``D``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    nbf = _neighbor_fn(family, undecorated)
    v = _root_of(family, v, undecorated)
    ball = RootedBall(r, [v], [-1], [""], [0])
    frontier = [0]
    for d in range(1, r + 1):
        nxt = []
        for i in frontier:
            u = ball.labels[i]
            back = ball.labels[ball.parent[i]] if i else None
            for c, z in sorted(nbf(u).items(), key=lambda kv: _RANK[kv[0]]):
                if z == back and c == ball.color[i]:
                    continue
                ball.labels.append(z)
                ball.parent.append(i)
                ball.color.append(c)
                ball.depth.append(d)
                nxt.append(len(ball.labels) - 1)
        frontier = nxt
    for i in frontier:
        ball.frontier_degree[i] = len(nbf(ball.labels[i]))
    return ball


def canonical_code(ball: RootedBall) -> bytes:
    """Nested parenthesized encoding; children ordered by edge color.

    Edge colors at a vertex are distinct, so ordering children by color makes
    the code a complete isomorphism invariant for rooted colored trees.
    """
    kids = ball.children()

    def enc(i):
        parts = sorted(kids[i], key=lambda j: _RANK[ball.color[j]])
        return "(" + "".join(ball.color[j] + enc(j) for j in parts) + ")"

    return enc(0).encode()


def ball_code(family: TreeFamily, v, r: int, undecorated: bool = False) -> bytes:
    """``canonical_code(extract_ball(...))`` without materializing the ball."""
    nbf = _neighbor_fn(family, undecorated)
    v = _root_of(family, v, undecorated)

    def enc(u, came, left):
        if left == 0:
            return "()"
        items = sorted(nbf(u).items(), key=lambda kv: _RANK[kv[0]])
        return "(" + "".join(c + enc(z, c, left - 1) for c, z in items if c != came) + ")"

    return enc(v, None, r).encode()


def isomorphic(fam_a, v_a, fam_b, v_b, r: int, undecorated: bool = False) -> bool:
    return ball_code(fam_a, v_a, r, undecorated) == ball_code(fam_b, v_b, r, undecorated)


@dataclass(frozen=True)
class Unresolved:
    """Balls agree up to ``max_r``; the distance is at most ``2**-max_r``."""

    max_r: int

    def __str__(self):
        return f"unresolved@{self.max_r}"


def dist_tau(fam_a, v_a, fam_b, v_b, max_r: int, undecorated: bool = False):
    """``2**-k`` for the largest k with isomorphic k-balls (k < max_r)."""
    if max_r < 0:
        raise ValueError("max_r must be non-negative")
    for k in range(1, max_r + 1):
        if not isomorphic(fam_a, v_a, fam_b, v_b, k, undecorated):
            return Fraction(1, 2 ** (k - 1))
    return Unresolved(max_r)


DOT_COLORS = {"a": "red", "b": "blue", "c": "green", "d": "orange", "e": "purple"}


def ball_to_dot(ball: RootedBall, name: str = "ball", fmt=str) -> str:
    lines = [f"graph {name} {{", '  node [shape=circle, label=""];']
    for i in ball.nodes:
        attrs = [f'xlabel="{fmt(ball.labels[i])}"']
        if i == 0:
            attrs.append("style=filled, fillcolor=gold")
        elif i in ball.frontier_degree:
            attrs.append("shape=point")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for p, i, c in ball.edges:
        if c == "D":
            style = 'style=dashed, label="D"'
        else:
            style = f'color={DOT_COLORS[c]}, label="{c}"'
        lines.append(f"  n{p} -- n{i} [{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
