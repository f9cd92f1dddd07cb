"""The action of ``Gamma_k`` on the vertices of a colored tree.

A letter moves a vertex along the edge of its color when there is one and
fixes it otherwise.  Words act right-to-left.  Stabilizers are only ever
computed up to a word-length cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable

from .trees import TreeFamily


@dataclass(frozen=True)
class WalkTrace:
    word: str
    vertices: tuple

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


def apply_letter(family: TreeFamily, g: str, v):
    return family.step(v, g)


def act(family: TreeFamily, w: str, v):
    """Image of v under the word w (last character applied first)."""
    step = family.step
    for g in reversed(w):
        v = step(v, g)
    return v


def apply_word(family: TreeFamily, w: str, v) -> WalkTrace:
    family.group.check(w)
    seq = [v]
    for g in reversed(w):
        v = family.step(v, g)
        seq.append(v)
    return WalkTrace(w, tuple(seq))


def _length_lex(words):
    return sorted(words, key=lambda w: (len(w), w))


def stabilizer_words(family: TreeFamily, v, max_len: int) -> list[str]:
    """Reduced words of length <= max_len fixing v, in length-lex order.

    Words are grown by prepending letters, so the walk is extended one step
    at a time from v.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    alphabet = family.group.alphabet
    step = family.step
    out = [""]
    layer = [("", v)]
    for _ in range(max_len):
        nxt = []
        for w, u in layer:
            first = w[:1]
            for x in alphabet:
                if x != first:
                    z = step(u, x)
                    nxt.append((x + w, z))
                    if z == v:
                        out.append(x + w)
        layer = nxt
    return _length_lex(out)


def ball_adjacency(family: TreeFamily, v, radius: int) -> dict:
    """The neighbor maps of every vertex at distance < radius from v, plus the
    vertices at distance exactly radius."""
    adj = {}
    frontier = [v]
    seen = {v}
    for _ in range(radius):
        nxt = []
        for u in frontier:
            nb = family.neighbors(u)
            adj[u] = nb
            for z in nb.values():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return adj


def stabilizer_words_via_ball(family: TreeFamily, v, max_len: int) -> list[str]:
    """Independent route: scan every string over the alphabet, keep the reduced
    ones, and walk them inside the explicit ball of radius max_len."""
    adj = ball_adjacency(family, v, max_len)
    alphabet = family.group.alphabet
    out = []
    for n in range(max_len + 1):
        for t in product(alphabet, repeat=n):
            if any(t[i] == t[i + 1] for i in range(n - 1)):
                continue
            u = v
            for g in reversed(t):
                u = adj[u].get(g, u)
            if u == v:
                out.append("".join(t))
    return _length_lex(out)


def stab_contains(fam_a: TreeFamily, v_a, fam_b: TreeFamily, v_b, max_len: int):
    """Whether every word of length <= max_len fixing ``v_a`` also fixes ``v_b``.

    Returns ``(True, None)`` or ``(False, w)`` with w the length-lex least
    separating word.
    """
    if fam_a.group != fam_b.group:
        raise ValueError("families act by different groups")
    alphabet = fam_a.group.alphabet
    step_a, step_b = fam_a.step, fam_b.step
    layer = [("", v_a, v_b)]
    for _ in range(max_len):
        nxt = []
        for w, ua, ub in layer:
            first = w[:1]
            for x in alphabet:
                if x != first:
                    nxt.append((x + w, step_a(ua, x), step_b(ub, x)))
        nxt.sort(key=lambda t: t[0])
        for w, ua, ub in nxt:
            if ua == v_a and ub != v_b:
                return False, w
        layer = nxt
    return True, None


def orbit_ball(family: TreeFamily, v, radius: int) -> list:
    """Vertices within graph distance ``radius`` of v in BFS order."""
    order = [v]
    seen = {v}
    frontier = [v]
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for z in family.neighbors(u).values():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        order.extend(nxt)
        frontier = nxt
    return order


def distances_from(family: TreeFamily, v, radius: int) -> dict[Hashable, int]:
    dist = {v: 0}
    frontier = [v]
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for z in family.neighbors(u).values():
                if z not in dist:
                    dist[z] = d
                    nxt.append(z)
        frontier = nxt
    return dist
