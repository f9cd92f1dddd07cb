"""Five-letter constructions: the master subtree, code trees, the subgroup H
with its fixed point, and escape witnesses for finite vertex sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from .action import act, apply_word
from .trees import (
    FAR,
    NEAR,
    OLD,
    Code,
    FamilyError,
    MasterCodeFamily,
    Vertex,
    opposite,
)
from .words import GAMMA5

P = Vertex("")


# ---------------------------------------------------------------------------
# master subtree


@dataclass
class MasterWindow:
    radius: int
    level: dict[str, int]  # address -> step that added it (0 for the base)
    edges: list[tuple[str, str, str]]
    endpoints: dict[int, list[str]]

    @property
    def vertices(self) -> list[str]:
        return sorted(self.level, key=lambda w: (len(w), w))


def master_tree_window(radius: int) -> MasterWindow:
    """The master subtree intersected with the radius ball around its base."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    level = {"": 0}
    edges = []
    endpoints = {0: [""]}
    n = 1
    current = [""]
    while current and min(len(x) for x in current) < radius:
        nxt = []
        half = 2 ** (n - 1)
        for x in current:
            for letter in "bc":
                path = (letter + "a") * half
                u = x
                for ch in path:
                    v = u + ch
                    if len(v) > radius:
                        break
                    level.setdefault(v, n)
                    edges.append((u, v, ch))
                    u = v
                else:
                    nxt.append(u)
        endpoints[n] = sorted(nxt)
        current = nxt
        n += 1
    return MasterWindow(radius, level, edges, endpoints)


def on_master_tree(addr: str) -> bool:
    """Membership of an address in the master subtree (any radius)."""
    i, n = 0, 1
    while i < len(addr):
        half = 2 ** (n - 1)
        block = addr[i : i + 2 * half]
        letter = block[0]
        if letter not in "bc" or block != ((letter + "a") * half)[: len(block)]:
            return False
        i += 2 * half
        n += 1
    return True


# ---------------------------------------------------------------------------
# the subgroup H


def gamma_word(code: Code) -> str:
    a1 = code.letter(1)
    return a1 + "aea" + a1


def delta_word(code: Code) -> str:
    a1, a2 = code.letter(1), code.letter(2)
    b1 = opposite(a1)
    return b1 + "a" + a2 + "a" + a2 + "aea" + a2 + "a" + a2 + "a" + b1


def conjugate_words(code: Code) -> list[str]:
    """``a1 a x a a1`` for the three letters x that fix an inserted vertex."""
    a1 = code.letter(1)
    return [GAMMA5.reduce(a1 + "a" + x + "a" + a1) for x in "cde"]


@dataclass
class HGenerators:
    C: Code
    C_prime: Code
    gamma: str
    delta: str
    conjugates: list[str]
    alpha: str
    alpha_path: str  # letters of the synchronized walk, in walking order
    divergence: int  # first index where the codes differ
    notes: list[str] = field(default_factory=list)

    @property
    def generators(self) -> list[str]:
        """Distinct generators in a fixed order."""
        out = []
        for w in [self.gamma, self.delta, *self.conjugates, self.alpha]:
            if w not in out:
                out.append(w)
        return out

    def to_json(self):
        return {
            "C": self.C.to_json(),
            "C_prime": self.C_prime.to_json(),
            "gamma": self.gamma,
            "delta": self.delta,
            "conjugates": self.conjugates,
            "alpha": self.alpha,
            "alpha_path": self.alpha_path,
            "divergence": self.divergence,
            "generators": self.generators,
            "notes": self.notes,
        }


def _walk_moves(fam, start, letters):
    """Follow ``letters`` (walking order); None if some letter fails to move."""
    v = start
    for x in letters:
        z = fam.step(v, x)
        if z == v:
            return None
        v = z
    return v


def find_separating_path(S: MasterCodeFamily, S2: MasterCodeFamily, search_depth: int):
    """Shortest walk from the base reaching an inserted vertex of S while the same
    letters trace a path ending at a full-degree vertex of S2.

    The inserted vertices of S are exactly the two sides of its D-edges, so the
    candidates are the walks ``key + a`` and ``key + a + b``.
    """
    best = None
    for key in S.d_keys(search_depth):
        for tail in ("a", "ab"):
            letters = key + tail
            if len(letters) > search_depth:
                continue
            q = _walk_moves(S, P, letters)
            q2 = _walk_moves(S2, P, letters)
            if q is None or q2 is None or q.tag == OLD:
                continue
            if S2.degree(q2) != len(S2.alphabet):
                continue
            cand = (len(letters), letters)
            if best is None or cand < best:
                best = cand
    return None if best is None else best[1]


def build_H(C: Code, C2: Code, search_depth: int = 64) -> HGenerators:
    diff = C.first_difference(C2)
    if diff is None:
        raise FamilyError("codes are equal; no separating element exists")
    S, S2 = MasterCodeFamily(C), MasterCodeFamily(C2)
    letters = find_separating_path(S, S2, search_depth)
    if letters is None:
        raise FamilyError(f"no separating path within depth {search_depth}")
    w = letters[::-1]  # as a word: first letter walked is applied first
    alpha = GAMMA5.reduce(w[::-1] + "e" + w)
    H = HGenerators(
        C,
        C2,
        gamma_word(C),
        delta_word(C),
        conjugate_words(C),
        alpha,
        letters,
        diff,
        notes=[
            "conjugate letters taken from {c,d,e}; the e-conjugate coincides with gamma",
        ],
    )
    verify_H(H)
    return H


def verify_H(H: HGenerators) -> None:
    S, S2 = MasterCodeFamily(H.C), MasterCodeFamily(H.C_prime)
    for g in H.generators:
        if not apply_word(S, g, P).closed:
            raise AssertionError(f"generator {g} does not fix the base of S_C")
    if apply_word(S2, H.alpha, P).closed:
        raise AssertionError("alpha fixes the base of S_C'")


def fixed_point_witness(H: HGenerators) -> dict:
    S = MasterCodeFamily(H.C)
    return {g: apply_word(S, g, P).closed for g in H.generators}


# ---------------------------------------------------------------------------
# decorated distances and escapes


def _anchors(v: Vertex):
    """Old vertices adjacent along the inserted path, with their distances."""
    if v.tag == OLD:
        return [(v.addr, 0)]
    if v.tag == NEAR:
        return [(v.addr, 1), (v.addr + "a", 2)]
    return [(v.addr + "a", 1), (v.addr, 2)]


def _old_distance(fam, u: str, v: str) -> int:
    i = 0
    n = min(len(u), len(v))
    while i < n and u[i] == v[i]:
        i += 1
    d = len(u) + len(v) - 2 * i
    for w in (u, v):
        for j in range(i, len(w)):
            if w[j] == "a" and fam._is_d(w[:j]):
                d += 2
    return d


def decorated_distance(fam, u: Vertex, v: Vertex) -> int:
    """Graph distance in the decorated tree, from addresses alone."""
    if u == v:
        return 0
    if u.tag != OLD and v.tag != OLD and u.addr == v.addr:
        return 1
    return min(da + db + _old_distance(fam, a, b) for a, da in _anchors(u) for b, db in _anchors(v))


@dataclass
class Escape:
    word: str | None
    vertex: object
    image: object
    verdict: str  # "escaped" | "invariant"

    def to_json(self, fmt=str):
        return {
            "verdict": self.verdict,
            "word": self.word,
            "vertex": None if self.vertex is None else fmt(self.vertex),
            "image": None if self.image is None else fmt(self.image),
        }


def escape_witness(fam, generators, F) -> Escape:
    """A generator g and ``v in F`` with ``g(v)`` outside F.

    When every generator maps F into itself, F is invariant under the whole
    group, so longer products need not be searched.
    """
    F = set(F)
    if not F:
        raise ValueError("F must be nonempty")
    for v in sorted(F, key=str):
        for g in generators:
            z = act(fam, g, v)
            if z not in F:
                return Escape(g, v, z, "escaped")
    return Escape(None, None, None, "invariant")


def drift_escape(fam, gamma: str, delta: str, F, max_power: int | None = None) -> Escape:
    """Escape by a power of ``gamma delta`` or ``delta gamma``."""
    F = set(F)
    limit = max_power if max_power is not None else len(F) + 1
    for v in sorted(F, key=str):
        for word in (gamma + delta, delta + gamma):
            u = v
            for k in range(1, limit + 1):
                u = act(fam, word, u)
                if u not in F:
                    return Escape(GAMMA5.reduce(word * k), v, u, "escaped")
    return Escape(None, None, None, "invariant")


def _delta_touch_candidates(fam, delta: str, max_key_len: int):
    """Old vertices whose delta-walk may use an inserted path."""
    steps = list(reversed(delta))  # walking order
    out = set()
    for key in fam.d_keys(max_key_len):
        for end in (key, key + "a"):
            for j, x in enumerate(steps):
                if x != "a":
                    continue
                out.add(GAMMA5.reduce(end + "".join(reversed(steps[:j]))))
    return out


@dataclass
class EscapeSweep:
    radius: int
    max_size: int
    uncertified: list
    sets_checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, fmt=str):
        return {
            "radius": self.radius,
            "max_size": self.max_size,
            "uncertified_vertices": [fmt(v) for v in self.uncertified],
            "explicit_sets_checked": self.sets_checked,
            "failures": [[fmt(v) for v in F] for F in self.failures],
            "status": "all connected sets escape" if self.ok else "invariant set found",
        }


def escape_sweep(H: HGenerators, radius: int = 10, max_size: int = 8) -> EscapeSweep:
    """Every connected F inside the radius ball of ``S_C'`` with ``|F| <= max_size``
    is moved off itself by a generator.

    A connected F has diameter below ``max_size``; if a generator moves some
    ``v in F`` farther than that, the image leaves F.  Such vertices are
    certified in bulk: delta moves every vertex whose walk avoids the inserted
    paths by its full length.  The remaining vertices are few, and every
    connected set built only from them is checked explicitly.
    """
    fam = MasterCodeFamily(H.C_prime)
    gens = H.generators
    bound = max_size - 1
    if len(H.delta) <= bound:
        raise ValueError("delta is too short to certify vertices in bulk")
    # candidates: vertices whose delta-walk meets an inserted path, and inserted vertices
    cand = {Vertex(a) for a in _delta_touch_candidates(fam, H.delta, radius + len(H.delta) + 1)}
    for key in fam.d_keys(radius + 1):
        cand |= {Vertex(key, NEAR), Vertex(key, FAR)}
    cand = {v for v in cand if decorated_distance(fam, P, v) <= radius}
    unc = []
    for v in sorted(cand, key=lambda v: (len(str(v)), str(v))):
        if all(decorated_distance(fam, v, act(fam, g, v)) <= bound for g in gens):
            unc.append(v)
    # every connected F inside the uncertified set
    U = set(unc)
    checked = 0
    failures = []
    for F in connected_subsets(fam, U, max_size):
        checked += 1
        if escape_witness(fam, gens, F).verdict != "escaped":
            failures.append(sorted(F, key=str))
    return EscapeSweep(radius, max_size, unc, checked, failures)


def connected_subsets(fam, allowed: set, max_size: int):
    """Each connected subset of ``allowed`` (induced in the tree) once."""
    order = sorted(allowed, key=lambda v: (len(str(v)), str(v)))
    rank = {v: i for i, v in enumerate(order)}

    def nbrs(v):
        return [z for z in fam.neighbors(v).values() if z in allowed]

    for root in order:
        r0 = rank[root]
        yield from _grow({root}, [z for z in nbrs(root) if rank[z] > r0], {root}, r0, nbrs, rank, max_size)


def _grow(current, frontier, excluded, r0, nbrs, rank, max_size):
    # include-or-exclude on the frontier; sets containing a vertex excluded
    # earlier in this loop were produced by an earlier branch
    yield frozenset(current)
    if len(current) == max_size:
        return
    frontier = list(frontier)
    excluded = set(excluded)
    while frontier:
        v = frontier.pop()
        new = [
            z
            for z in nbrs(v)
            if rank[z] > r0 and z not in current and z not in excluded and z not in frontier
        ]
        yield from _grow(current | {v}, frontier + new, excluded, r0, nbrs, rank, max_size)
        excluded.add(v)
