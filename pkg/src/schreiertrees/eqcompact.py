"""Sequential dominance and finite-depth equational-compactness certificates.

A branch is named by ``(root, direction)``: the component of the tree minus
``root`` entered along the edge of color ``direction``, together with that
edge.  All dominance checks use the undecorated address tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .action import act, stab_contains, stabilizer_words, stabilizer_words_via_ball, ball_adjacency
from .closure import census, detect_limits
from .trees import AddressFamily, FamilyError, TreeFamily, addr_distance


@dataclass(frozen=True)
class BranchId:
    root: str
    direction: str

    def child(self) -> str:
        r, d = self.root, self.direction
        return r[:-1] if r.endswith(d) else r + d

    def contains_vertex(self, u: str) -> bool:
        return addr_distance(u, self.child()) < addr_distance(u, self.root)

    def contains_edge(self, u: str, v: str) -> bool:
        far = u if addr_distance(u, self.root) > addr_distance(v, self.root) else v
        return self.contains_vertex(far)


@dataclass(frozen=True)
class DominanceWitness:
    branch: BranchId
    checked_radius: int


def _edge_dist(x: str, key: str) -> int:
    return min(addr_distance(x, key), addr_distance(x, key + "a"))


def check_dominance(S: AddressFamily, T: AddressFamily, x: str, branch: BranchId, radius: int) -> bool:
    """Does ``(S, x)`` dominate ``(T, x)`` through ``branch`` inside the window?

    Within distance ``radius`` of x: x lies outside the branch, the D-sets of
    S and T agree outside it, and T has no D-edge inside it.
    """
    if S.alphabet != T.alphabet:
        raise FamilyError("families use different alphabets")
    if addr_distance(x, branch.root) > radius:
        raise FamilyError("branch root lies outside the checked window")
    if branch.direction not in S.alphabet:
        raise FamilyError(f"no {branch.direction}-edge in this tree")
    if branch.contains_vertex(x):
        return False
    limit = len(x) + radius
    keys = set(S.d_keys(limit)) | set(T.d_keys(limit))
    for k in sorted(keys):
        if _edge_dist(x, k) > radius:
            continue
        in_s, in_t = S.is_d_edge(k), T.is_d_edge(k)
        if branch.contains_edge(k, k + "a"):
            if in_t:
                return False
        elif in_s != in_t:
            return False
    return True


def check_dominance_chain(chain, x: str, branches, radius: int) -> bool:
    """``chain = [T, S_1, ..., S_m]`` with ``S_i`` dominating ``S_{i-1}`` via ``branches[i-1]``."""
    return all(
        check_dominance(chain[i + 1], chain[i], x, branches[i], radius) for i in range(len(branches))
    )


def check_workhorse(R_fam: TreeFamily, x, S_fam: TreeFamily, y, n: int):
    """Verify ``Stab(x) <= Stab(y)`` up to word length n; returns (ok, separating word)."""
    return stab_contains(R_fam, x, S_fam, y, n)


def translate_keys(keys, y: str, group) -> list[str]:
    """D-keys seen from y as the new base vertex."""
    out = []
    for k in keys:
        k2 = group.reduce(y[::-1] + k)
        out.append(k2[:-1] if k2.endswith("a") else k2)
    return sorted(set(out), key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# certificates


class CertificateRefused(RuntimeError):
    def __init__(self, certificate):
        super().__init__("uncovered limit codes: " + ", ".join(certificate.uncovered))
        self.certificate = certificate


@dataclass
class EqcCertificate:
    family: dict
    r: int
    R: int
    n: int
    recurrent: int
    entries: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.uncovered

    def to_json(self):
        return {
            "family": self.family,
            "r": self.r,
            "R": self.R,
            "n": self.n,
            "recurrent_codes": self.recurrent,
            "entries": self.entries,
            "uncovered": self.uncovered,
            "status": "verified to depth" if self.ok else "refused",
        }

    def audit_table(self) -> str:
        rows = [f"{'code':<18} {'z':<24} {'|z|':>4} {'y':<16} {'|y|':>4} {'|Stab_n(z)|':>11}"]
        for e in self.entries:
            rows.append(
                f"{e['code'][:16] + '..':<18} {e['z'][:24]:<24} {e['dist_z']:>4} "
                f"{e['y'][:16]:<16} {e['dist_y']:>4} {e['stab_size']:>11}"
            )
        for c in self.uncovered:
            rows.append(f"{c[:16] + '..':<18} UNCOVERED")
        status = "verified to depth" if self.ok else "REFUSED"
        rows.append(f"{status}: r={self.r} R={self.R} n={self.n}, {self.recurrent} recurrent codes")
        return "\n".join(rows) + "\n"


def bfs_candidates(family: TreeFamily, max_dist: int) -> Iterator[tuple[int, object]]:
    """Vertices by distance from the base, ties broken length-lex on their names."""
    fmt = family.format_vertex
    root = family.root()
    yield 0, root
    seen = {root}
    layer = [root]
    for d in range(1, max_dist + 1):
        nxt = []
        for u in layer:
            for z in family.neighbors(u).values():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        nxt.sort(key=lambda v: (len(fmt(v)), fmt(v)))
        for v in nxt:
            yield d, v
        layer = nxt


def _fixes_all(family, words, y) -> bool:
    return all(act(family, w, y) == y for w in words)


def certify_eqc(
    family: TreeFamily,
    r: int = 3,
    R: int = 32,
    n: int = 6,
    far_count: int = 2,
    max_candidates: int = 20000,
    strict: bool = False,
) -> EqcCertificate:
    """For each recurrent ball type, approximate its limit subgroup by the
    stabilizer of far witnesses z and find a vertex y in the inner half of the
    window whose stabilizer contains it up to length n."""
    if n < 0 or R < 2 * r:
        raise ValueError("need n >= 0 and R >= 2r")
    small, big = census(family, r, R // 2), census(family, r, R)
    recurrent = sorted(detect_limits([small, big]))
    cert = EqcCertificate(family.to_json(), r, R, n, len(recurrent))
    fmt = family.format_vertex
    inner = (R - 1) // 2
    for code in recurrent:
        far = [(d, z) for d, z in big.far_witnesses(code) if 2 * d >= R][:far_count]
        covered = bool(far)
        for dz, z in far:
            words = stabilizer_words(family, z, n)
            found = None
            for i, (dy, y) in enumerate(bfs_candidates(family, inner)):
                if i >= max_candidates:
                    break
                if _fixes_all(family, words[1:], y):
                    found = (dy, y)
                    break
            if found is None or not _reverify(family, z, found[1], words, n):
                covered = False
                break
            cert.entries.append(
                {
                    "code": code.hex(),
                    "z": fmt(z),
                    "dist_z": dz,
                    "y": fmt(found[1]),
                    "dist_y": found[0],
                    "stab_size": len(words),
                }
            )
        if not covered:
            cert.uncovered.append(code.hex())
    if strict and not cert.ok:
        raise CertificateRefused(cert)
    return cert


def _reverify(family, z, y, words, n) -> bool:
    # independent route: brute-force stabilizer inside an explicit ball
    if n <= 6 and stabilizer_words_via_ball(family, z, n) != words:
        return False
    adj = ball_adjacency(family, y, n)
    for w in words:
        u = y
        for g in reversed(w):
            u = adj[u].get(g, u)
        if u != y:
            return False
    return True


def recurrent_codes(family: TreeFamily, r: int, R: int) -> set[bytes]:
    return detect_limits([census(family, r, R // 2), census(family, r, R)])
