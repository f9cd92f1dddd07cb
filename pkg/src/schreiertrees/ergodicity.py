"""Combinatorial certificate behind the weak-incomparability argument for two
code trees.

Nothing measure-theoretic is simulated. A generalized Bernoulli shift is
strongly ergodic iff the action on the index set is non-amenable; only the
combinatorial hypotheses of that criterion are checked here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .action import act
from .expansion import min_ratio_search
from .gamma5 import P, build_H, escape_sweep, fixed_point_witness
from .trees import NEAR, Code, FamilyError, MasterCodeFamily, Vertex
from .words import GAMMA5


class CertificateError(RuntimeError):
    def __init__(self, item: str, detail: dict):
        super().__init__(f"certificate refused: {item}")
        self.item = item
        self.detail = detail


@dataclass
class CertificateParams:
    search_depth: int = 64
    sweep_radius: int = 10
    sweep_size: int = 8
    expansion_size: int = 8
    expansion_window: int = 10
    freeness_len: int = 4
    freeness_min_moved: int = 50
    freeness_radius: int = 4


@dataclass
class WeakIncomparabilityCertificate:
    C: Code
    C_prime: Code
    H: dict
    fixed_points: dict
    alpha_moves: bool
    sweep: dict
    expansion: dict
    freeness: dict
    verdict: str
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "C": self.C.to_json(),
            "C_prime": self.C_prime.to_json(),
            "H": self.H,
            "fixed_point_witness": self.fixed_points,
            "alpha_moves_base_of_C_prime": self.alpha_moves,
            "escape_sweep": self.sweep,
            "expansion": self.expansion,
            "essential_freeness": self.freeness,
            "verdict": self.verdict,
            "notes": self.notes,
        }


def essential_freeness(fam, max_len: int, radius: int, min_moved: int) -> dict:
    """Count, for each nontrivial word of length <= max_len, the vertices it
    moves within ``radius`` of the base."""
    verts = [P]
    seen = {P}
    layer = [P]
    for _ in range(radius):
        nxt = []
        for u in layer:
            for z in fam.neighbors(u).values():
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        verts.extend(nxt)
        layer = nxt
    worst = None
    for w in GAMMA5.enumerate_reduced(max_len):
        if not w:
            continue
        moved = sum(1 for v in verts if act(fam, w, v) != v)
        if worst is None or moved < worst[1]:
            worst = (w, moved)
    return {
        "max_len": max_len,
        "radius": radius,
        "vertices": len(verts),
        "least_moved_word": worst[0],
        "least_moved": worst[1],
        "required": min_moved,
        "ok": worst[1] >= min_moved,
    }


def certificate(C: Code, C2: Code, params: CertificateParams | None = None) -> WeakIncomparabilityCertificate:
    p = params or CertificateParams()
    if C.first_difference(C2) is None:
        raise FamilyError("codes must differ")
    H = build_H(C, C2, p.search_depth)
    fixed = fixed_point_witness(H)
    if not all(fixed.values()):
        raise CertificateError("fixed-point witness", fixed)
    S2 = MasterCodeFamily(C2)
    moves = act(S2, H.alpha, P) != P
    if not moves:
        raise CertificateError("separation witness", {"alpha": H.alpha})
    sweep = escape_sweep(H, p.sweep_radius, p.sweep_size)
    if not sweep.ok:
        raise CertificateError("escape sweep", sweep.to_json())
    seeds = [P] + [Vertex(k, NEAR) for k in S2.d_keys(3)]
    rep = min_ratio_search(S2, H.generators, p.expansion_size, p.expansion_window, seeds=seeds)
    # every connected set up to sweep_size escapes, so it gains at least one vertex
    if p.expansion_size <= p.sweep_size:
        rep.proven_floor = 1 + Fraction(1, p.expansion_size)
    if not rep.min_ratio > 1:
        raise CertificateError("expansion floor", rep.to_json())
    free = essential_freeness(S2, p.freeness_len, p.freeness_radius, p.freeness_min_moved)
    if not free["ok"]:
        raise CertificateError("essential freeness", free)
    return WeakIncomparabilityCertificate(
        C,
        C2,
        H.to_json(),
        fixed,
        moves,
        sweep.to_json(),
        rep.to_json(),
        free,
        verdict=(
            "criterion satisfied: H fixes the base of S_C (non-ergodic restricted shift on the C side); "
            "H acts on V(S_C') without finite invariant sets and with expansion floor > 1 "
            "(strong ergodicity on the C' side follows from the non-amenability criterion)"
        ),
        notes=H.notes + ["measure-theoretic conclusion not simulated; it follows from the non-amenability criterion"],
    )
