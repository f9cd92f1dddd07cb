"""Orbit closures at finite depth and Cantor-Bendixson ranks.

Two halves:

* ``census`` / ``detect_limits`` look at which radius-r ball types occur in a
  window around the base vertex and which of them keep reappearing farther
  out as the window grows.
* ``CantorSetExpr`` and ``AccumulationPresentation`` describe countable closed
  sets symbolically so their ranks are exact; ``empirical_derivative_chain``
  is a brute-force check on finite-depth samples.

Rank convention: the least number of derived-set operations that empties the
set, so a nonempty finite set has rank 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Iterator, Sequence

from .balls import ball_code
from .trees import (
    OLD,
    AddressFamily,
    FamilyError,
    NatSet,
    PlainFamily,
    SingleD,
    TLFamily,
    TreeFamily,
    Vertex,
)

FAR_KEEP = 8


# ---------------------------------------------------------------------------
# census


@dataclass
class CodeStats:
    count: int = 0
    first_witness: object = None
    max_dist: int = -1
    far: list = field(default_factory=list)  # heap of (dist, -order, vertex)


@dataclass
class BallTypeCensus:
    r: int
    R: int
    stats: dict[bytes, CodeStats]

    @property
    def codes(self) -> set[bytes]:
        return set(self.stats)

    def far_witnesses(self, code: bytes) -> list[tuple[int, object]]:
        """Witnesses of ``code`` at the largest recorded distances, farthest first."""
        items = sorted(self.stats[code].far, key=lambda t: (-t[0], -t[1]))
        return [(d, v) for d, _, v in items]

    def total(self) -> int:
        return sum(s.count for s in self.stats.values())

    def to_tsv(self) -> str:
        rows = ["code\tcount\tmax_dist"]
        for code in sorted(self.stats):
            s = self.stats[code]
            rows.append(f"{code.hex()}\t{s.count}\t{s.max_dist}")
        return "\n".join(rows) + "\n"


class _Recorder:
    def __init__(self):
        self.stats: dict[bytes, CodeStats] = {}
        self._order = count()

    def add(self, code, dist, vertex, n=1):
        s = self.stats.get(code)
        if s is None:
            s = self.stats[code] = CodeStats(first_witness=vertex)
        s.count += n
        s.max_dist = max(s.max_dist, dist)
        item = (dist, -next(self._order), vertex)
        if len(s.far) < FAR_KEEP:
            heapq.heappush(s.far, item)
        elif item[:2] > s.far[0][:2]:
            heapq.heapreplace(s.far, item)


def _extend_away(addr: str, letters: str, length: int) -> str:
    for _ in range(length):
        addr += next(x for x in letters if not addr or x != addr[-1])
    return addr


def census(family: TreeFamily, r: int, R: int, prune: bool = True) -> BallTypeCensus:
    """Radius-r ball types over all vertices within distance R of the base.

    With ``prune`` set, branches of an address family that carry no D-edge
    near enough to matter are counted in closed form: their vertices at depth
    at least r inside the branch all see a plain ball.
    """
    if r < 0 or R < r:
        raise ValueError("census needs R >= r >= 0")
    rec = _Recorder()
    use_prune = prune and isinstance(family, AddressFamily)
    if use_prune:
        k = len(family.alphabet)
        plain = ball_code(PlainFamily(k), Vertex(""), r)
    frontier = [(family.root(), None)]
    for d in range(R + 1):
        nxt = []
        for v, came in frontier:
            rec.add(ball_code(family, v, r), d, v)
            if d == R:
                continue
            for c, z in family.neighbors(v).items():
                if c == came:
                    continue
                if (
                    use_prune
                    and v.tag == OLD
                    and z.tag == OLD
                    and z.addr == v.addr + c
                    and not family.branch_has_d(v.addr, c, R - d + r + 1)
                ):
                    _plain_branch(family, rec, z.addr, d + 1, r, R, k, plain)
                    continue
                nxt.append((z, c))
        frontier = nxt
    return BallTypeCensus(r, R, rec.stats)


def _plain_branch(family, rec, child: str, d1: int, r: int, R: int, k: int, plain: bytes):
    # explicit levels where balls can still reach outside the branch
    layer = [child]
    t = 1
    while t < r and d1 + t - 1 <= R:
        for a in layer:
            rec.add(ball_code(family, Vertex(a), r), d1 + t - 1, Vertex(a))
        layer = [a + x for a in layer for x in family.alphabet if x != a[-1]]
        t += 1
    depth = R - d1 + 1  # deepest level inside the branch
    if t > depth:
        return
    n = sum((k - 1) ** (s - 1) for s in range(t, depth))
    if n:
        w = Vertex(_extend_away(child, family.alphabet, depth - 2))
        rec.add(plain, d1 + depth - 2, w, n)
    w = Vertex(_extend_away(child, family.alphabet, depth - 1))
    rec.add(plain, d1 + depth - 1, w, (k - 1) ** (depth - 1))


def detect_limits(censuses: Sequence[BallTypeCensus]) -> set[bytes]:
    """Codes whose farthest witness sits at distance >= R/2 in the largest
    window and strictly farther out than in the smallest one."""
    if len(censuses) < 2:
        raise ValueError("need at least two window sizes")
    cs = sorted(censuses, key=lambda c: c.R)
    small, big = cs[0], cs[-1]
    if len({c.r for c in cs}) != 1:
        raise ValueError("censuses must share the ball radius")
    out = set()
    for code, s in big.stats.items():
        before = small.stats[code].max_dist if code in small.stats else -1
        if 2 * s.max_dist >= big.R and s.max_dist > before:
            out.add(code)
    return out


def reference_codes(families: Iterable[TreeFamily], r: int, R: int) -> set[bytes]:
    out = set()
    for fam in families:
        out |= census(fam, r, R).codes
    return out


# ---------------------------------------------------------------------------
# countable closed subsets of {0,1}^N


class InfiniteRankError(ValueError):
    pass


def _place(p: NatSet, m: int, q: NatSet) -> NatSet:
    """The point agreeing with p before m, differing at m, then reading q."""
    head = [p.bit(i) for i in range(1, m)] + [1 - p.bit(m)]
    return NatSet(tuple(head) + q.prefix, q.period)


class CantorSetExpr:
    def rank(self) -> int:
        raise NotImplementedError

    def evaluate(self, depth: int) -> frozenset[str]:
        raise NotImplementedError

    def is_finite_set(self) -> bool:
        raise NotImplementedError

    def iter_points(self) -> Iterator[NatSet]:
        raise NotImplementedError

    @staticmethod
    def from_json(obj, path: str = "N") -> "CantorSetExpr":
        if not isinstance(obj, dict) or len(obj) != 1:
            raise FamilyError("expected {finite: ...}, {converge: ...} or {ladder: ...}", path)
        (tag, body), = obj.items()
        if tag == "finite":
            if not isinstance(body, list) or not body:
                raise FamilyError("finite needs a nonempty list of points", path + ".finite")
            return Finite(tuple(NatSet.from_json(p, f"{path}.finite[{i}]") for i, p in enumerate(body)))
        if tag == "converge":
            try:
                target = NatSet.from_json(body["target"], path + ".converge.target")
            except (KeyError, TypeError):
                raise FamilyError("converge needs a target point", path + ".converge") from None
            prefix = tuple(
                CantorSetExpr.from_json(e, f"{path}.converge.prefix[{i}]")
                for i, e in enumerate(body.get("prefix", []))
            )
            repeat = tuple(
                CantorSetExpr.from_json(e, f"{path}.converge.repeat[{i}]")
                for i, e in enumerate(body.get("repeat", []))
            )
            return Converge(target, prefix, repeat)
        if tag == "ladder":
            return Ladder(NatSet.from_json(body["target"], path + ".ladder.target"))
        raise FamilyError(f"unknown set expression {tag!r}", path)


@dataclass(frozen=True)
class Finite(CantorSetExpr):
    points: tuple[NatSet, ...]

    def __post_init__(self):
        if not self.points:
            raise FamilyError("finite set expression must be nonempty")

    def rank(self):
        return 1

    def evaluate(self, depth):
        return frozenset(p.bits(depth) for p in self.points)

    def is_finite_set(self):
        return True

    def iter_points(self):
        seen = set()
        for p in self.points:
            if p not in seen:
                seen.add(p)
                yield p

    def to_json(self):
        return {"finite": [p.to_json() for p in self.points]}


@dataclass(frozen=True)
class Converge(CantorSetExpr):
    """``target`` together with approximants ``A_1, A_2, ...``; ``A_m`` lives in
    the cylinder that agrees with the target before m and differs at m."""

    target: NatSet
    prefix: tuple[CantorSetExpr, ...] = ()
    repeat: tuple[CantorSetExpr, ...] = ()

    def approximant(self, m: int) -> CantorSetExpr | None:
        if m <= len(self.prefix):
            return self.prefix[m - 1]
        if not self.repeat:
            return None
        return self.repeat[(m - 1 - len(self.prefix)) % len(self.repeat)]

    def rank(self):
        ranks = [e.rank() for e in self.prefix] + [1]
        if self.repeat:
            ranks.append(max(e.rank() for e in self.repeat) + 1)
        return max(ranks)

    def evaluate(self, depth):
        out = {self.target.bits(depth)}
        for m in range(1, depth + 1):
            a = self.approximant(m)
            if a is None:
                break
            head = self.target.bits(m - 1) + str(1 - self.target.bit(m))
            for q in a.evaluate(depth - m):
                out.add(head + q)
        return frozenset(out)

    def is_finite_set(self):
        return not self.repeat and all(e.is_finite_set() for e in self.prefix)

    def iter_points(self):
        yield self.target
        iters: list = []
        m = 0
        live = True
        while live or iters:
            # admit the next approximant, then take one point from each
            a = self.approximant(m + 1) if live else None
            if a is None:
                live = False
            else:
                m += 1
                iters.append((m, a.iter_points()))
            still = []
            for mm, it in iters:
                q = next(it, None)
                if q is not None:
                    yield _place(self.target, mm, q)
                    still.append((mm, it))
            iters = still

    def to_json(self):
        return {
            "converge": {
                "target": self.target.to_json(),
                "prefix": [e.to_json() for e in self.prefix],
                "repeat": [e.to_json() for e in self.repeat],
            }
        }


@dataclass(frozen=True)
class Ladder(CantorSetExpr):
    """Approximant m has rank m, so the set has infinite rank."""

    target: NatSet

    def approximant(self, m: int) -> CantorSetExpr:
        e: CantorSetExpr = Finite((self.target,))
        for _ in range(m - 1):
            e = Converge(self.target, (), (e,))
        return e

    def rank(self):
        raise InfiniteRankError("set has infinite Cantor-Bendixson rank")

    def evaluate(self, depth):
        out = {self.target.bits(depth)}
        for m in range(1, depth + 1):
            head = self.target.bits(m - 1) + str(1 - self.target.bit(m))
            out |= {head + q for q in self.approximant(m).evaluate(depth - m)}
        return frozenset(out)

    def is_finite_set(self):
        return False

    def iter_points(self):
        return Converge(self.target, (), ()).iter_points()

    def to_json(self):
        return {"ladder": {"target": self.target.to_json()}}


def cb_rank(expr: CantorSetExpr) -> int:
    return expr.rank()


def standard_expr(rank: int, base: NatSet | None = None) -> CantorSetExpr:
    """A rank-``rank`` set built by nesting convergent sequences at ``base``
    (default: all positive integers, so every point is an infinite set)."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    base = base if base is not None else NatSet((), (1,))
    e: CantorSetExpr = Finite((base,))
    for _ in range(rank - 1):
        e = Converge(base, (), (e,))
    return e


def _common_prefix(x: str, y: str) -> int:
    i = 0
    n = min(len(x), len(y))
    while i < n and x[i] == y[i]:
        i += 1
    return i


def empirical_derivative_chain(points: Iterable[str], d: int, width: int = 2) -> list[frozenset[str]]:
    """Repeatedly discard points that look isolated at the finest resolutions.

    At current depth t a point survives when, for every length in
    ``[t - width, t - 1]``, some other point shares exactly that prefix length
    with it.  Survivors are cut to depth ``t - width``.  The returned chain
    lists the nonempty stages.
    """
    if d < 1:
        raise ValueError("depth must be >= 1")
    cur = frozenset(points)
    if any(len(p) != d for p in cur):
        raise ValueError("all points must have length d")
    chain = []
    t = d
    while cur:
        chain.append(cur)
        if t <= width:
            break
        pts = sorted(cur)
        need = set(range(t - width, t))
        keep = set()
        for x in pts:
            seen = {_common_prefix(x, y) for y in pts if y != x}
            if need <= seen:
                keep.add(x[: t - width])
        t -= width
        cur = frozenset(keep)
    return chain


@dataclass
class DovetailSchedule:
    """``L_i = N_{pi(i)}`` with every point index hit infinitely often."""

    expr: CantorSetExpr
    _points: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._iter = self.expr.iter_points()
        self._finite = self.expr.is_finite_set()
        if self._finite:
            self._points = list(self._iter)

    def point(self, j: int) -> NatSet:
        while len(self._points) < j:
            self._points.append(next(self._iter))
        return self._points[j - 1]

    def index(self, i: int) -> int:
        if self._finite:
            return (i - 1) % len(self._points) + 1
        t = 1
        while t * (t + 1) // 2 < i:
            t += 1
        return i - t * (t - 1) // 2

    def __call__(self, i: int) -> NatSet:
        if i < 1:
            raise FamilyError("L-family indices start at 1")
        return self.point(self.index(i))

    def to_json(self):
        return {"N": self.expr.to_json()}


def dovetail_schedule(expr: CantorSetExpr) -> DovetailSchedule:
    return DovetailSchedule(expr)


# ---------------------------------------------------------------------------
# presentations

STRATUM_KINDS = ("S", "T_N", "That3", "T3")


@dataclass
class AccumulationPresentation:
    """Strata of a closure and the relation "stratum A accumulates on B"."""

    N: CantorSetExpr
    strata: list[tuple[str, str]]  # (name, kind)
    limits: dict[str, list[str]]

    @classmethod
    def standard(cls, N: CantorSetExpr) -> "AccumulationPresentation":
        return cls(
            N,
            [("S", "S"), ("TN", "T_N"), ("That3", "That3"), ("T3", "T3")],
            {"S": ["TN"], "TN": ["That3"], "That3": ["T3"]},
        )

    def to_json(self):
        return {
            "N": self.N.to_json(),
            "strata": [{"name": n, "kind": k} for n, k in self.strata],
            "limits": {a: list(b) for a, b in sorted(self.limits.items())},
        }

    @classmethod
    def from_json(cls, obj, path="presentation") -> "AccumulationPresentation":
        if not isinstance(obj, dict) or "N" not in obj:
            raise FamilyError("presentation needs an N expression", path)
        N = CantorSetExpr.from_json(obj["N"], path + ".N")
        if "strata" not in obj:
            return cls.standard(N)
        strata = [(s["name"], s["kind"]) for s in obj["strata"]]
        limits = {a: list(b) for a, b in obj.get("limits", {}).items()}
        return cls(N, strata, limits)


def _validate(p: AccumulationPresentation) -> dict[str, str]:
    kinds = {}
    for name, kind in p.strata:
        if kind not in STRATUM_KINDS:
            raise FamilyError(f"unknown stratum kind {kind!r}", "presentation.strata")
        if name in kinds:
            raise FamilyError(f"duplicate stratum {name!r}", "presentation.strata")
        kinds[name] = kind
    if sorted(kinds.values()) != sorted(STRATUM_KINDS):
        raise FamilyError("template needs exactly one stratum of each kind", "presentation.strata")
    order = {k: i for i, k in enumerate(STRATUM_KINDS)}
    by_kind = {k: n for n, k in kinds.items()}
    for a, bs in p.limits.items():
        if a not in kinds:
            raise FamilyError(f"unknown stratum {a!r}", "presentation.limits")
        for b in bs:
            if b not in kinds:
                raise FamilyError(f"unknown stratum {b!r}", "presentation.limits")
            if order[kinds[b]] <= order[kinds[a]]:
                raise FamilyError(f"{a} -> {b} breaks the well-founded order", "presentation.limits")
    for a, b in zip(STRATUM_KINDS, STRATUM_KINDS[1:]):
        if by_kind[b] not in p.limits.get(by_kind[a], []):
            raise FamilyError(f"template requires {by_kind[a]} -> {by_kind[b]}", "presentation.limits")
    return kinds


def _check_points_infinite(expr: CantorSetExpr, sample: int = 64) -> None:
    it = expr.iter_points()
    for _ in range(sample):
        p = next(it, None)
        if p is None:
            return
        if not p.is_infinite:
            raise FamilyError(
                f"point {p} is a finite set; its tree is not a T_N limit", "presentation.N"
            )


def presentation_levels(p: AccumulationPresentation) -> dict[str, int]:
    """Derived-set level of each stratum (isolated points have level 0)."""
    kinds = _validate(p)
    _check_points_infinite(p.N)
    alpha = cb_rank(p.N)
    sources: dict[str, list[str]] = {n: [] for n in kinds}
    for a, bs in p.limits.items():
        for b in bs:
            sources[b].append(a)
    level: dict[str, int] = {}
    for kind in STRATUM_KINDS:
        for name, k in kinds.items():
            if k != kind:
                continue
            base = 1 + max((level[s] for s in sources[name]), default=-1)
            if kind == "T_N":
                # the class of N sits lam(N) levels above base; lam < alpha
                base += alpha - 1
            level[name] = base
    return level


@dataclass(frozen=True)
class PresentationRank:
    rank: int
    alpha: int
    levels: dict

    def to_json(self):
        return {
            "rank": self.rank,
            "alpha": self.alpha,
            "levels": dict(sorted(self.levels.items())),
            "convention": "least number of derivatives reaching the empty set",
            "note": "finite alpha gives alpha+3 under this convention; counting from the first nonempty derivative gives alpha+2",
        }


def cb_rank_presentation(p: AccumulationPresentation) -> PresentationRank:
    levels = presentation_levels(p)
    return PresentationRank(max(levels.values()) + 1, cb_rank(p.N), levels)


def presentation_reference_families(p_or_expr, count_points: int = 4) -> list[TreeFamily]:
    """Trees of the declared limit strata: ``T_N`` for the first points N,
    a single D-edge, and the plain tree."""
    expr = p_or_expr.N if isinstance(p_or_expr, AccumulationPresentation) else p_or_expr
    fams: list[TreeFamily] = []
    for _, N in zip(range(count_points), expr.iter_points()):
        fams.append(TLFamily(N))
    fams.append(SingleD(""))
    fams.append(PlainFamily(3))
    return fams
