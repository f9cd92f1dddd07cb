"""Finitary permutations of the positive integers, subgroup oracles, and the
finite-window forms of the dichotomy and the non-compactness construction.

``s(g)`` is the largest point moved by g (0 for the identity).
Composition is right to left: ``(g * h)(i) = g(h(i))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator


class PermError(ValueError):
    pass


class WindowTooSmall(RuntimeError):
    pass


class FinitaryPerm:
    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: dict[int, int] | None = None):
        m = {i: j for i, j in (mapping or {}).items() if i != j}
        if any(i < 1 for i in m) or sorted(m) != sorted(m.values()):
            raise PermError("not a bijection of a finite set of positive integers")
        self._map = m
        self._hash = hash(frozenset(m.items()))

    @classmethod
    def identity(cls) -> "FinitaryPerm":
        return cls()

    @classmethod
    def from_cycles(cls, text: str | Iterable[Iterable[int]]) -> "FinitaryPerm":
        if isinstance(text, str):
            text = text.strip()
            if text in ("", "()", "e", "id"):
                return cls()
            cycles = [[int(x) for x in re.split(r"[\s,]+", c.strip()) if x] for c in re.findall(r"\(([^)]*)\)", text)]
            if not cycles:
                raise PermError(f"cannot parse cycle notation {text!r}")
        else:
            cycles = [list(c) for c in text]
        m: dict[int, int] = {}
        seen = set()
        for c in cycles:
            if len(set(c)) != len(c) or seen & set(c):
                raise PermError("cycles must be disjoint with distinct entries")
            seen |= set(c)
            for a, b in zip(c, c[1:] + c[:1]):
                m[a] = b
        return cls(m)

    def __call__(self, i: int) -> int:
        return self._map.get(i, i)

    def __mul__(self, other: "FinitaryPerm") -> "FinitaryPerm":
        pts = set(self._map) | set(other._map)
        return FinitaryPerm({i: self(other(i)) for i in pts})

    def inverse(self) -> "FinitaryPerm":
        return FinitaryPerm({j: i for i, j in self._map.items()})

    def conjugate_by(self, g: "FinitaryPerm") -> "FinitaryPerm":
        """``g self g^-1``."""
        return FinitaryPerm({g(i): g(j) for i, j in self._map.items()})

    def s(self) -> int:
        return max(self._map, default=0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def cycles(self) -> list[tuple[int, ...]]:
        out = []
        seen = set()
        for i in sorted(self._map):
            if i in seen:
                continue
            c = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                c.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(c))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def fixes_all(self, points: Iterable[int]) -> bool:
        return all(self(i) == i for i in points)

    def __eq__(self, other):
        return isinstance(other, FinitaryPerm) and self._map == other._map

    def __hash__(self):
        return self._hash

    def __str__(self):
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) or "()"

    __repr__ = __str__


E = FinitaryPerm()


def perms_on(points: list[int]) -> Iterator[FinitaryPerm]:
    """All permutations of ``points`` (identity first), lazily."""
    for img in permutations(points):
        yield FinitaryPerm(dict(zip(points, img)))


# ---------------------------------------------------------------------------
# oracles


@dataclass
class SubgroupOracle:
    """A subgroup of the finitary symmetric group given by membership.

    ``window(lo, hi)`` yields the members supported in ``[lo, hi]``, the
    identity first; enumeration is lazy.
    """

    tag: str
    contains: Callable[[FinitaryPerm], bool]
    _window: Callable[[int, int], Iterator[FinitaryPerm]] | None = None
    finite_elements: frozenset | None = None
    params: dict = field(default_factory=dict)

    def window(self, lo: int, hi: int) -> Iterator[FinitaryPerm]:
        if self._window is not None:
            return self._window(lo, hi)
        return (g for g in perms_on(list(range(lo, hi + 1))) if self.contains(g))

    def to_json(self):
        return {"tag": self.tag, **self.params}


def generated(gens: Iterable[FinitaryPerm], limit: int = 100000) -> SubgroupOracle:
    gens = list(gens)
    elems = {E}
    frontier = [E]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g * x
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if len(elems) > limit:
                        raise PermError("generated group exceeds the size limit")
        frontier = nxt
    ordered = sorted(elems, key=lambda g: (g.s(), str(g)))
    fe = frozenset(elems)

    def win(lo, hi):
        return (g for g in ordered if all(lo <= i <= hi for i in g.support))

    return SubgroupOracle(
        "generated", fe.__contains__, win, fe, {"generators": [str(g) for g in gens]}
    )


def alternating() -> SubgroupOracle:
    def win(lo, hi):
        return (g for g in perms_on(list(range(lo, hi + 1))) if g.is_even())

    return SubgroupOracle("alternating", FinitaryPerm.is_even, win)


def symmetric() -> SubgroupOracle:
    return SubgroupOracle("symmetric", lambda g: True, lambda lo, hi: perms_on(list(range(lo, hi + 1))))


def fixing_evens() -> SubgroupOracle:
    def contains(g):
        return all(i % 2 for i in g.support)

    def win(lo, hi):
        return perms_on([i for i in range(lo, hi + 1) if i % 2])

    return SubgroupOracle("fixing-evens", contains, win)


def conjugate(H: SubgroupOracle, kappa: FinitaryPerm) -> SubgroupOracle:
    """``kappa H kappa^-1``."""
    kinv = kappa.inverse()
    return SubgroupOracle(
        "conjugate",
        lambda g: H.contains(g.conjugate_by(kinv)),
        params={"of": H.to_json(), "by": str(kappa)},
    )


def oracle_from_json(obj) -> SubgroupOracle:
    if isinstance(obj, str):
        obj = {"tag": obj}
    tag = obj.get("tag")
    if tag == "generated":
        return generated(FinitaryPerm.from_cycles(c) for c in obj.get("generators", []))
    if tag == "alternating":
        return alternating()
    if tag == "symmetric":
        return symmetric()
    if tag == "fixing-evens":
        return fixing_evens()
    if tag == "conjugate":
        return conjugate(oracle_from_json(obj["of"]), FinitaryPerm.from_cycles(obj["by"]))
    raise PermError(f"unknown oracle tag {tag!r}")


# ---------------------------------------------------------------------------
# dichotomy


def three_cycles(l: int, W: int) -> list[FinitaryPerm]:
    """``(l, l+1, j)`` for ``l+2 <= j <= W``; they generate the alternating group on ``[l, W]``."""
    return [FinitaryPerm.from_cycles([[l, l + 1, j]]) for j in range(l + 2, W + 1)]


@dataclass
class DichotomyVerdict:
    verdict: str
    l: int
    W: int
    nontrivial_tail_element: FinitaryPerm | None
    missing_three_cycle: FinitaryPerm | None

    def to_json(self):
        return {
            "verdict": self.verdict,
            "l": self.l,
            "W": self.W,
            "nontrivial_tail_element": None if self.nontrivial_tail_element is None else str(self.nontrivial_tail_element),
            "missing_three_cycle": None if self.missing_three_cycle is None else str(self.missing_three_cycle),
        }


def dichotomy_check(H: SubgroupOracle, l: int, W: int) -> DichotomyVerdict:
    if W <= l:
        raise ValueError("need W > l")
    l = max(l, 1)
    tail = next((g for g in H.window(l, W) if not g.is_identity()), None)
    missing = next((g for g in three_cycles(l, W) if not H.contains(g)), None)
    if tail is None:
        verdict = "trivial-tail"
    elif missing is None:
        verdict = "contains-alternating-tail"
    else:
        verdict = "neither"
    return DichotomyVerdict(verdict, l, W, tail, missing)


# ---------------------------------------------------------------------------
# non-compactness witnesses


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def cycle_types(l: int, W: int) -> list[tuple[int, ...]]:
    """Non-unit cycle types on ``[l, W]`` (unit cycles dropped), fewest moved points first."""
    n = W - l + 1
    out = set()
    for p in partitions(n):
        t = tuple(k for k in p if k > 1)
        if t:
            out.add(t)
    return sorted(out, key=lambda t: (sum(t), t))


def _arrangements(points: list[int], ctype: tuple[int, ...]) -> Iterator[list[list[int]]]:
    if not ctype:
        yield []
        return
    first = points[0]
    for k in sorted(set(ctype)):
        rest_type = list(ctype)
        rest_type.remove(k)
        others = points[1:]
        for chosen in permutations(others, k - 1):
            remaining = [p for p in others if p not in chosen]
            for tail in _arrangements(remaining, tuple(rest_type)):
                yield [[first, *chosen]] + tail


def class_elements(ctype: tuple[int, ...], l: int, W: int) -> Iterator[FinitaryPerm]:
    """Elements of the class on ``[l, W]``, ordered by s then support."""
    m = sum(ctype)
    for top in range(l + m - 1, W + 1):
        for rest in combinations(range(l, top), m - 1):
            for cyc in _arrangements(list(rest) + [top], ctype):
                yield FinitaryPerm.from_cycles(cyc)


def conjugator(rho: FinitaryPerm, delta: FinitaryPerm) -> FinitaryPerm:
    """A permutation g on ``supp(rho) | supp(delta)`` with ``g rho g^-1 = delta``,
    chosen with the smallest s among cycle rotations."""
    if rho.cycle_type() != delta.cycle_type():
        raise PermError("different cycle types are not conjugate")
    rc = sorted(rho.cycles(), key=len)
    dc = sorted(delta.cycles(), key=len)
    best = None
    for rots in _rotation_choices(dc):
        m = {}
        for a, b in zip(rc, rots):
            m.update(zip(a, b))
        dom = set(rho.support) | set(delta.support)
        free_src = sorted(dom - set(m))
        free_dst = sorted(dom - set(m.values()))
        m.update(zip(free_src, free_dst))
        g = FinitaryPerm(m)
        key = (g.s(), len(g.support), str(g))
        if best is None or key < best[0]:
            best = (key, g)
    g = best[1]
    assert rho.conjugate_by(g) == delta
    return g


def _rotation_choices(cycles):
    if not cycles:
        yield []
        return
    c, rest = cycles[0], cycles[1:]
    for r in range(len(c)):
        rot = c[r:] + c[:r]
        for tail in _rotation_choices(rest):
            yield [rot] + tail


def enumerate_conjugators(count: int) -> list[FinitaryPerm]:
    """Identity, then transpositions ordered by s and then lexicographically."""
    out = [E]
    top = 2
    while len(out) < count:
        for i in range(1, top):
            out.append(FinitaryPerm.from_cycles([[i, top]]))
            if len(out) == count:
                break
        top += 1
    return out[:count]


@dataclass
class WitnessStep:
    l: int
    cycle_type: tuple
    rho: FinitaryPerm
    delta: FinitaryPerm
    gamma: FinitaryPerm  # the new conjugator
    gamma_next: FinitaryPerm  # gamma * gamma_n
    reading: str = "l uses s(kappa)"

    def to_json(self):
        return {
            "l": self.l,
            "cycle_type": list(self.cycle_type),
            "rho": str(self.rho),
            "delta": str(self.delta),
            "gamma": str(self.gamma),
            "gamma_next": str(self.gamma_next),
            "reading": self.reading,
        }


def witness_step(H: SubgroupOracle, history: list[tuple[FinitaryPerm, FinitaryPerm]], kappa: FinitaryPerm, W: int, scan: int = 20000) -> WitnessStep:
    """Extend ``[(gamma_1, delta_1), ..., (gamma_n, delta_n)]`` by one step."""
    l = max([g.s() for g, _ in history] + [d.s() for _, d in history] + [kappa.s()]) + 1
    if W - l + 1 < 2:
        raise WindowTooSmall(f"window [{l}, {W}] has no non-unit class")
    gamma_n = history[-1][0] if history else E
    any_member = False
    for ctype in cycle_types(l, W):
        best = None
        members, outsiders = [], []
        for i, g in enumerate(class_elements(ctype, l, W)):
            if i >= scan:
                break
            (members if H.contains(g) else outsiders).append(g)
            if members and outsiders:
                for rho in members:
                    for delta in outsiders:
                        gam = conjugator(rho, delta)
                        key = (max(gam.s(), delta.s()), len(gam.support), str(rho), str(delta))
                        if best is None or key < best[0]:
                            best = (key, rho, delta, gam)
                if best[0][0] <= g.s():
                    break
        any_member = any_member or bool(members)
        if best is not None:
            _, rho, delta, gam = best
            step = WitnessStep(l, ctype, rho, delta, gam, gam * gamma_n)
            verify_step(H, history, kappa, step)
            return step
    if not any_member:
        raise WindowTooSmall(f"H meets no class of S_[{l},{W}]; the tail is trivial in this window")
    raise WindowTooSmall(f"no class of S_[{l},{W}] splits between H and its complement")


def verify_step(H, history, kappa, step: WitnessStep) -> None:
    ginv = step.gamma_next.inverse()
    deltas = [d for _, d in history] + [step.delta]
    for d in deltas:
        if not H.contains(d.conjugate_by(ginv)):
            raise AssertionError(f"{d} is not in the new conjugate of H")
    if H.contains(step.delta.conjugate_by(kappa.inverse())):
        raise AssertionError(f"{step.delta} lies in the kappa-conjugate of H")
    for g, d in history:
        for x in (g, d, kappa):
            if x.support & step.gamma.support:
                raise AssertionError("conjugator support overlaps the history")
            if x * step.gamma != step.gamma * x:
                raise AssertionError("disjoint supports failed to commute")


def witness_sequence(H: SubgroupOracle, kappas: list[FinitaryPerm], W: int) -> list[WitnessStep]:
    history: list[tuple[FinitaryPerm, FinitaryPerm]] = []
    steps = []
    for kappa in kappas:
        step = witness_step(H, history, kappa, W)
        history.append((step.gamma_next, step.delta))
        steps.append(step)
    return steps


# ---------------------------------------------------------------------------
# elements fixing an initial segment


@dataclass
class PrefixExtract:
    elements: list
    cases: list  # per fixed point: "pigeonhole" or "chain"

    def to_json(self):
        return {"elements": [str(g) for g in self.elements], "cases": self.cases}


def prefix_fixing_extract(H: SubgroupOracle, s: int, count: int, W: int, population: int = 5000) -> PrefixExtract:
    """``count`` distinct members of H fixing ``1..s``, following the two cases
    of the proof one point at a time."""
    need = count * W**s
    pop = []
    for g in H.window(1, W):
        pop.append(g)
        if len(pop) >= max(population, need):
            break
    if len(pop) < need:
        raise PermError(f"window population {len(pop)} is below the {need} required")
    cases = []
    for j in range(1, s + 1):
        by_image: dict[int, list] = {}
        for g in pop:
            by_image.setdefault(g(j), []).append(g)
        k, group = max(by_image.items(), key=lambda kv: (len(kv[1]), -kv[0]))
        chain = _chain(pop, j)
        if len(group) >= len(chain):
            first = group[0]
            pop = list(dict.fromkeys(g.inverse() * first for g in group))
            cases.append("pigeonhole")
        else:
            top = chain[-1]
            tinv = top.inverse()
            pop = list(dict.fromkeys(tinv * g * top for g in chain[:-1]))
            cases.append("chain")
    out = pop[:count]
    for g in out:
        if not g.fixes_all(range(1, s + 1)):
            raise AssertionError(f"{g} moves a point of 1..{s}")
    if len(out) < count:
        raise PermError("not enough elements survived the extraction")
    return PrefixExtract(out, cases)


def _chain(pop, j):
    """Members sending j to ever larger points beyond the support of the previous ones."""
    chain = []
    bound = 0
    for g in sorted(pop, key=lambda g: (g(j), str(g))):
        if g(j) > bound:
            chain.append(g)
            bound = max(g.s(), g(j))
    return chain
