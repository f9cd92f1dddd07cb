"""Total oracles for infinite edge-colored trees and their decorations.

Vertices of the regular tree ``T_k`` are addressed by reduced color paths from
a fixed base vertex (the empty address).  The edge ``{w, w x}`` has color x.
Some a-colored edges are recolored D; such an edge is identified by its
endpoint whose address does not end in ``a``.  The decoration replaces every
D-edge ``{w, wa}`` by the path ``w -a- near -b- far -a- wa``.

Infinite parameters (subsets of the positive integers, codes, schedules of
sets) are eventually periodic, so every oracle query is answered exactly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, NamedTuple, Sequence

from .words import FreeProduct, WordError, group_for

OLD, NEAR, FAR = 0, 1, 2
_TAG_SUFFIX = {OLD: "", NEAR: ":x", FAR: ":y"}
COLOR_ORDER = "abcdeD"


class FamilyError(ValueError):
    """Malformed family description or query; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class Vertex(NamedTuple):
    addr: str
    tag: int = OLD

    def __str__(self):
        return self.addr + _TAG_SUFFIX[self.tag]


def parse_address_vertex(text: str) -> Vertex:
    text = text.strip()
    if text in ("", "e", "rho"):
        return Vertex("")
    if text.endswith(":x"):
        return Vertex(_strip_empty(text[:-2]), NEAR)
    if text.endswith(":y"):
        return Vertex(_strip_empty(text[:-2]), FAR)
    return Vertex(text)


def _strip_empty(addr: str) -> str:
    return "" if addr in ("e", "rho") else addr


def addr_distance(u: str, v: str) -> int:
    """Graph distance between two addresses of the undecorated tree."""
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return len(u) + len(v) - 2 * i


# ---------------------------------------------------------------------------
# eventually periodic parameter data


@dataclass(frozen=True)
class NatSet:
    """A subset of the positive integers with an eventually periodic indicator.

    ``prefix[i]`` is the indicator of ``i + 1``; afterwards ``period`` repeats.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.period:
            raise FamilyError("period must be nonempty")
        if any(b not in (0, 1) for b in self.prefix + self.period):
            raise FamilyError("indicator bits must be 0 or 1")
        prefix, period = _normalize_periodic(self.prefix, self.period)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def finite(cls, members: Iterable[int]) -> "NatSet":
        members = sorted(set(members))
        if members and members[0] < 1:
            raise FamilyError("members must be positive integers")
        top = members[-1] if members else 0
        bits = [0] * top
        for m in members:
            bits[m - 1] = 1
        return cls(tuple(bits), (0,))

    @classmethod
    def from_bits(cls, prefix: str, period: str) -> "NatSet":
        return cls(tuple(int(ch) for ch in prefix), tuple(int(ch) for ch in period))

    def bit(self, i: int) -> int:
        if i < 1:
            raise FamilyError("NatSet positions start at 1")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.period[(i - 1 - len(self.prefix)) % len(self.period)]

    def __contains__(self, i: int) -> bool:
        return i >= 1 and self.bit(i) == 1

    def members_upto(self, n: int) -> list[int]:
        return [i for i in range(1, n + 1) if self.bit(i)]

    @property
    def is_infinite(self) -> bool:
        return 1 in self.period

    def bits(self, n: int) -> str:
        return "".join(str(self.bit(i)) for i in range(1, n + 1))

    def to_json(self):
        if not self.is_infinite:
            return self.members_upto(len(self.prefix))
        members = [i for i in range(1, len(self.prefix) + 1) if self.prefix[i - 1]]
        return {
            "members": members,
            "repeat": {"start": len(self.prefix) + 1, "block": list(self.period)},
        }

    @classmethod
    def from_json(cls, obj, path: str = "L") -> "NatSet":
        if isinstance(obj, list):
            if not all(isinstance(m, int) and m >= 1 for m in obj):
                raise FamilyError("expected positive integers", path)
            return cls.finite(obj)
        if isinstance(obj, dict):
            members = obj.get("members", [])
            rep = obj.get("repeat")
            if rep is None:
                return cls.from_json(members, path)
            try:
                start = int(rep["start"])
                block = tuple(int(b) for b in rep["block"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FamilyError(f"bad repeat block ({exc})", path + ".repeat") from None
            if start < 1 or not block:
                raise FamilyError("repeat needs start >= 1 and nonempty block", path + ".repeat")
            if any(m >= start for m in members):
                raise FamilyError("members must lie below repeat.start", path + ".members")
            bits = [0] * (start - 1)
            for m in members:
                bits[m - 1] = 1
            return cls(tuple(bits), block)
        raise FamilyError("expected a list of integers or a {members, repeat} object", path)

    def __str__(self):
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.period)) + ")"


def _normalize_periodic(prefix: tuple, period: tuple) -> tuple[tuple, tuple]:
    # shortest period
    p = len(period)
    for d in range(1, p + 1):
        if p % d == 0 and period == period[:d] * (p // d):
            period = period[:d]
            break
    # absorb prefix tail into the period
    prefix = tuple(prefix)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = (period[-1],) + period[:-1]
    return prefix, period


@dataclass(frozen=True)
class Code:
    """An infinite sequence over ``{b, c}``: ``prefix`` then ``period`` forever."""

    prefix: str = ""
    period: str = "b"

    def __post_init__(self):
        if not self.period:
            raise FamilyError("code period must be nonempty", "code.period")
        bad = set(self.prefix + self.period) - {"b", "c"}
        if bad:
            raise FamilyError(f"code letters must be b or c, got {sorted(bad)}", "code")

    def letter(self, n: int) -> str:
        if n < 1:
            raise FamilyError("code indices start at 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - 1 - len(self.prefix)) % len(self.period)]

    def first_difference(self, other: "Code") -> int | None:
        """Least index where the codes differ, or None if they are equal."""
        import math

        span = max(len(self.prefix), len(other.prefix)) + math.lcm(
            len(self.period), len(other.period)
        )
        for n in range(1, span + 1):
            if self.letter(n) != other.letter(n):
                return n
        return None

    def to_json(self):
        return {"prefix": self.prefix, "period": self.period}

    @classmethod
    def from_json(cls, obj, path: str = "code") -> "Code":
        if isinstance(obj, str):
            return cls("", obj)
        if not isinstance(obj, dict):
            raise FamilyError("expected {prefix, period}", path)
        return cls(str(obj.get("prefix", "")), str(obj.get("period", "")))

    def __str__(self):
        return f"{self.prefix}({self.period})^w"


def opposite(letter: str) -> str:
    return {"b": "c", "c": "b"}[letter]


@dataclass(frozen=True)
class SetSchedule:
    """The family ``L_1, L_2, ...``: finitely many listed sets, then a repeating block."""

    prefix: tuple[NatSet, ...] = ()
    repeat: tuple[NatSet, ...] = (NatSet(),)

    def __post_init__(self):
        if not self.repeat:
            raise FamilyError("repeat block of the L-family must be nonempty", "L.repeat")

    def __call__(self, i: int) -> NatSet:
        if i < 1:
            raise FamilyError("L-family indices start at 1")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.repeat[(i - 1 - len(self.prefix)) % len(self.repeat)]

    def to_json(self):
        return {
            "prefix": [s.to_json() for s in self.prefix],
            "repeat": [s.to_json() for s in self.repeat],
        }

    @classmethod
    def from_json(cls, obj, path="L") -> "SetSchedule":
        if not isinstance(obj, dict):
            raise FamilyError("expected {prefix, repeat}", path)
        prefix = tuple(
            NatSet.from_json(s, f"{path}.prefix[{i}]") for i, s in enumerate(obj.get("prefix", []))
        )
        repeat = tuple(
            NatSet.from_json(s, f"{path}.repeat[{i}]") for i, s in enumerate(obj.get("repeat", [[]]))
        )
        return cls(prefix, repeat)


def line_address(n: int) -> str:
    """Address of ``x_n`` on the bi-infinite (a,b)-path through the base vertex."""
    if n >= 0:
        return ("ab" * (n // 2 + 1))[:n]
    return ("ba" * (-n // 2 + 1))[:-n]


def cb_path(base: str, m: int) -> str:
    """Address of the m-th vertex of the (c,b)-path starting at ``base``."""
    return base + ("cb" * (m // 2 + 1))[:m]


# ---------------------------------------------------------------------------
# families


class TreeFamily:
    """A properly edge-colored tree given by a neighbor oracle.

    ``neighbors(v)`` maps each color present at v to the neighbor along it.
    Generators act by moving along the edge of their color, or fixing v.
    """

    kind = "abstract"
    addressed = False

    def __init__(self, alphabet: str):
        self.alphabet = alphabet
        self.group: FreeProduct = group_for(alphabet)
        self._cache: dict = {}

    def root(self) -> Hashable:
        raise NotImplementedError

    def _neighbors(self, v) -> dict[str, Hashable]:
        raise NotImplementedError

    def neighbors(self, v) -> dict[str, Hashable]:
        try:
            return self._cache[v]
        except KeyError:
            pass
        nb = self._neighbors(v)
        self._cache[v] = nb
        return nb

    def step(self, v, g: str):
        return self.neighbors(v).get(g, v)

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def full_degree(self) -> int:
        return len(self.alphabet)

    def format_vertex(self, v) -> str:
        return str(v)

    def parse_vertex(self, text: str):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.kind} family over {self.alphabet}>"


class AddressFamily(TreeFamily):
    """A recoloring of the regular tree ``T_k`` by a D-edge schedule, decorated."""

    addressed = True

    def __init__(self, alphabet: str):
        if "a" not in alphabet or "b" not in alphabet:
            raise FamilyError("decorated families need letters a and b", "alphabet")
        super().__init__(alphabet)
        self._key_bound = -1
        self._keys: frozenset[str] = frozenset()
        self._sorted_keys: list[str] = []
        self._lock = threading.Lock()

    # subclasses produce every D-key of length <= max_len
    def _generate_keys(self, max_len: int) -> Iterable[str]:
        return ()

    def _ensure_keys(self, max_len: int) -> None:
        if max_len <= self._key_bound:
            return
        with self._lock:
            if max_len <= self._key_bound:
                return
            bound = max(max_len, 2 * self._key_bound, 16)
            keys = frozenset(self._generate_keys(bound))
            self._sorted_keys = sorted(keys, key=lambda w: (len(w), w))
            self._keys = keys
            self._key_bound = bound

    def root(self) -> Vertex:
        return Vertex("")

    def check_key(self, key: str) -> None:
        if not self.group.is_reduced(key):
            raise FamilyError(f"key {key!r} is not a reduced address", "key")
        if key.endswith("a"):
            raise FamilyError(f"key {key!r} ends in a; use the other endpoint", "key")

    def is_d_edge(self, key: str) -> bool:
        self.check_key(key)
        self._ensure_keys(len(key))
        return key in self._keys

    def _is_d(self, key: str) -> bool:
        self._ensure_keys(len(key))
        return key in self._keys

    def d_keys(self, max_len: int) -> list[str]:
        """All D-keys of address length <= max_len, in length-lex order."""
        self._ensure_keys(max_len)
        return [k for k in self._sorted_keys if len(k) <= max_len]

    def a_edge_key(self, addr: str) -> str:
        return addr[:-1] if addr.endswith("a") else addr

    def step(self, v, g: str):
        # non-a moves at Old vertices never meet a D-edge; skip the cache
        if v[1] == OLD and g != "a" and g in self.alphabet:
            addr = v[0]
            return Vertex(addr[:-1] if addr[-1:] == g else addr + g)
        return self.neighbors(v).get(g, v)

    def _neighbors(self, v: Vertex) -> dict[str, Vertex]:
        addr, tag = v
        if tag == NEAR:
            if not self._is_d(addr):
                raise FamilyError(f"no D-edge at key {addr!r}", "vertex")
            return {"a": Vertex(addr), "b": Vertex(addr, FAR)}
        if tag == FAR:
            if not self._is_d(addr):
                raise FamilyError(f"no D-edge at key {addr!r}", "vertex")
            return {"a": Vertex(addr + "a"), "b": Vertex(addr, NEAR)}
        out = {}
        last = addr[-1] if addr else ""
        for x in self.alphabet:
            if x == "a":
                key = addr[:-1] if last == "a" else addr
                if self._is_d(key):
                    out["a"] = Vertex(key, NEAR if key == addr else FAR)
                    continue
            out[x] = Vertex(addr[:-1] if last == x else addr + x)
        return out

    def undecorated_neighbors(self, addr: str) -> dict[str, str]:
        """Neighbors in the (.., D)-colored tree; D-edges carry color ``"D"``."""
        out = {}
        last = addr[-1] if addr else ""
        for x in self.alphabet:
            nb = addr[:-1] if last == x else addr + x
            if x == "a" and self._is_d(addr[:-1] if last == "a" else addr):
                out["D"] = nb
            else:
                out[x] = nb
        return out

    def branch_has_d(self, addr: str, x: str, depth: int) -> bool:
        """Whether the branch entered from ``addr`` along x (away from the base)
        contains a D-edge within ``depth`` edges of ``addr``."""
        child = addr + x
        limit = len(addr) + depth
        for k in self.d_keys(limit - 1):
            if (k + "a").startswith(child):
                return True
        return False

    def format_vertex(self, v) -> str:
        return str(v)

    def parse_vertex(self, text: str) -> Vertex:
        v = parse_address_vertex(text)
        if not self.group.is_reduced(v.addr):
            raise FamilyError(f"{v.addr!r} is not a reduced address", "vertex")
        if v.tag != OLD and not self.is_d_edge(v.addr):
            raise FamilyError(f"no D-edge at key {v.addr!r}", "vertex")
        return v

    def _base_json(self, params: dict) -> dict:
        return {"kind": self.kind, "alphabet": len(self.alphabet), "params": params}


class PlainFamily(AddressFamily):
    def __init__(self, k: int = 3):
        super().__init__(group_for(k).alphabet)
        self.kind = f"PlainT{k}"

    def step(self, v, g: str):
        if v[1] == OLD and g in self.alphabet:
            addr = v[0]
            return Vertex(addr[:-1] if addr[-1:] == g else addr + g)
        return self.neighbors(v).get(g, v)

    def to_json(self):
        return self._base_json({})


class DKeysFamily(AddressFamily):
    """Finitely many D-edges at explicit keys (``SingleD`` when there is one)."""

    def __init__(self, keys: Iterable[str], k: int = 3):
        super().__init__(group_for(k).alphabet)
        keys = sorted(set(keys), key=lambda w: (len(w), w))
        for key in keys:
            self.check_key(key)
        self.key_list = keys
        self.kind = "SingleD" if len(keys) == 1 else "DKeys"

    def _generate_keys(self, max_len):
        return [k for k in self.key_list if len(k) <= max_len]

    def to_json(self):
        if self.kind == "SingleD":
            return self._base_json({"key": self.key_list[0]})
        return self._base_json({"keys": list(self.key_list)})


def SingleD(key: str = "", k: int = 3) -> DKeysFamily:
    return DKeysFamily([key], k)


def sl_schedule(L: Callable[[int], NatSet], i: int, s: int) -> str:
    """Key of the D-edge at ``y^i_{2^s}``; ``i = 0`` is the fixed path at ``x_0``."""
    if i < 0 or s < 1:
        raise FamilyError("need i >= 0 and s >= 1")
    if i >= 1 and s not in L(i):
        raise FamilyError(f"{s} is not in L_{i}")
    base = line_address(2**i) if i >= 1 else ""
    return cb_path(base, 2**s)


class SLFamily(AddressFamily):
    """The tree built from a bi-infinite (a,b)-path and (c,b)-paths hanging off
    ``x_0`` and ``x_{2^i}``, with D-edges along them at powers of two."""

    kind = "SL"

    def __init__(self, L: Callable[[int], NatSet], spec: dict | None = None):
        super().__init__("abc")
        self.L = L
        self._spec = spec if spec is not None else (
            {"L": L.to_json()} if hasattr(L, "to_json") else {}
        )

    def _generate_keys(self, max_len):
        keys = []
        s = 1
        while 2**s <= max_len:
            keys.append(cb_path("", 2**s))
            s += 1
        i = 1
        while 2**i + 2 <= max_len:
            base = line_address(2**i)
            Li = self.L(i)
            s = 1
            while 2**i + 2**s <= max_len:
                if s in Li:
                    keys.append(cb_path(base, 2**s))
                s += 1
            i += 1
        return keys

    def to_json(self):
        return self._base_json(self._spec)


class TLFamily(AddressFamily):
    """One (c,b)-path from the base vertex; D at ``p_{2^j}`` for ``j in L``."""

    kind = "TL"

    def __init__(self, L: NatSet):
        super().__init__("abc")
        self.L = L

    def _generate_keys(self, max_len):
        keys = []
        j = 1
        while 2**j <= max_len:
            if j in self.L:
                keys.append(cb_path("", 2**j))
            j += 1
        return keys

    def to_json(self):
        return self._base_json({"L": self.L.to_json()})


def master_code_geometry(code: Code, n: int) -> tuple[str, str]:
    """``(x_n, d_n)``: the step-n endpoint and the key of the step-n D-edge."""
    if n < 1:
        raise FamilyError("step index starts at 1")
    x = ""
    key = ""
    for m in range(1, n + 1):
        am = code.letter(m)
        half = 2 ** (m - 1)
        key = x + (am + "a") * (half - 1) + am
        x = x + (opposite(am) + "a") * half
    return x, key


class MasterCodeFamily(AddressFamily):
    """The five-regular tree with one D-edge per level of the master subtree,
    chosen by a code over ``{b, c}``."""

    kind = "MasterCode"

    def __init__(self, code: Code):
        super().__init__("abcde")
        self.code = code

    def _generate_keys(self, max_len):
        keys = []
        x = ""
        m = 1
        while True:
            am = self.code.letter(m)
            half = 2 ** (m - 1)
            key = x + (am + "a") * (half - 1) + am
            if len(key) > max_len:
                break
            keys.append(key)
            x = x + (opposite(am) + "a") * half
            m += 1
        return keys

    def x_n(self, n: int) -> str:
        return master_code_geometry(self.code, n)[0] if n >= 1 else ""

    def to_json(self):
        return self._base_json({"code": self.code.to_json()})


class LineTree(TreeFamily):
    """The line on Z with edge ``(n, n+1)`` colored by ``sequence.letter(n)``."""

    kind = "LineTree"

    def __init__(self, sequence, check_window: int = 512):
        super().__init__("abc")
        self.sequence = sequence
        for n in range(-check_window, check_window):
            x, y = sequence.letter(n - 1), sequence.letter(n)
            if x not in "abc" or y not in "abc":
                raise FamilyError(f"letter outside abc at {n}", "sequence")
            if x == y:
                raise FamilyError(f"sequence not good: equal letters at {n - 1}, {n}", "sequence")

    def root(self) -> int:
        return 0

    def _neighbors(self, n):
        return {self.sequence.letter(n): n + 1, self.sequence.letter(n - 1): n - 1}

    def parse_vertex(self, text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise FamilyError(f"line-tree vertices are integers, got {text!r}", "vertex") from None

    def to_json(self):
        return {"kind": self.kind, "alphabet": 3, "params": {"sequence": self.sequence.to_json()}}


class ExplicitFinite(TreeFamily):
    """A finite tree given by an edge table ``(u, v, color)``."""

    kind = "ExplicitFinite"

    def __init__(self, edges: Sequence[tuple[str, str, str]], root: str | None = None, k: int = 3):
        super().__init__(group_for(k).alphabet)
        adj: dict[str, dict[str, str]] = {}
        for i, (u, v, c) in enumerate(edges):
            if c not in self.alphabet:
                raise FamilyError(f"color {c!r} outside alphabet", f"edges[{i}]")
            for p, q in ((u, v), (v, u)):
                slot = adj.setdefault(p, {})
                if c in slot:
                    raise FamilyError(f"two {c}-edges at {p!r}", f"edges[{i}]")
                slot[c] = q
        if not adj:
            raise FamilyError("edge table is empty", "edges")
        self.edges = [tuple(e) for e in edges]
        self._adj = adj
        self._root = root if root is not None else min(adj)
        if self._root not in adj:
            raise FamilyError(f"root {self._root!r} not in the table", "root")
        _check_tree(adj)

    def root(self):
        return self._root

    def _neighbors(self, v):
        try:
            return dict(self._adj[v])
        except KeyError:
            raise FamilyError(f"unknown vertex {v!r}", "vertex") from None

    def vertices(self) -> list[str]:
        return sorted(self._adj)

    def parse_vertex(self, text: str) -> str:
        if text not in self._adj:
            raise FamilyError(f"unknown vertex {text!r}", "vertex")
        return text

    def to_json(self):
        return {
            "kind": self.kind,
            "alphabet": len(self.alphabet),
            "params": {"edges": [list(e) for e in self.edges], "root": self._root},
        }


def _check_tree(adj: dict) -> None:
    n_edges = sum(len(v) for v in adj.values()) // 2
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u].values():
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(adj) or n_edges != len(adj) - 1:
        raise FamilyError("edge table is not a tree", "edges")


# ---------------------------------------------------------------------------
# JSON


def family_from_json(spec: Any) -> TreeFamily:
    if not isinstance(spec, dict):
        raise FamilyError("family spec must be an object", "family")
    kind = spec.get("kind")
    params = spec.get("params", {}) or {}
    alphabet = spec.get("alphabet")
    if alphabet not in (None, 3, 5):
        raise FamilyError("alphabet must be 3 or 5", "family.alphabet")
    try:
        if kind in ("PlainT3", "PlainT5"):
            return PlainFamily(int(kind[-1]))
        if kind == "SingleD":
            return SingleD(str(params.get("key", "")), alphabet or 3)
        if kind == "DKeys":
            return DKeysFamily(params.get("keys", []), alphabet or 3)
        if kind == "SL":
            if "N" in params:
                from .closure import CantorSetExpr, dovetail_schedule

                expr = CantorSetExpr.from_json(params["N"], "family.params.N")
                return SLFamily(dovetail_schedule(expr), {"N": expr.to_json()})
            return SLFamily(SetSchedule.from_json(params.get("L", {}), "family.params.L"))
        if kind == "TL":
            return TLFamily(NatSet.from_json(params.get("L", []), "family.params.L"))
        if kind == "MasterCode":
            return MasterCodeFamily(Code.from_json(params.get("code", {}), "family.params.code"))
        if kind == "LineTree":
            from .subshift import sequence_from_json

            return LineTree(sequence_from_json(params.get("sequence"), "family.params.sequence"))
        if kind == "ExplicitFinite":
            edges = [tuple(e) for e in params.get("edges", [])]
            return ExplicitFinite(edges, params.get("root"), alphabet or 3)
    except WordError as exc:
        raise FamilyError(str(exc), "family.params") from None
    raise FamilyError(f"unknown family kind {kind!r}", "family.kind")
