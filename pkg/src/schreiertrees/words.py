"""Reduced words in free products of order-two cyclic groups.

An element of ``Gamma_k = Z2 * ... * Z2`` (k factors) is stored as a plain
string over the first k letters of ``"abcde"``.  The string ``w = p_n ... p_1``
acts on a Schreier graph right-to-left: ``p_1`` (the last character) is
applied first.  The empty string is the identity.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator

LETTERS = "abcde"


class WordError(ValueError):
    pass


class FreeProduct:
    """The group ``Z2 * ... * Z2`` on the first ``k`` letters of ``abcde``."""

    def __init__(self, k: int):
        if not 1 <= k <= len(LETTERS):
            raise WordError(f"unsupported number of factors: {k}")
        self.k = k
        self.alphabet = LETTERS[:k]
        self._letter_set = frozenset(self.alphabet)

    def __repr__(self):
        return f"FreeProduct({self.k})"

    def __eq__(self, other):
        return isinstance(other, FreeProduct) and other.k == self.k

    def __hash__(self):
        return hash(("FreeProduct", self.k))

    def check(self, raw: Iterable[str]) -> None:
        for x in raw:
            if x not in self._letter_set:
                raise WordError(f"letter {x!r} outside alphabet {self.alphabet!r}")

    def reduce(self, raw: Iterable[str]) -> str:
        """Cancel adjacent equal letters until none remain."""
        stack: list[str] = []
        for x in raw:
            if x not in self._letter_set:
                raise WordError(f"letter {x!r} outside alphabet {self.alphabet!r}")
            if stack and stack[-1] == x:
                stack.pop()
            else:
                stack.append(x)
        return "".join(stack)

    def is_reduced(self, w: str) -> bool:
        return all(ch in self._letter_set for ch in w) and all(
            w[i] != w[i + 1] for i in range(len(w) - 1)
        )

    def multiply(self, *words: str) -> str:
        return self.reduce("".join(words))

    @staticmethod
    def inverse(w: str) -> str:
        return w[::-1]

    def conjugate(self, u: str, w: str) -> str:
        """``u w u^-1`` in reduced form."""
        return self.reduce(u + w + u[::-1])

    def enumerate_reduced(self, max_len: int) -> Iterator[str]:
        """All reduced words of length <= max_len, length first, then lexicographic."""
        if max_len < 0:
            raise WordError("max_len must be non-negative")
        yield ""
        layer = [""]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for x in self.alphabet:
                    if not w or w[-1] != x:
                        nxt.append(w + x)
            layer = nxt
            yield from layer

    def count_reduced(self, n: int) -> int:
        """Closed form ``k (k-1)^(n-1)`` for the number of reduced words of length n."""
        if n == 0:
            return 1
        return self.k * (self.k - 1) ** (n - 1)


GAMMA3 = FreeProduct(3)
GAMMA5 = FreeProduct(5)


def group_for(alphabet: int | str) -> FreeProduct:
    k = alphabet if isinstance(alphabet, int) else len(alphabet)
    if k == 3:
        return GAMMA3
    if k == 5:
        return GAMMA5
    return FreeProduct(k)


def brute_force_count(k: int, n: int) -> int:
    """Count reduced words of length exactly n by scanning all of ``k^n`` strings."""
    alphabet = LETTERS[:k]
    return sum(
        1
        for t in product(alphabet, repeat=n)
        if all(t[i] != t[i + 1] for i in range(n - 1))
    )
