"""Set partitions, non-crossing partitions and the integer sequences around them.

Partitions are stored canonically: every block is an increasing tuple and
blocks are ordered by their least element, so structural equality is
partition equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .errors import ResourceLimitError

PARTITION_CAP = 10


@dataclass(frozen=True)
class SetPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ground set size must be positive, got {self.n}")
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition 1..{self.n}")
        if any(not b or list(b) != sorted(b) for b in self.blocks):
            raise ValueError("blocks must be nonempty and increasing")
        if [b[0] for b in self.blocks] != sorted(b[0] for b in self.blocks):
            raise ValueError("blocks must be ordered by least element")

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]]) -> "SetPartition":
        """Build a partition from blocks in any order; canonicalizes them."""
        canon = sorted(tuple(sorted(b)) for b in blocks)
        n = sum(len(b) for b in canon)
        return cls(n, tuple(canon))

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"

    def labels(self) -> tuple[int, ...]:
        """Block index (0-based) of each element 1..n."""
        out = [0] * self.n
        for idx, block in enumerate(self.blocks):
            for x in block:
                out[x - 1] = idx
        return tuple(out)


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the enumeration cap {cap}")


def _restricted_growth_strings(n: int) -> Iterator[list[int]]:
    # a[i] <= 1 + max(a[:i]); lexicographic order
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield a
            return
        for v in range(m + 2):
            a[i] = v
            yield from rec(i + 1, max(m, v))

    a[0] = 0
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _all_partitions(n: int) -> tuple[SetPartition, ...]:
    out = []
    for rgs in _restricted_growth_strings(n):
        blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for pos, label in enumerate(rgs, start=1):
            blocks[label].append(pos)
        out.append(SetPartition(n, tuple(tuple(b) for b in blocks)))
    return tuple(out)


def enumerate_set_partitions(n: int, cap: int = PARTITION_CAP) -> tuple[SetPartition, ...]:
    """All Bell(n) partitions of {1..n}, in restricted-growth-string order."""
    _check_cap(n, cap)
    return _all_partitions(n)


def is_noncrossing(p: SetPartition) -> bool:
    """Stack scan: a block may only be revisited while it is the innermost open block."""
    labels = p.labels()
    remaining = [len(b) for b in p.blocks]
    stack: list[int] = []
    opened = [False] * len(p.blocks)
    for lab in labels:
        if opened[lab]:
            if not stack or stack[-1] != lab:
                return False
        else:
            opened[lab] = True
            stack.append(lab)
        remaining[lab] -= 1
        if remaining[lab] == 0:
            stack.pop()
    return True


@lru_cache(maxsize=None)
def _nc_partitions(n: int) -> tuple[SetPartition, ...]:
    return tuple(p for p in _all_partitions(n) if is_noncrossing(p))


def enumerate_nc_partitions(n: int, cap: int = PARTITION_CAP) -> tuple[SetPartition, ...]:
    """The non-crossing members of ``enumerate_set_partitions(n)``, same order."""
    _check_cap(n, cap)
    return _nc_partitions(n)


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``p`` lies inside a block of ``q``."""
    if p.n != q.n:
        raise ValueError(f"partitions of different ground sets ({p.n} vs {q.n})")
    qlab = q.labels()
    return all(len({qlab[x - 1] for x in b}) == 1 for b in p.blocks)


@lru_cache(maxsize=None)
def stirling2(i: int, j: int) -> int:
    """Stirling number of the second kind.

    Returns 0 whenever j > i, and also for j == 0 < i, so sums may run over
    rectangular index ranges.
    """
    if i < 0 or j < 0:
        raise ValueError("Stirling numbers need nonnegative arguments")
    if i == j:
        return 1
    if j == 0 or j > i:
        return 0
    return j * stirling2(i - 1, j) + stirling2(i - 1, j - 1)


def falling_factorial(N: int, j: int) -> int:
    if j < 0:
        raise ValueError("falling factorial order must be nonnegative")
    out = 1
    for t in range(j):
        out *= N - t
    return out


def k_coefficient(N: int, i: int, m: int) -> int:
    """N^(i-1) - 1 - sum_{j=2..m} (N-1)_(j-1) S(i, j), for 1 <= m < i."""
    if not 1 <= m < i:
        raise ValueError(f"need 1 <= m < i, got m={m}, i={i}")
    return N ** (i - 1) - 1 - sum(falling_factorial(N - 1, j - 1) * stirling2(i, j) for j in range(2, m + 1))


def touchard(i: int, alpha) -> Fraction:
    """i-th moment of a Poisson(alpha) variable, sum_j S(i, j) alpha^j, exactly."""
    if i < 0:
        raise ValueError("moment order must be nonnegative")
    alpha = Fraction(alpha)
    return sum((stirling2(i, j) * alpha**j for j in range(i + 1)), Fraction(0))


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    return sum(comb(n - 1, k) * bell(k) for k in range(n))


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    return sum(catalan(k) * catalan(n - 1 - k) for k in range(n))
