"""Integer partitions and the per-partition factors of hypergeometric terms.

A partition ``kappa = (k_1 >= k_2 >= ... >= k_l >= 1)`` is stored as a tuple
of positive ints.  The ensemble parameter ``beta`` used below follows the
convention of the generalized Pochhammer symbol

    (a)_kappa = prod_i (a - (beta/2)(i-1))_{k_i},

so the associated Jack parameter is ``alpha = 2/beta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "Partition",
    "iter_partitions",
    "enumerate_partitions",
    "partition_count",
    "rising_factorial",
    "gen_pochhammer",
    "j_kappa",
]


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(
            tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))
        )

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield 0-based (row, column) coordinates of the Young diagram."""
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield i, j

    def arm(self, i: int, j: int) -> int:
        """Number of cells strictly to the right of cell (i, j)."""
        return self.parts[i] - j - 1

    def leg(self, i: int, j: int) -> int:
        """Number of cells strictly below cell (i, j)."""
        return sum(1 for p in self.parts[i + 1:] if p > j)

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"


def _as_parts(kappa) -> tuple[int, ...]:
    if isinstance(kappa, Partition):
        return kappa.parts
    return tuple(kappa)


def iter_partitions(k: int, max_parts: Optional[int] = None) -> Iterator[Partition]:
    """Yield the partitions of ``k`` with at most ``max_parts`` parts.

    Order is reverse-lexicographic: ``[4], [3,1], [2,2], [2,1,1], [1,1,1,1]``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if max_parts is None:
        max_parts = k
    if k == 0:
        yield Partition()
        return
    if max_parts < 1:
        return

    def rec(remaining, largest, slots, prefix):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        if slots == 0:
            return
        # the remaining slots must be able to absorb what is left
        for part in range(min(remaining, largest), 0, -1):
            if part * slots < remaining:
                break
            prefix.append(part)
            yield from rec(remaining - part, part, slots - 1, prefix)
            prefix.pop()

    yield from rec(k, k, max_parts, [])


def enumerate_partitions(k: int, max_parts: Optional[int] = None) -> list[Partition]:
    """List form of :func:`iter_partitions`."""
    return list(iter_partitions(k, max_parts))


def partition_count(k: int, max_parts: Optional[int] = None) -> int:
    """Number of partitions of ``k`` into at most ``max_parts`` parts (DP)."""
    if max_parts is None:
        max_parts = k
    # partitions into at most j parts == partitions with largest part <= j
    table = [1] + [0] * k
    for part in range(1, min(max_parts, k) + 1):
        for total in range(part, k + 1):
            table[total] += table[total - part]
    return table[k]


def rising_factorial(x: float, n: int) -> float:
    """Classical rising factorial ``(x)_n = x (x+1) ... (x+n-1)``."""
    out = 1.0
    for i in range(n):
        out *= x + i
    return out


def gen_pochhammer(a: float, kappa, beta: float) -> float:
    """Generalized Pochhammer symbol ``prod_i (a - (beta/2)(i-1))_{k_i}``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    out = 1.0
    for i, k_i in enumerate(_as_parts(kappa)):
        out *= rising_factorial(a - 0.5 * beta * i, k_i)
    return out


def j_kappa(kappa, beta: float) -> float:
    """Hook product ``prod_s (l(s) + (2/beta)(1 + a(s))) (l(s) + 1 + (2/beta) a(s))``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    kappa = kappa if isinstance(kappa, Partition) else Partition(tuple(kappa))
    alpha = 2.0 / beta
    conj = kappa.conjugate().parts
    out = 1.0
    for i, j in kappa.cells():
        arm = kappa.parts[i] - j - 1
        leg = conj[j] - i - 1
        out *= (leg + alpha * (1 + arm)) * (leg + 1 + alpha * arm)
    return out
