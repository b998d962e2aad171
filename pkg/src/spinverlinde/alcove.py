"""Young diagrams in the fundamental alcove and the cyclic rotation acting on them.

The alcove ``Gamma(N, K)`` is the set of partitions ``(l_1, ..., l_N)`` with
``K >= l_1 >= ... >= l_{N-1} >= l_N = 0``.  Inside an :class:`AlcoveContext`
every weight is stored with exactly ``N`` entries so the rotation can index
``l_{N-1}`` without bounds checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, gcd
from typing import Iterable, Iterator


class Partition(tuple):
    """A weakly decreasing sequence of non-negative integers.

    Trailing zeros are allowed and significant for equality, so ``(1, 0)``
    and ``(1,)`` are different values; use :meth:`padded` or :meth:`trimmed`
    to normalise.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    def trimmed(self) -> Partition:
        n = len(self)
        while n and self[n - 1] == 0:
            n -= 1
        return Partition(self[:n])

    def padded(self, length: int) -> Partition:
        core = self.trimmed()
        if len(core) > length:
            raise ValueError(f"{self} has more than {length} non-zero rows")
        return Partition(tuple(core) + (0,) * (length - len(core)))

    def transpose(self) -> Partition:
        core = self.trimmed()
        if not core:
            return Partition()
        return Partition(sum(1 for p in core if p > j) for j in range(core[0]))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells ``(i, j)`` with 1-based row ``i`` and column ``1 <= j <= l_i``."""
        for i, p in enumerate(self, start=1):
            for j in range(1, p + 1):
                yield i, j


@dataclass(frozen=True)
class AlcoveContext:
    N: int
    K: int

    def __post_init__(self):
        if int(self.N) != self.N or int(self.K) != self.K:
            raise TypeError("N and K must be integers")
        if self.N < 2 or self.K < 2:
            raise ValueError(f"need N, K >= 2, got N={self.N}, K={self.K}")

    @property
    def d(self) -> int:
        return gcd(self.N, self.K)

    @property
    def N_red(self) -> int:
        """N' = N / gcd(N, K)."""
        return self.N // self.d

    @property
    def K_red(self) -> int:
        """K' = K / gcd(N, K)."""
        return self.K // self.d

    @property
    def level_shift(self) -> int:
        return self.N + self.K

    @property
    def size(self) -> int:
        return comb(self.N + self.K - 1, self.N - 1)

    @cached_property
    def weights(self) -> tuple[Partition, ...]:
        return tuple(enumerate_alcove(self))

    @cached_property
    def index(self) -> dict[Partition, int]:
        return {lam: i for i, lam in enumerate(self.weights)}

    def contains(self, lam: Iterable[int]) -> bool:
        lam = tuple(lam)
        return (
            len(lam) == self.N
            and lam[-1] == 0
            and lam[0] <= self.K
            and all(lam[i] >= lam[i + 1] for i in range(self.N - 1))
        )

    def weight(self, lam: Iterable[int]) -> Partition:
        """Coerce ``lam`` to an N-entry alcove weight, or raise ValueError."""
        p = Partition(lam).padded(self.N)
        if not self.contains(p):
            raise ValueError(f"{tuple(lam)} is not in the alcove Gamma({self.N},{self.K})")
        return p


@dataclass(frozen=True)
class OrbitInfo:
    orbit: tuple[Partition, ...]
    group_order: int
    stab_order: int = field(init=False)

    def __post_init__(self):
        if self.group_order % len(self.orbit):
            raise ArithmeticError(
                f"orbit size {len(self.orbit)} does not divide group order {self.group_order}"
            )
        object.__setattr__(self, "stab_order", self.group_order // len(self.orbit))

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)

    @property
    def representative(self) -> Partition:
        return min(self.orbit)


def enumerate_alcove(ctx: AlcoveContext) -> list[Partition]:
    """All weights of the alcove in increasing lexicographic order."""
    out = []
    # combinations_with_replacement yields non-decreasing tuples in lex order;
    # reversing each gives the partition, sorting restores lex order on it.
    for c in itertools.combinations_with_replacement(range(ctx.K + 1), ctx.N - 1):
        out.append(Partition(tuple(reversed(c)) + (0,)))
    out.sort()
    return out


def cell_stats(lam: Iterable[int], N: int | None = None) -> list[tuple[int, int]]:
    """``(content, hook length)`` for every cell of ``lam``, row by row."""
    lam = Partition(lam)
    if N is not None and len(lam.trimmed()) > N:
        raise ValueError(f"{lam} has more than {N} rows")
    conj = lam.transpose()
    return [(j - i, lam[i - 1] + conj[j - 1] - i - j + 1) for i, j in lam.cells()]


def rho_step(lam: Iterable[int], ctx: AlcoveContext) -> Partition:
    """One step of the order-N rotation ``l -> (K, l_1, ..., l_{N-1}) - l_{N-1}``."""
    lam = ctx.weight(lam)
    shift = lam[-2]
    return Partition((ctx.K - shift,) + tuple(x - shift for x in lam[:-2]) + (0,))


def _rho_fast(lam: tuple, K: int) -> tuple:
    shift = lam[-2]
    return (K - shift,) + tuple(x - shift for x in lam[:-2]) + (0,)


def orbit_info(lam: Iterable[int], ctx: AlcoveContext, step_power: int = 1) -> OrbitInfo:
    """Orbit of ``lam`` under the cyclic group generated by ``rho_step**step_power``.

    The group has order ``N // step_power``.
    """
    if step_power < 1 or ctx.N % step_power:
        raise ValueError(f"step power {step_power} does not divide N={ctx.N}")
    start = ctx.weight(lam)
    orbit = [start]
    x = tuple(start)
    while True:
        for _ in range(step_power):
            x = _rho_fast(x, ctx.K)
        if x == start:
            break
        orbit.append(Partition(x))
    return OrbitInfo(tuple(orbit), ctx.N // step_power)


def orbits(ctx: AlcoveContext, step_power: int = 1) -> list[OrbitInfo]:
    """Partition the alcove into orbits, each listed from its lex-smallest member."""
    seen: set[Partition] = set()
    out = []
    for lam in ctx.weights:
        if lam in seen:
            continue
        info = orbit_info(lam, ctx, step_power)
        seen.update(info.orbit)
        out.append(info)
    return out


def orbit_sizes(ctx: AlcoveContext, step_power: int = 1) -> dict[Partition, int]:
    """Map each alcove weight to the size of its orbit."""
    sizes = {}
    for info in orbits(ctx, step_power):
        for lam in info.orbit:
            sizes[lam] = info.orbit_size
    return sizes


def transpose_in_alcove(lam: Iterable[int], ctx: AlcoveContext) -> Partition:
    """Transpose of ``lam`` as a weight of the dual alcove Gamma(K, N).

    Only defined when ``lam`` has fewer than N non-zero rows and at most
    K - 1 columns, which is where the transpose stays inside Gamma(K, N).
    """
    lam = ctx.weight(lam)
    dual = AlcoveContext(ctx.K, ctx.N)
    return dual.weight(lam.transpose())
