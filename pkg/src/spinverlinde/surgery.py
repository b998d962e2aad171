"""Modulo-d spin structures on a 3-manifold given by surgery on a framed link.

They correspond to solutions ``c`` in ``(Z/d)^m`` of the characteristic equation

    B c = (d/2) (b_11, ..., b_mm)   mod d

where ``B`` is the linking matrix.  We diagonalise ``B`` over the integers
(Smith normal form, ``D = U B V`` with ``U``, ``V`` unimodular) and only then
reduce mod d, so no division by zero divisors of Z/d ever happens.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp


@dataclass(frozen=True)
class LinkingMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("linking matrix must be square and non-empty")
        if any(rows[i][j] != rows[j][i] for i in range(m) for j in range(i)):
            raise ValueError("linking matrix must be symmetric")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def parse(cls, text: str) -> LinkingMatrix:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed matrix {text!r}: {exc}") from None
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise ValueError(f"malformed matrix {text!r}: expected a list of rows")
        if not all(isinstance(v, int) for r in raw for v in r):
            raise ValueError(f"malformed matrix {text!r}: entries must be integers")
        return cls(tuple(tuple(r) for r in raw))

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.rows[i][i] for i in range(self.size))

    def apply(self, c: Sequence[int], d: int) -> tuple[int, ...]:
        return tuple(sum(b * x for b, x in zip(row, c)) % d for row in self.rows)

    def rhs(self, d: int) -> tuple[int, ...]:
        return tuple((d // 2) * b % d for b in self.diagonal)


@dataclass(frozen=True)
class CharSolutionSet:
    """Affine solution space ``particular + span(kernel_basis)``; empty when ``particular`` is None.

    ``orders[i]`` is the additive order of ``kernel_basis[i]``; every solution
    has a unique expression with ``0 <= t_i < orders[i]``.
    """

    modulus: int
    particular: tuple[int, ...] | None
    kernel_basis: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return self.particular is None

    @property
    def count(self) -> int:
        return 0 if self.empty else prod(self.orders)

    def solutions(self) -> Iterator[tuple[int, ...]]:
        if self.empty:
            return
        d = self.modulus
        for ts in itertools.product(*(range(o) for o in self.orders)):
            c = list(self.particular)
            for t, k in zip(ts, self.kernel_basis):
                for i, v in enumerate(k):
                    c[i] += t * v
            yield tuple(x % d for x in c)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "particular": None if self.empty else list(self.particular),
            "kernel_basis": [list(k) for k in self.kernel_basis],
        }


def _check_modulus(d: int) -> None:
    if d < 2 or d % 2:
        raise ValueError(f"modulus must be even and at least 2, got {d}")


def solve_characteristic(B: LinkingMatrix, d: int) -> CharSolutionSet:
    _check_modulus(d)
    m = B.size
    D, U, V = smith_normal_decomp(Matrix(B.rows), domain=ZZ)
    r = U * Matrix(B.rhs(d))
    y = []
    basis, orders = [], []
    for i in range(m):
        s = int(D[i, i])
        g = gcd(s, d)
        target = int(r[i]) % d
        if target % g:
            return CharSolutionSet(d, None, (), ())
        step = d // g
        # s/g is a unit mod d/g
        y.append(0 if step == 1 else (target // g) * pow(s // g, -1, step) % step)
        if g > 1:
            basis.append(tuple(int(V[k, i]) * step % d for k in range(m)))
            orders.append(g)
    particular = tuple(int(v) % d for v in V * Matrix(y))
    sol = CharSolutionSet(d, particular, tuple(basis), tuple(orders))
    if B.apply(particular, d) != B.rhs(d):
        raise ArithmeticError("particular solution fails re-substitution")
    return sol


def count_structures(B: LinkingMatrix, d: int) -> int:
    return solve_characteristic(B, d).count


def brute_force_solutions(B: LinkingMatrix, d: int) -> list[tuple[int, ...]]:
    """Exhaustive scan of ``(Z/d)^m``; only for small ``d**m``."""
    _check_modulus(d)
    rhs = B.rhs(d)
    return [c for c in itertools.product(range(d), repeat=B.size) if B.apply(c, d) == rhs]


def solve_json(request: dict) -> dict:
    """``{"matrix": [[...]], "d": n}`` to ``{"count", "particular", "kernel_basis"}``."""
    try:
        B = LinkingMatrix(tuple(tuple(r) for r in request["matrix"]))
        d = int(request["d"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed surgery request: {exc}") from None
    return solve_characteristic(B, d).to_json()
