"""Modulo-d spin structures on a closed genus-g surface.

A structure is recorded by the values ``(a_nu, b_nu)`` of its quadratic
refinement on a standard symplectic basis ``alpha_1, beta_1, ..., alpha_g, beta_g``
with ``alpha_nu . beta_nu = 1``.  The same container also carries a class in
``H^1(Sigma; Z/d)`` for the cohomological refinements, where ``d`` may be odd.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class SpinStructure:
    modulus: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        pairs = tuple((int(a) % self.modulus, int(b) % self.modulus) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    @property
    def genus(self) -> int:
        return len(self.pairs)

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.pairs)

    @property
    def b(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.pairs)

    def negated(self) -> SpinStructure:
        return SpinStructure(self.modulus, tuple((-a, -b) for a, b in self.pairs))

    def as_list(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]

    def __str__(self) -> str:
        return ";".join(f"{a},{b}" for a, b in self.pairs)

    @classmethod
    def parse(cls, text: str, modulus: int) -> SpinStructure:
        """Read ``"a1,b1;a2,b2"`` or a JSON list of pairs such as ``[[1,0],[0,0]]``."""
        text = text.strip()
        try:
            if text.startswith("["):
                raw = json.loads(text)
            else:
                raw = [[int(v) for v in chunk.split(",")] for chunk in text.split(";") if chunk.strip()]
        except ValueError as exc:
            raise ValueError(f"malformed structure {text!r}: {exc}") from None
        if not raw or any(not isinstance(p, (list, tuple)) or len(p) != 2 for p in raw):
            raise ValueError(f"malformed structure {text!r}: expected a non-empty list of pairs")
        if any(not isinstance(v, int) for p in raw for v in p):
            raise ValueError(f"malformed structure {text!r}: entries must be integers")
        return cls(modulus, tuple((p[0], p[1]) for p in raw))


# the evaluation backend is the structure itself
QuadraticForm = SpinStructure


@dataclass(frozen=True)
class HomologyClass:
    """``sum x_nu alpha_nu + y_nu beta_nu`` with coefficients in Z/d."""

    modulus: int
    coeffs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        coeffs = tuple((int(x) % self.modulus, int(y) % self.modulus) for x, y in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def genus(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, genus: int, modulus: int) -> HomologyClass:
        return cls(modulus, ((0, 0),) * genus)

    @classmethod
    def basis(cls, genus: int, modulus: int, nu: int, which: str) -> HomologyClass:
        """``alpha_nu`` (``which="a"``) or ``beta_nu`` (``which="b"``), 1-based ``nu``."""
        coeffs = [(0, 0)] * genus
        coeffs[nu - 1] = (1, 0) if which == "a" else (0, 1)
        return cls(modulus, tuple(coeffs))

    def __add__(self, other: HomologyClass) -> HomologyClass:
        _check_compatible(self, other)
        return HomologyClass(
            self.modulus, tuple((x + u, y + v) for (x, y), (u, v) in zip(self.coeffs, other.coeffs))
        )

    def dot(self, other: HomologyClass) -> int:
        """Intersection number ``sum x_nu y'_nu - y_nu x'_nu`` mod d."""
        _check_compatible(self, other)
        return sum(x * v - y * u for (x, y), (u, v) in zip(self.coeffs, other.coeffs)) % self.modulus


def _check_compatible(x: HomologyClass, y: HomologyClass) -> None:
    if x.modulus != y.modulus or x.genus != y.genus:
        raise ValueError("classes live in different homology groups")


def all_classes(genus: int, modulus: int) -> Iterator[HomologyClass]:
    for flat in itertools.product(range(modulus), repeat=2 * genus):
        yield HomologyClass(modulus, tuple(zip(flat[::2], flat[1::2])))


def evaluate(q: SpinStructure, z: HomologyClass) -> int:
    """``q(z)`` obtained by adding basis curves one at a time.

    Each step uses ``q(x + e) = q(x) + q(e) + (d/2) x.e``, so the result is a
    direct consequence of the refinement rule rather than a closed formula.
    """
    d = q.modulus
    if z.modulus != d:
        raise ValueError(f"modulus mismatch: form mod {d}, class mod {z.modulus}")
    if z.genus != q.genus:
        raise ValueError(f"genus mismatch: form genus {q.genus}, class genus {z.genus}")
    if d % 2:
        raise ValueError("quadratic refinements need an even modulus")
    half = d // 2
    acc = HomologyClass.zero(q.genus, d)
    value = 0
    for nu, (x, y) in enumerate(z.coeffs, start=1):
        for which, times, basis_value in (("a", x, q.pairs[nu - 1][0]), ("b", y, q.pairs[nu - 1][1])):
            e = HomologyClass.basis(q.genus, d, nu, which)
            for _ in range(times):
                value = value + basis_value + half * acc.dot(e)
                acc = acc + e
    return value % d


def evaluate_closed(q: SpinStructure, z: HomologyClass) -> int:
    """Same as :func:`evaluate` through ``sum x a + y b + (d/2) x y``."""
    d = q.modulus
    return sum(x * a + y * b + (d // 2) * x * y for (x, y), (a, b) in zip(z.coeffs, q.pairs)) % d


def enumerate_structures(genus: int, modulus: int) -> Iterator[SpinStructure]:
    """All ``modulus**(2*genus)`` structures, lexicographic in ``(a_1, b_1, ..., a_g, b_g)``."""
    if genus < 1:
        raise ValueError("genus must be at least 1")
    for flat in itertools.product(range(modulus), repeat=2 * genus):
        yield SpinStructure(modulus, tuple(zip(flat[::2], flat[1::2])))


def arf(q: SpinStructure) -> int:
    if q.modulus != 2:
        raise ValueError("the Arf invariant is defined here for mod 2 forms only")
    return sum(a * b for a, b in q.pairs) % 2


def structure_from_values(values: Sequence[Sequence[int]], modulus: int) -> SpinStructure:
    return SpinStructure(modulus, tuple((int(a), int(b)) for a, b in values))
