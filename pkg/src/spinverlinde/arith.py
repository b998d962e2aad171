"""Certified real arithmetic on top of Arb balls (python-flint).

Every value is a ball ``midpoint +/- radius`` guaranteed to contain the exact
real number.  Integers are extracted with :func:`certified_round`, which never
guesses.  It returns the single enclosed integer when the ball is narrow
enough; otherwise it asks for more precision or proves that no integer fits.

Flint keeps its working precision in a process-global context, so
:func:`working_precision` must not be entered concurrently from several
threads.  Parallel callers should use processes.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from flint import arb, ctx, fmpq

from .alcove import AlcoveContext, Partition, cell_stats


class PrecisionExhausted(ArithmeticError):
    """The enclosure could not be narrowed to one integer within ``max_bits``."""


class NonIntegral(ArithmeticError):
    """A certified enclosure excludes every integer."""


class EscalationRequested(ArithmeticError):
    """The enclosure is too wide to round; recompute at higher precision."""


@dataclass(frozen=True)
class PrecisionPolicy:
    initial_bits: int = 128
    max_bits: int = 8192
    integrality_gap: float = 0.25

    def __post_init__(self):
        if not 2 <= self.initial_bits <= self.max_bits:
            raise ValueError("need 2 <= initial_bits <= max_bits")
        if not 0 < self.integrality_gap < 0.5:
            raise ValueError("integrality_gap must lie in (0, 0.5)")

    def schedule(self) -> Iterable[int]:
        bits = self.initial_bits
        while bits <= self.max_bits:
            yield bits
            bits *= 2


DEFAULT_POLICY = PrecisionPolicy()


@contextmanager
def working_precision(bits: int):
    saved = ctx.prec
    ctx.prec = bits
    try:
        yield
    finally:
        ctx.prec = saved


def _arb_to_fraction(x: arb) -> Fraction:
    # mid() and rad() are exact binary numbers
    m, e = x.man_exp()
    return Fraction(int(m)) * (Fraction(2) ** int(e))


class CertifiedReal:
    """Immutable ball enclosure of a real number.

    Arithmetic with another enclosure runs at the larger of the two working
    precisions; ints and Fractions are promoted exactly.
    """

    __slots__ = ("ball", "working_precision")

    def __init__(self, ball, working_precision: int = 128):
        object.__setattr__(self, "ball", ball if isinstance(ball, arb) else arb(ball))
        object.__setattr__(self, "working_precision", int(working_precision))

    def __setattr__(self, name, value):
        raise AttributeError("CertifiedReal is immutable")

    @classmethod
    def exact(cls, value: int | Fraction, bits: int = 128) -> CertifiedReal:
        value = Fraction(value)
        with working_precision(bits):
            return cls(arb(fmpq(value.numerator, value.denominator)), bits)

    @property
    def midpoint(self) -> Fraction:
        return _arb_to_fraction(self.ball.mid())

    @property
    def radius(self) -> Fraction:
        return _arb_to_fraction(self.ball.rad())

    @property
    def lower(self) -> Fraction:
        return self.midpoint - self.radius

    @property
    def upper(self) -> Fraction:
        return self.midpoint + self.radius

    def contains(self, value) -> bool:
        value = Fraction(value)
        return self.lower <= value <= self.upper

    def overlaps(self, other: CertifiedReal) -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def is_positive(self) -> bool:
        return self.midpoint > self.radius

    def __float__(self) -> float:
        return float(self.ball.mid())

    def __repr__(self) -> str:
        return f"CertifiedReal({self.ball.str(radius=True)}, prec={self.working_precision})"

    def _lift(self, other):
        if isinstance(other, CertifiedReal):
            return other.ball, max(self.working_precision, other.working_precision)
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return arb(fmpq(other.numerator, other.denominator)), self.working_precision
        return NotImplemented, None

    def _binop(self, other, op):
        rhs, bits = self._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        with working_precision(bits):
            return CertifiedReal(op(self.ball, rhs), bits)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        rhs, _ = self._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        if isinstance(other, CertifiedReal) and not (other.is_positive() or (-other).is_positive()):
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if not (self.is_positive() or (-self).is_positive()):
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return CertifiedReal(-self.ball, self.working_precision)

    def __pow__(self, n: int):
        if int(n) != n:
            raise TypeError("only integer exponents are supported")
        n = int(n)
        if n < 0 and not self.is_positive() and not (-self).is_positive():
            raise ZeroDivisionError("negative power of an enclosure containing zero")
        with working_precision(self.working_precision):
            base = self.ball
            return CertifiedReal(base**n if n >= 0 else 1 / base ** (-n), self.working_precision)


class CertifiedInt(int):
    """An ``int`` that remembers the working precision that certified it (0 = exact)."""

    precision: int

    def __new__(cls, value: int, precision: int = 0):
        obj = super().__new__(cls, value)
        obj.precision = precision
        return obj


def certified_round(x: CertifiedReal, policy: PrecisionPolicy = DEFAULT_POLICY) -> int:
    """The unique integer inside ``x``.

    Raises :class:`NonIntegral` when the ball provably contains no integer and
    :class:`EscalationRequested` when its radius is not below the policy's
    integrality gap.
    """
    ball = x.ball
    if ball.rad() < arb(policy.integrality_gap):
        # a ball narrower than 1/2 holds at most one integer
        hit = ball.unique_fmpz()
        if hit is None:
            raise NonIntegral(f"no integer in {ball.str(radius=True)}")
        return int(hit)
    lo, hi = x.lower, x.upper
    first = math.ceil(lo)
    if first > hi:
        raise NonIntegral(f"no integer in [{float(lo)!r}, {float(hi)!r}]")
    if x.radius >= Fraction(policy.integrality_gap):
        raise EscalationRequested(f"radius {float(x.radius):.3g} too wide at {x.working_precision} bits")
    return first


def certify_integer(
    compute: Callable[[int], CertifiedReal], policy: PrecisionPolicy | None = None
) -> CertifiedInt:
    """Evaluate ``compute(bits)`` with doubling precision until it rounds."""
    policy = policy or DEFAULT_POLICY
    last = None
    for bits in policy.schedule():
        with working_precision(bits):
            value = compute(bits)
        try:
            return CertifiedInt(certified_round(value, policy), bits)
        except EscalationRequested as exc:
            last = exc
    raise PrecisionExhausted(f"no isolation up to {policy.max_bits} bits ({last})")


def two_sin(k: int, m: int, prec: int = 128) -> CertifiedReal:
    """Enclosure of ``2 sin(k pi / m)`` for ``0 < k < m``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if k % m == 0:
        raise ValueError(f"2 sin({k} pi/{m}) vanishes")
    if not 0 < k < m:
        raise ValueError(f"need 0 < k < m, got k={k}, m={m}")
    with working_precision(prec):
        return CertifiedReal(2 * arb(fmpq(k, m)).sin_pi(), prec)


def _sine_product(lam, n: int) -> arb:
    """prod_{i<j} 2 sin((l_i - i - l_j + j) pi / n) as a raw ball at the current precision."""
    N = len(lam)
    out = arb(1)
    for i in range(N):
        for j in range(i + 1, N):
            out *= 2 * arb(fmpq(lam[i] - i - lam[j] + j, n)).sin_pi()
    return out


def sine_product(lam, ctx_: AlcoveContext, prec: int = 128) -> CertifiedReal:
    lam = ctx_.weight(lam)
    with working_precision(prec):
        return CertifiedReal(_sine_product(lam, ctx_.level_shift), prec)


def staircase_norm(ctx_: AlcoveContext, prec: int = 128) -> CertifiedReal:
    """``a_rho * conj(a_rho) = prod_{i<j} (2 sin((j - i) pi / (N + K)))**2``."""
    zero = (0,) * ctx_.N
    with working_precision(prec):
        return CertifiedReal(_sine_product(zero, ctx_.level_shift) ** 2, prec)


def qdim_sine(lam, ctx_: AlcoveContext, prec: int = 128) -> CertifiedReal:
    """Quantum dimension as a ratio of sine products."""
    lam = ctx_.weight(lam)
    zero = (0,) * ctx_.N
    with working_precision(prec):
        n = ctx_.level_shift
        return CertifiedReal(_sine_product(lam, n) / _sine_product(zero, n), prec)


def quantum_integer(k: int, m: int, prec: int = 128) -> CertifiedReal:
    """``[k] = sin(k pi / m) / sin(pi / m)``."""
    with working_precision(prec):
        return CertifiedReal(arb(fmpq(k, m)).sin_pi() / arb(fmpq(1, m)).sin_pi(), prec)


def qdim_hook(lam, ctx_: AlcoveContext, prec: int = 128) -> CertifiedReal:
    """Quantum dimension as the hook-content product ``prod [N + cn] / [hl]``."""
    lam = Partition(lam)
    if len(lam.trimmed()) > ctx_.N:
        raise ValueError(f"{lam} has more than N={ctx_.N} rows")
    n = ctx_.level_shift
    with working_precision(prec):
        out = arb(1)
        unit = arb(fmpq(1, n)).sin_pi()
        for cn, hl in cell_stats(lam, ctx_.N):
            out *= (arb(fmpq(ctx_.N + cn, n)).sin_pi() / unit) / (arb(fmpq(hl, n)).sin_pi() / unit)
        return CertifiedReal(out, prec)


@dataclass(frozen=True)
class CertifiedComplex:
    """Rectangular enclosure ``real + i imag`` of a complex number."""

    real: CertifiedReal
    imag: CertifiedReal

    @classmethod
    def from_acb(cls, z, bits: int) -> CertifiedComplex:
        return cls(CertifiedReal(z.real, bits), CertifiedReal(z.imag, bits))

    def abs_squared(self) -> CertifiedReal:
        return self.real * self.real + self.imag * self.imag

    def contains(self, value: complex) -> bool:
        return self.real.contains(Fraction(value.real)) and self.imag.contains(Fraction(value.imag))
