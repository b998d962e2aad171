"""Verlinde numbers for SU(N) at level K and their refinements.

All refined numbers share one shape::

    P**(g-1) * sum_x  c(x) * S(lambda(x))**(2 - 2g)

where ``S`` is the sine product of the weight, ``P`` an integer prefactor and
``c`` an exact rational built from orbit sizes and epsilon weights.  Since
``c`` depends on ``x`` only through an orbit size, the sum is regrouped by
orbit size and the (cached) sine sums are reused across structures.  Genus 1
needs no sines at all and is evaluated with Fractions.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable

from flint import arb, fmpq

from .alcove import AlcoveContext, Partition, _rho_fast, orbit_sizes
from .arith import (
    CertifiedInt,
    CertifiedReal,
    NonIntegral,
    PrecisionPolicy,
    _sine_product,
    certify_integer,
)
from .surfaces import SpinStructure, enumerate_structures


class InadmissibleError(ValueError):
    """The parameters do not carry the requested refinement."""


class IdentityViolation(ArithmeticError):
    """A proven identity failed numerically: a bug, never a property of the input."""


# ---------------------------------------------------------------------------
# epsilon weights


def epsilon(orbit_parity_even: bool, stab_order: int, a: int, b: int) -> Fraction:
    """Spin weight in {0, 1, 1/2, -1/2} of a weight whose orbit has the given parity."""
    if stab_order < 1:
        raise ValueError("stabilizer order must be positive")
    if orbit_parity_even:
        return Fraction(1) if a % stab_order == 0 and b % stab_order == 0 else Fraction(0)
    if stab_order % 2:
        raise ValueError(f"odd orbit with odd stabilizer order {stab_order}: no half-stabilizer")
    half = stab_order // 2
    if a % half or b % half:
        return Fraction(0)
    # parity rather than (-1)**k, which turns into a float for negative k
    return Fraction(-1 if (a // half) * (b // half) % 2 else 1, 2)


def epsilon_coho(stab_order: int, a: int, b: int) -> Fraction:
    if stab_order < 1:
        raise ValueError("stabilizer order must be positive")
    return Fraction(1) if a % stab_order == 0 and b % stab_order == 0 else Fraction(0)


# ---------------------------------------------------------------------------
# admissibility


def _two_adic(x: int) -> int:
    e = 0
    while x % 2 == 0:
        x //= 2
        e += 1
    return e


def _twist_root(N: int, K: int, j: int, parity: int) -> int | None:
    """Odd ``m`` such that ``(-a**(N+K))**(K j**2) = (-1)**parity`` for ``a = exp(i pi m / (N (N+K)))``.

    ``m`` ranges over the framing parameters making ``s = a**-N`` a primitive
    ``2(N+K)``-th root of unity.  The twist exponent is ``K j**2 (N + m) / N``
    in units of ``pi``.
    """
    n = N + K
    for m in range(1, 2 * N * n, 2):
        if gcd(m, n) != 1:
            continue
        x = Fraction(K * j * j * (N + m), N)
        if x.denominator == 1 and x.numerator % 2 == parity:
            return m
    return None


@dataclass(frozen=True)
class SpinAdmissibility:
    admissible: bool
    j: int | None = None
    modulus: int | None = None
    framing_root: int | None = None

    def __bool__(self) -> bool:
        return self.admissible


def spin_witness(N: int, K: int, j: int) -> SpinAdmissibility:
    """Whether ``(K)**j`` makes SU(N, K) a modulo ``N/j`` spin category."""
    if j < 1 or N % j:
        return SpinAdmissibility(False)
    l = N // j
    if l % 2:
        return SpinAdmissibility(False)
    m = _twist_root(N, K, j, parity=1)
    return SpinAdmissibility(m is not None, j if m is not None else None, l if m is not None else None, m)


def spin_admissible_su(N: int, K: int) -> SpinAdmissibility:
    """Smallest ``j`` for which ``(K)**j`` is a spin generator, if any."""
    AlcoveContext(N, K)
    for j in range(1, N + 1):
        w = spin_witness(N, K, j)
        if w:
            return w
    return SpinAdmissibility(False)


def spin_admissible_closed_form(N: int, K: int) -> bool:
    """2-adic criterion equivalent to :func:`spin_admissible_su`.

    d even: K' odd and the exponent of 2 in N' even.  d odd: the exponent of
    2 in N even and positive.
    """
    ctx = AlcoveContext(N, K)
    if ctx.d % 2 == 0:
        return ctx.K_red % 2 == 1 and _two_adic(ctx.N_red) % 2 == 0
    e = _two_adic(N)
    return e > 0 and e % 2 == 0


def emphasized_spin_case(N: int, K: int) -> bool:
    """N even and K/N an odd integer: ``(K)`` itself is a modulo-N spin generator."""
    return N % 2 == 0 and K % N == 0 and (K // N) % 2 == 1


def coho_witness(N: int, K: int, j: int) -> SpinAdmissibility:
    """Whether ``(K)**j`` makes SU(N, K) a modulo ``N/j`` cohomological category."""
    if j < 1 or N % j:
        return SpinAdmissibility(False)
    m = _twist_root(N, K, j, parity=0)
    return SpinAdmissibility(m is not None, j if m is not None else None, N // j if m is not None else None, m)


def coho_admissible_pu(N: int, K: int) -> bool:
    """PU(N, K) is modulo-d cohomological when d is odd or N K / d**2 is even."""
    ctx = AlcoveContext(N, K)
    return ctx.d % 2 == 1 or (ctx.N_red * ctx.K_red) % 2 == 0


def pu_spin_admissible(N: int, K: int) -> bool:
    ctx = AlcoveContext(N, K)
    return ctx.d % 2 == 0 and ctx.N_red % 2 == 1 and ctx.K_red % 2 == 1


# ---------------------------------------------------------------------------
# (alpha, beta) and dotted weights


@dataclass(frozen=True)
class AlphaBeta:
    alpha: int
    beta: int


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append((p, q))
        p += 1
    if n > 1:
        out.append((n, n))
    return out


def alpha_beta_choices(ctx: AlcoveContext) -> list[AlphaBeta]:
    """Every factorisation ``d = alpha beta`` with ``gcd(alpha, K') = gcd(beta, N') = gcd(alpha, beta) = 1``."""
    forced_alpha, forced_beta, free = 1, 1, []
    for p, q in _prime_powers(ctx.d):
        if ctx.N_red % p == 0:
            forced_alpha *= q
        elif ctx.K_red % p == 0:
            forced_beta *= q
        else:
            free.append(q)
    out = []
    for mask in range(1 << len(free)):
        a, b = forced_alpha, forced_beta
        for i, q in enumerate(free):
            if mask >> i & 1:
                a *= q
            else:
                b *= q
        out.append(AlphaBeta(a, b))
    return sorted(out, key=lambda ab: ab.alpha)


def alpha_beta(ctx: AlcoveContext) -> AlphaBeta:
    """Canonical factorisation: primes dividing neither N' nor K' go to beta."""
    return alpha_beta_choices(ctx)[0]


@dataclass(frozen=True)
class DottedWeight:
    iota: int
    lam: Partition


def _dotted_moves(v: tuple[int, tuple], alpha: int, K: int):
    iota, lam = v
    yield (iota + 1) % alpha, lam
    yield (iota + lam[-2]) % alpha, _rho_fast(lam, K)


def _dotted_orbit(v: tuple[int, tuple], alpha: int, K: int) -> set:
    seen = {v}
    todo = deque([v])
    while todo:
        x = todo.popleft()
        for y in _dotted_moves(x, alpha, K):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@dataclass(frozen=True)
class DottedOrbitInfo:
    full_orbit_size: int  # under Z/alpha x Z/N on the dotted alcove
    orbit_size: int  # in the reduced category
    stab_order: int


def pu_orbit_info(v: DottedWeight, ctx: AlcoveContext, ab: AlphaBeta | None = None) -> DottedOrbitInfo:
    ab = ab or alpha_beta(ctx)
    lam = ctx.weight(v.lam)
    full = len(_dotted_orbit((v.iota % ab.alpha, tuple(lam)), ab.alpha, ctx.K))
    free = ab.alpha * ctx.N_red
    if full % free:
        raise IdentityViolation(f"orbit size {full} not divisible by alpha N' = {free}")
    small = full // free
    if ctx.d % small:
        raise IdentityViolation(f"reduced orbit size {small} does not divide d = {ctx.d}")
    return DottedOrbitInfo(full, small, ctx.d // small)


# ---------------------------------------------------------------------------
# grouped sums


@lru_cache(maxsize=None)
def _su_classes(N: int, K: int, step: int) -> dict[int, tuple[int, ...]]:
    """Orbit size under ``rho**step`` -> indices of alcove weights with that orbit size."""
    ctx = AlcoveContext(N, K)
    sizes = orbit_sizes(ctx, step)
    groups = defaultdict(list)
    for i, lam in enumerate(ctx.weights):
        groups[sizes[lam]].append(i)
    return {o: tuple(ix) for o, ix in sorted(groups.items())}


@lru_cache(maxsize=None)
def _pu_classes(N: int, K: int, alpha: int) -> dict[int, tuple[int, ...]]:
    """Dotted orbit size -> alcove indices, one entry per dotted weight (repeats allowed)."""
    ctx = AlcoveContext(N, K)
    sizes: dict = {}
    for lam in ctx.weights:
        for iota in range(alpha):
            v = (iota, tuple(lam))
            if v not in sizes:
                orb = _dotted_orbit(v, alpha, K)
                for w in orb:
                    sizes[w] = len(orb)
    groups = defaultdict(list)
    for i, lam in enumerate(ctx.weights):
        for iota in range(alpha):
            groups[sizes[(iota, tuple(lam))]].append(i)
    return {o: tuple(ix) for o, ix in sorted(groups.items())}


@lru_cache(maxsize=4096)
def _sine_powers(N: int, K: int, g: int, bits: int) -> tuple:
    """``S(lambda)**(2 - 2g)`` for every alcove weight, as balls at ``bits``."""
    ctx = AlcoveContext(N, K)
    n = ctx.level_shift
    out = []
    for lam in ctx.weights:
        s2 = _sine_product(lam, n) ** 2
        out.append(s2 ** (1 - g) if g <= 1 else 1 / s2 ** (g - 1))
    return tuple(out)


def _class_sums(classes: dict[int, tuple[int, ...]], N: int, K: int, g: int, bits: int) -> dict[int, arb]:
    powers = _sine_powers(N, K, g, bits)
    return {o: sum((powers[i] for i in ix), arb(0)) for o, ix in classes.items()}


def _grouped_value(
    N: int,
    K: int,
    g: int,
    classes: dict[int, tuple[int, ...]],
    coefficient: Callable[[int], Fraction],
    prefactor: int,
    scale: Fraction,
    policy: PrecisionPolicy | None,
    exact: bool,
) -> CertifiedInt:
    """``scale * prefactor**(g-1) * sum_o coefficient(o) * sum_{x in class o} S**(2-2g)``."""
    coeffs = {o: coefficient(o) for o in classes}
    if exact and g == 1:
        total = scale * sum(c * len(classes[o]) for o, c in coeffs.items())
        if total.denominator != 1:
            raise NonIntegral(f"genus-1 value {total} is not an integer")
        return CertifiedInt(int(total), 0)

    outer = scale * Fraction(prefactor) ** (g - 1)

    def compute(bits: int) -> CertifiedReal:
        sums = _class_sums(classes, N, K, g, bits)
        acc = arb(0)
        for o, c in coeffs.items():
            if c:
                acc += arb(fmpq(c.numerator, c.denominator)) * sums[o]
        return CertifiedReal(acc * arb(fmpq(outer.numerator, outer.denominator)), bits)

    return certify_integer(compute, policy)


def _check_genus(g: int, minimum: int) -> None:
    if int(g) != g or g < minimum:
        raise ValueError(f"genus must be an integer >= {minimum}, got {g}")


def _total_prefactor(ctx: AlcoveContext) -> int:
    return ctx.N * ctx.level_shift ** (ctx.N - 1)


# ---------------------------------------------------------------------------
# unrefined numbers


def verlinde(ctx: AlcoveContext, g: int, policy: PrecisionPolicy | None = None) -> CertifiedInt:
    """Rank of the genus-g TQFT module of SU(N) at level K."""
    _check_genus(g, 0)
    if g == 1:
        return CertifiedInt(ctx.size, 0)
    everything = {1: tuple(range(ctx.size))}
    return _grouped_value(
        ctx.N, ctx.K, g, everything, lambda o: Fraction(1), _total_prefactor(ctx), Fraction(1), policy, False
    )


def pu_verlinde(ctx: AlcoveContext, g: int, policy: PrecisionPolicy | None = None) -> CertifiedInt:
    """Rank for the reduced PU(N, K) category: ``d_{N,K}(g) / N'**g``."""
    total = verlinde(ctx, g, policy)
    q, r = divmod(int(total), ctx.N_red**g)
    if r:
        raise NonIntegral(f"d_{{{ctx.N},{ctx.K}}}({g}) = {total} not divisible by N'^g = {ctx.N_red ** g}")
    return CertifiedInt(q, total.precision)


# ---------------------------------------------------------------------------
# refined numbers


def _su_refined(
    ctx: AlcoveContext,
    sigma: SpinStructure,
    step: int,
    weight: Callable[[int, int, int, int], Fraction],
    policy: PrecisionPolicy | None,
    exact: bool,
) -> CertifiedInt:
    g = sigma.genus
    _check_genus(g, 1)
    l = ctx.N // step

    def coefficient(o: int) -> Fraction:
        c = Fraction(1)
        for a, b in sigma.pairs:
            c *= weight(o, l // o, a, b) / (o * o)
        return c

    classes = _su_classes(ctx.N, ctx.K, step)
    return _grouped_value(ctx.N, ctx.K, g, classes, coefficient, _total_prefactor(ctx), Fraction(1), policy, exact)


def spin_verlinde(
    ctx: AlcoveContext,
    sigma: SpinStructure,
    j: int | None = None,
    policy: PrecisionPolicy | None = None,
    exact: bool = True,
) -> CertifiedInt:
    """Dimension of the summand of the genus-g module indexed by ``sigma``.

    Without ``j`` only the case "N even, K/N odd" is accepted and ``sigma`` is
    a modulo-N structure.  Passing ``j`` selects the generator ``(K)**j`` and
    a modulo ``N/j`` structure; it is rejected unless that generator has
    twist -1 for some framing parameter.
    """
    if j is None:
        if not emphasized_spin_case(ctx.N, ctx.K):
            raise InadmissibleError(
                f"SU({ctx.N},{ctx.K}) needs N even and K/N odd for the default spin refinement; pass j explicitly"
            )
        j = 1
    elif not spin_witness(ctx.N, ctx.K, j):
        raise InadmissibleError(f"(K)^{j} is not a spin generator for SU({ctx.N},{ctx.K})")
    l = ctx.N // j
    if sigma.modulus != l:
        raise InadmissibleError(f"structure is mod {sigma.modulus}, refinement needs mod {l}")
    return _su_refined(ctx, sigma, j, lambda o, st, a, b: epsilon(o % 2 == 0, st, a, b), policy, exact)


def coho_verlinde(
    ctx: AlcoveContext,
    j: int,
    sigma: SpinStructure,
    policy: PrecisionPolicy | None = None,
    exact: bool = True,
) -> CertifiedInt:
    """Summand indexed by a class in ``H^1(Sigma_g; Z/l)``, ``l = N/j``."""
    if not coho_witness(ctx.N, ctx.K, j):
        raise InadmissibleError(f"(K)^{j} is not a cohomological generator for SU({ctx.N},{ctx.K})")
    l = ctx.N // j
    if sigma.modulus != l:
        raise InadmissibleError(f"class is mod {sigma.modulus}, refinement needs mod {l}")
    return _su_refined(ctx, sigma, j, lambda o, st, a, b: epsilon_coho(st, a, b), policy, exact)


def pu_spin_verlinde(
    ctx: AlcoveContext,
    sigma: SpinStructure,
    ab: AlphaBeta | None = None,
    policy: PrecisionPolicy | None = None,
    exact: bool = True,
) -> CertifiedInt:
    """Spin summand for PU(N, K) with generator ``(K) x (1^N)``, summed over dotted weights."""
    if not pu_spin_admissible(ctx.N, ctx.K):
        raise InadmissibleError(f"PU({ctx.N},{ctx.K}) needs d even and N', K' odd")
    if sigma.modulus != ctx.d:
        raise InadmissibleError(f"structure is mod {sigma.modulus}, refinement needs mod d = {ctx.d}")
    ab = ab or alpha_beta(ctx)
    if ab not in alpha_beta_choices(ctx):
        raise InadmissibleError(f"{ab} is not an admissible factorisation of d = {ctx.d}")
    g = sigma.genus
    _check_genus(g, 1)
    free = ab.alpha * ctx.N_red

    def coefficient(full: int) -> Fraction:
        if full % free:
            raise IdentityViolation(f"dotted orbit size {full} not divisible by {free}")
        small = full // free
        c = Fraction(1)
        for a, b in sigma.pairs:
            c *= epsilon(small % 2 == 0, ctx.d // small, a, b) * Fraction(free, full) ** 2
        return c

    classes = _pu_classes(ctx.N, ctx.K, ab.alpha)
    prefactor = ctx.d * ctx.level_shift ** (ctx.N - 1)
    return _grouped_value(ctx.N, ctx.K, g, classes, coefficient, prefactor, Fraction(1, free), policy, exact)


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class LevelRankReport:
    N: int
    K: int
    rows: list[tuple[int, int, int]] = field(default_factory=list)  # (g, d~_{N,K}(g), d~_{K,N}(g))

    @property
    def holds(self) -> bool:
        return all(x == y for _, x, y in self.rows)


def level_rank_check(N: int, K: int, g_max: int, policy: PrecisionPolicy | None = None) -> LevelRankReport:
    ctx, dual = AlcoveContext(N, K), AlcoveContext(K, N)
    report = LevelRankReport(N, K)
    for g in range(g_max + 1):
        report.rows.append((g, pu_verlinde(ctx, g, policy), pu_verlinde(dual, g, policy)))
    if not report.holds:
        raise IdentityViolation(f"level-rank duality fails for ({N},{K}): {report.rows}")
    return report


FLAVORS = ("spin", "coho", "pu_spin")


@dataclass
class SplitReport:
    flavor: str
    N: int
    K: int
    g: int
    modulus: int
    table: list[tuple[SpinStructure, int]]
    expected: int

    @property
    def total(self) -> int:
        return sum(v for _, v in self.table)

    @property
    def holds(self) -> bool:
        return self.total == self.expected


def refined_value(
    ctx: AlcoveContext,
    sigma: SpinStructure,
    flavor: str,
    j: int | None = None,
    policy: PrecisionPolicy | None = None,
) -> CertifiedInt:
    if flavor == "spin":
        return spin_verlinde(ctx, sigma, j, policy)
    if flavor == "coho":
        return coho_verlinde(ctx, 1 if j is None else j, sigma, policy)
    if flavor == "pu_spin":
        return pu_spin_verlinde(ctx, sigma, policy=policy)
    raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def refinement_modulus(ctx: AlcoveContext, flavor: str, j: int | None = None) -> int:
    if flavor == "pu_spin":
        return ctx.d
    return ctx.N // (1 if j is None else j)


def split_check(
    ctx: AlcoveContext,
    g: int,
    flavor: str,
    j: int | None = None,
    policy: PrecisionPolicy | None = None,
    structures: Iterable[SpinStructure] | None = None,
) -> SplitReport:
    """Refined values over every structure, compared with the unrefined rank."""
    _check_genus(g, 1)
    modulus = refinement_modulus(ctx, flavor, j)
    if structures is None:
        structures = enumerate_structures(g, modulus)
    table = [(s, refined_value(ctx, s, flavor, j, policy)) for s in structures]
    expected = pu_verlinde(ctx, g, policy) if flavor == "pu_spin" else verlinde(ctx, g, policy)
    report = SplitReport(flavor, ctx.N, ctx.K, g, modulus, table, expected)
    if not report.holds:
        raise IdentityViolation(f"{flavor} splitting fails for ({ctx.N},{ctx.K},g={g}): {report.total} != {expected}")
    return report

