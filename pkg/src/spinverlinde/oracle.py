"""Independent cross-checks built from the S-matrix and integer fusion data.

The S-matrix is assembled from Weyl alternants (determinants of roots of
unity), not from the sine products used in :mod:`spinverlinde.core`.  Fusion
multiplicities are recovered by Verlinde diagonalisation and rounded with
certificates.  From then on the genus-g dimension is pure integer algebra:
the multiplicity of the unit in the g-th power of the handle element
``sum_lambda lambda (x) lambda*``.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
from flint import acb, acb_mat, arb, fmpq

from . import __version__
from .alcove import AlcoveContext, Partition
from .arith import (
    CertifiedComplex,
    CertifiedReal,
    EscalationRequested,
    NonIntegral,
    PrecisionExhausted,
    PrecisionPolicy,
    DEFAULT_POLICY,
    certified_round,
    working_precision,
)

MAX_ALCOVE = 2000


def _root(p: int, q: int) -> acb:
    """``exp(i pi p / q)``."""
    return acb(arb(fmpq(p, q))).exp_pi_i()


def _shifted(lam, N: int) -> tuple[int, ...]:
    return tuple(lam[i] + N - 1 - i for i in range(N))


@lru_cache(maxsize=None)
def _permutations(N: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(N))), dtype=np.int64)
    # sign via inversion count
    inv = sum((perms[:, i, None] > perms[:, None, j]).sum(axis=1) for i in range(N) for j in range(i + 1, N))
    return perms, np.where(np.asarray(inv) % 2 == 0, 1, -1).astype(np.int64)


def _alternant_counts(x, y, scale: int, shift: int, q: int) -> np.ndarray:
    """Integer coefficients c_e of ``sum_e c_e exp(i pi e / q)`` equal to
    ``exp(i pi shift / q) * det[exp(i pi scale x_i y_j / q)]`` (Leibniz expansion).

    Keeping the determinant as an exact cyclotomic integer avoids the blow-up
    of ball Gaussian elimination on entries that vanish exactly.
    """
    perms, signs = _permutations(len(x))
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    exps = (shift + scale * (x[None, :] * y[perms]).sum(axis=1)) % (2 * q)
    counts = np.zeros(2 * q, dtype=np.int64)
    np.add.at(counts, exps, signs)
    return counts


def _evaluate_counts(counts: np.ndarray, q: int) -> acb:
    out = acb(0)
    for e in np.nonzero(counts)[0]:
        out += int(counts[e]) * _root(int(e), q)
    return out


def weyl_alternant(l, ctx: AlcoveContext, prec: int = 128) -> CertifiedComplex:
    """``a_l = det(s**(2 (i-1) l_j))`` with ``s = exp(i pi / (N + K))``."""
    N, n = ctx.N, ctx.level_shift
    counts = _alternant_counts(range(N), l, 2, 0, n)
    with working_precision(prec):
        return CertifiedComplex.from_acb(_evaluate_counts(counts, n), prec)


def qdim_squared(lam, ctx: AlcoveContext, prec: int = 128) -> CertifiedReal:
    """``<lam>**2 = |a_{rho+lam}|**2 / |a_rho|**2`` from determinants."""
    lam = ctx.weight(lam)
    top = weyl_alternant(_shifted(lam, ctx.N), ctx, prec).abs_squared()
    bottom = weyl_alternant(_shifted((0,) * ctx.N, ctx.N), ctx, prec).abs_squared()
    return top / bottom


def _s_unnormalized(lam, mu, ctx: AlcoveContext) -> acb:
    # exp(2 pi i |x||y| / (N n)) * det[exp(-2 pi i x_i y_j / n)], x, y shifted by rho
    N, n = ctx.N, ctx.level_shift
    x, y = _shifted(lam, N), _shifted(mu, N)
    counts = _alternant_counts(x, y, -2 * N, 2 * sum(x) * sum(y), N * n)
    return _evaluate_counts(counts, N * n)


def _s_matrix(ctx: AlcoveContext) -> acb_mat:
    w = ctx.weights
    size = len(w)
    s = acb_mat(size, size)
    for a in range(size):
        for b in range(a, size):
            z = _s_unnormalized(w[a], w[b], ctx)
            s[a, b] = z
            s[b, a] = z
    return s


def _norm_constant(ctx: AlcoveContext) -> int:
    # sum over kappa of |S~_{0 kappa}|^2; the identity is checked numerically
    return ctx.N * ctx.level_shift ** (ctx.N - 1)


def s_entry(lam, mu, ctx: AlcoveContext, prec: int = 128) -> CertifiedComplex:
    """Entry of the unitary, symmetric S-matrix, phased so that ``S_{0,0} > 0``.

    ``S_{0,0} = <0>`` normalised by ``sqrt(N (N+K)**(N-1))``; for N >= 3 the
    other entries are genuinely complex.
    """
    lam, mu = ctx.weight(lam), ctx.weight(mu)
    zero = ctx.weights[0]
    with working_precision(prec):
        s00 = _s_unnormalized(zero, zero, ctx)
        phase = s00.conjugate() / (s00 * s00.conjugate()).real.sqrt()
        z = _s_unnormalized(lam, mu, ctx) * phase / arb(_norm_constant(ctx)).sqrt()
        return CertifiedComplex.from_acb(z, prec)


@dataclass(frozen=True)
class FusionTensor:
    N: int
    K: int
    weights: tuple[Partition, ...]
    coeffs: np.ndarray  # coeffs[l, m, n] = N_{l m}^n
    precision: int = 0

    @cached_property
    def _lookup(self) -> dict[Partition, int]:
        return {w: i for i, w in enumerate(self.weights)}

    def index(self, lam) -> int:
        """Position of ``lam`` (trailing zeros optional) in alcove order."""
        try:
            return self._lookup[Partition(lam).padded(self.N)]
        except KeyError:
            raise ValueError(f"{tuple(lam)} is not a weight of level {self.K}") from None

    def __call__(self, lam, mu, nu) -> int:
        return int(self.coeffs[self.index(lam), self.index(mu), self.index(nu)])

    def matrix(self, lam) -> np.ndarray:
        """``M[mu, nu] = N_{lam mu}^nu``: the action of ``lam`` on the fusion ring."""
        return self.coeffs[self.index(lam)]

    def dual_index(self, i: int) -> int:
        (hits,) = np.nonzero(self.coeffs[i, :, 0])
        if len(hits) != 1 or self.coeffs[i, hits[0], 0] != 1:
            raise NonIntegral(f"weight {self.weights[i]} has no unique dual")
        return int(hits[0])

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "weights": [list(w) for w in self.weights],
            "coeffs": self.coeffs.tolist(),
            "precision": self.precision,
        }

    @classmethod
    def from_json(cls, data: dict) -> FusionTensor:
        return cls(
            data["N"],
            data["K"],
            tuple(Partition(w) for w in data["weights"]),
            np.array(data["coeffs"], dtype=np.int64),
            data.get("precision", 0),
        )


def _fusion_at(ctx: AlcoveContext, bits: int, policy: PrecisionPolicy) -> np.ndarray:
    size = ctx.size
    with working_precision(bits):
        s = _s_matrix(ctx)
        c = _norm_constant(ctx)
        total = arb(0)
        for k in range(size):
            total += (s[0, k] * s[0, k].conjugate()).real
        if not total.overlaps(arb(c)):
            raise NonIntegral(f"sum |S_0k|^2 = {total} does not enclose {c}")
        s_bar = s.conjugate()
        out = np.zeros((size, size, size), dtype=np.int64)
        for lam in range(size):
            a = acb_mat(size, size)
            for k in range(size):
                ratio = s[lam, k] / s[0, k] / c
                for mu in range(size):
                    a[mu, k] = s[mu, k] * ratio
            prod = a * s_bar
            for mu in range(size):
                for nu in range(size):
                    z = prod[mu, nu]
                    if not z.imag.contains(0):
                        raise NonIntegral(f"N_{lam},{mu}^{nu} has non-zero imaginary part {z.imag}")
                    out[lam, mu, nu] = certified_round(CertifiedReal(z.real, bits), policy)
    return out


def fusion_coeffs(
    ctx: AlcoveContext,
    policy: PrecisionPolicy | None = None,
    cache_path: str | os.PathLike | None = None,
) -> FusionTensor:
    """All fusion multiplicities of SU(N) at level K, certified integral."""
    if ctx.size > MAX_ALCOVE:
        raise ValueError(f"alcove of size {ctx.size} exceeds the fusion guard {MAX_ALCOVE}")
    key = f"{ctx.N},{ctx.K}"
    if cache_path is not None:
        cached = _read_cache(cache_path).get(key)
        if cached is not None:
            return FusionTensor.from_json(cached)
    policy = policy or DEFAULT_POLICY
    for bits in policy.schedule():
        try:
            coeffs = _fusion_at(ctx, bits, policy)
        except EscalationRequested:
            continue
        if (coeffs < 0).any():
            raise NonIntegral("negative fusion multiplicity")
        tensor = FusionTensor(ctx.N, ctx.K, ctx.weights, coeffs, bits)
        if cache_path is not None:
            _write_cache(cache_path, key, tensor)
        return tensor
    raise PrecisionExhausted(f"fusion tensor of ({ctx.N},{ctx.K}) not isolated up to {policy.max_bits} bits")


def _read_cache(path) -> dict:
    path = Path(path)
    if not path.exists():
        return {}
    data = json.loads(path.read_text())
    if data.get("version") != __version__:
        return {}
    return data.get("tensors", {})


def _write_cache(path, key: str, tensor: FusionTensor) -> None:
    tensors = _read_cache(path)
    tensors[key] = tensor.to_json()
    Path(path).write_text(json.dumps({"version": __version__, "tensors": tensors}, sort_keys=True))


def handle_matrix(tensor: FusionTensor) -> np.ndarray:
    """``H[nu, mu] = sum_lam sum_lam' N_{nu lam}^lam' N_{lam' lam*}^mu`` as Python ints."""
    size = len(tensor.weights)
    coeffs = tensor.coeffs.astype(object)
    h = np.zeros((size, size), dtype=object)
    for lam in range(size):
        h = h + coeffs[lam].dot(coeffs[tensor.dual_index(lam)])
    return h


def handle_trace_dimension(ctx: AlcoveContext, g: int, tensor: FusionTensor | None = None) -> int:
    """Multiplicity of the unit object in the g-th power of the handle element."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    tensor = tensor or fusion_coeffs(ctx)
    h = handle_matrix(tensor)
    row = np.zeros(len(tensor.weights), dtype=object)
    row[0] = 1
    for _ in range(g):
        row = row.dot(h)
    return int(row[0])
