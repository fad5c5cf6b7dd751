"""Limit spectral measure at a model point: half-power kernels supported at
the lattice 2k·λ with weights 2^{Z(k)}, normalized so its Laplace transform
is the tanh heat-trace density.

This module is deliberately floating-point (quadrature); everything else in
the library is exact.  The Γ(n_y + 1/2) factor in the normalization is part
of the definition used here: without it the n = 1 case misses the Laplace
target by √π.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from scipy import integrate as _sciint
from scipy import special as _scispec

from .errors import UsageError


@dataclass(frozen=True)
class ModelPoint:
    n: int                      # odd ambient dimension
    lambdas: tuple[float, ...]  # positive rotation eigenvalues, length m_y

    def __post_init__(self) -> None:
        if self.n % 2 != 1 or self.n < 1:
            raise UsageError("ambient dimension n must be odd and positive")
        if any(l <= 0 for l in self.lambdas):
            raise UsageError("lambdas must be positive")
        if 2 * len(self.lambdas) >= self.n:
            raise UsageError("too many lambdas: need 2·m_y + 1 <= n")

    @property
    def m_y(self) -> int:
        return len(self.lambdas)

    @property
    def n_y(self) -> int:
        return (self.n - 2 * self.m_y - 1) // 2

    def weight(self) -> float:
        prod = math.prod(self.lambdas) if self.lambdas else 1.0
        return prod / ((4 * math.pi) ** (self.n / 2) * _scispec.gamma(self.n_y + 0.5))


def _lattice(pt: ModelPoint, s_max: float) -> Iterator[tuple[float, int]]:
    """All (offset 2k·λ, Z(k)) with offset <= s_max, Z = #nonzero components."""

    def rec(i: int, offset: float, z: int) -> Iterator[tuple[float, int]]:
        if i == pt.m_y:
            yield offset, z
            return
        k = 0
        while True:
            new = offset + 2 * k * pt.lambdas[i]
            if new > s_max:
                break
            yield from rec(i + 1, new, z + (k > 0))
            k += 1

    yield from rec(0, 0.0, 0)


def _kernel_integral(
    phi: Callable[[float], float], offset: float, n_y: int, s_max: float
) -> float:
    """∫_offset^s_max φ(s)(s - offset)^{n_y - 1/2} ds via u = sqrt(s - offset),
    which removes the endpoint singularity at n_y = 0."""
    top = s_max - offset
    if top <= 0:
        return 0.0
    u_max = math.sqrt(top)
    value, err = _sciint.quad(
        lambda u: 2.0 * phi(offset + u * u) * u ** (2 * n_y),
        0.0,
        u_max,
        limit=200,
        epsabs=1e-12,
        epsrel=1e-11,
    )
    if not math.isfinite(value) or err > 1e-10 + 1e-8 * abs(value):
        raise ArithmeticError(
            f"quadrature did not converge: value={value}, abs err={err}"
        )
    return value


def limit_measure_apply(
    pt: ModelPoint, phi: Callable[[float], float], s_max: float
) -> float:
    """Apply the limit measure to a test function, truncating the lattice sum
    and the integrals at s_max."""
    if s_max <= 0:
        raise UsageError("s_max must be positive")
    total = 0.0
    for offset, z in _lattice(pt, s_max):
        total += 2**z * _kernel_integral(phi, offset, pt.n_y, s_max)
    return pt.weight() * total


@dataclass(frozen=True)
class LaplaceCheck:
    measured: float
    target: float
    rel_error: float
    tail_bound: float


def laplace_check(pt: ModelPoint, t: float, s_max: float) -> LaplaceCheck:
    """Laplace transform of the measure against the tanh heat-trace density
    (4πt)^{-n/2} ∏ tλ/tanh(tλ), with an analytic truncation-tail bound."""
    if t <= 0:
        raise UsageError("t must be positive")
    measured = limit_measure_apply(pt, lambda s: math.exp(-t * s), s_max)
    target = (4 * math.pi * t) ** (-pt.n / 2)
    for lam in pt.lambdas:
        target *= t * lam / math.tanh(t * lam)
    # Exact remainder for φ = e^{-ts}: each lattice point contributes
    # e^{-t·offset} Γ(n_y+1/2) t^{-(n_y+1/2)}; the truncated part is the
    # complement of the included regularized lower incomplete gamma.
    gamma_full = _scispec.gamma(pt.n_y + 0.5) * t ** -(pt.n_y + 0.5)
    full_sum = math.prod(1.0 / math.tanh(t * lam) for lam in pt.lambdas)
    included = 0.0
    for offset, z in _lattice(pt, s_max):
        q = _scispec.gammainc(pt.n_y + 0.5, t * (s_max - offset))
        included += 2**z * math.exp(-t * offset) * q
    tail = pt.weight() * gamma_full * (full_sum - included)
    rel = abs(measured - target) / abs(target)
    return LaplaceCheck(measured, target, rel, tail)


@dataclass(frozen=True)
class NearZeroBound:
    value: float
    ratio: float


def near_zero_bound(pt: ModelPoint, eps_support: float) -> NearZeroBound:
    """Mass of a canonical bump (1 on [0, ε/2], linear to 0 at ε) against the
    measure; the ratio value/√ε stays bounded as ε shrinks."""
    if not 0 < eps_support < 1:
        raise UsageError("eps_support must lie in (0, 1)")

    def bump(s: float) -> float:
        if s <= eps_support / 2:
            return 1.0
        if s >= eps_support:
            return 0.0
        return 2.0 * (1.0 - s / eps_support)

    value = limit_measure_apply(pt, bump, eps_support)
    return NearZeroBound(value, value / math.sqrt(eps_support))
