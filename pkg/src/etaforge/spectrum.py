"""Exact Dirac spectrum enumeration on the circle bundle.

Type-1 eigenvalues are rational linear forms in (k, ε, r) weighted by Hodge
numbers.  Type-2 eigenvalues come in pairs from a 2x2 block driven by a
positive Dolbeault eigenvalue and are quadratic surds a + b·sqrt(d); their
sign and comparison queries are exact.

Convention trap spelled out once: providers store μ², which is twice the
Dolbeault Laplacian eigenvalue (the Laplacian eigenvalue is μ²/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import Geometry
from .errors import InvalidDolbeaultData, UsageError
from .hodge import HodgeProvider


def _sqrt_exact(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    n = math.isqrt(x.numerator)
    d = math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _surd_sign(a: Fraction, b: Fraction, d: Fraction) -> int:
    """Exact sign of a + b·sqrt(d), d >= 0."""
    if d == 0 or b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    sa, sb = _sign(a), _sign(b)
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2 d
    cmp = _sign(a * a - b * b * d)
    if cmp == 0:
        return 0
    return sa if cmp > 0 else sb


@dataclass(frozen=True)
class QuadSurd:
    """Exact value a + b·sqrt(d) with rational a, b and d >= 0.

    Perfect-square radicands are normalized away so rational values always
    have b = 0, d = 0.
    """

    a: Fraction
    b: Fraction
    d: Fraction

    @staticmethod
    def make(a: Fraction | int, b: Fraction | int = 0, d: Fraction | int = 0) -> "QuadSurd":
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        if d < 0:
            raise UsageError("negative radicand")
        if b == 0 or d == 0:
            return QuadSurd(a, Fraction(0), Fraction(0))
        root = _sqrt_exact(d)
        if root is not None:
            return QuadSurd(a + b * root, Fraction(0), Fraction(0))
        return QuadSurd(a, b, d)

    @staticmethod
    def rational(x: Fraction | int) -> "QuadSurd":
        return QuadSurd.make(x)

    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        return _surd_sign(self.a, self.b, self.d)

    def __neg__(self) -> "QuadSurd":
        return QuadSurd(-self.a, -self.b, self.d)

    def __abs__(self) -> "QuadSurd":
        return self if self.sign() >= 0 else -self

    def _cmp(self, other: "QuadSurd") -> int:
        """Exact sign of self - other (radicands may differ)."""
        A = self.a - other.a
        B, p = self.b, self.d
        C, q = other.b, other.d
        if p == q or C == 0:
            return _surd_sign(A, B - C if p == q else B, p)
        if B == 0:
            return _surd_sign(A, -C, q)
        # sign of A + U with U = B·sqrt(p) - C·sqrt(q)
        if _sign(B) == _sign(C):
            su = _sign(B) * _sign(B * B * p - C * C * q)
        else:
            su = _sign(B)
        if A == 0:
            return su
        sa = _sign(A)
        if su == 0 or su == sa:
            return sa
        # A and U have opposite signs: compare |A| with |U| via squares;
        # A^2 - U^2 = (A^2 - B^2 p - C^2 q) + 2BC·sqrt(pq) is a single surd.
        diff = _surd_sign(A * A - B * B * p - C * C * q, 2 * B * C, p * q)
        if diff == 0:
            return 0
        return sa if diff > 0 else su

    def __lt__(self, other: "QuadSurd") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "QuadSurd") -> bool:
        return self._cmp(other) <= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))


@dataclass(frozen=True)
class EigRecord:
    value: QuadSurd
    multiplicity: int
    tag: str  # "type1" | "type2plus" | "type2minus"
    k: int
    p: int
    mu_sq: Fraction | None = None

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise UsageError("multiplicity must be >= 1")


@dataclass(frozen=True)
class DolbeaultProvider:
    """Declared Dolbeault data: entries (k, p, μ², e_μ^{p,k}) and a positive
    lower bound M on the stored μ² values."""

    entries: tuple[tuple[int, int, Fraction, int], ...]
    lower_bound: Fraction

    def __post_init__(self) -> None:
        if self.lower_bound <= 0:
            raise UsageError("lower bound M must be positive")
        for k, p, mu_sq, e in self.entries:
            if mu_sq <= 0:
                raise UsageError("Dolbeault eigenvalue data must be positive")
            if e < 0:
                raise UsageError("multiplicities must be nonnegative")
            if mu_sq < self.lower_bound:
                raise UsageError("declared lower bound exceeds a stored eigenvalue")

    def e(self, k: int, p: int, mu_sq: Fraction) -> int:
        for kk, pp, mm, e in self.entries:
            if (kk, pp, mm) == (k, p, mu_sq):
                return e
        return 0


def type1_eigenvalues(
    g: Geometry,
    hp: HodgeProvider,
    r: Fraction,
    eps: Fraction,
    k_range: tuple[int, int],
) -> list[EigRecord]:
    """λ = (-1)^p (k + ε(p - m/2) - r) with multiplicity h^{p,k}."""
    if eps <= 0:
        raise UsageError("eps must be positive")
    records = []
    half_m = Fraction(g.m, 2)
    for k in range(k_range[0], k_range[1] + 1):
        for p in range(g.m + 1):
            mult = hp.h(p, k)
            if mult == 0:
                continue
            lam = (-1) ** p * (k + eps * (p - half_m) - r)
            records.append(
                EigRecord(QuadSurd.rational(lam), mult, "type1", k, p)
            )
    return records


def type2_eigenvalues(
    k: int, p: int, mu_sq: Fraction, r: Fraction, eps: Fraction, m: int
) -> tuple[QuadSurd, QuadSurd]:
    """Eigenvalue pair of the 2x2 block [[λ_{k,p}, μ√ε], [μ√ε, λ_{k,p+1}]].

    The discriminant is (2k + ε(2p - m + 1) - 2r)² + 4μ²ε, which is what the
    block's trace/determinant force (the "+1" multiplies ε).
    """
    if mu_sq <= 0 or eps <= 0:
        raise UsageError("mu_sq and eps must be positive")
    trace_half = Fraction((-1) ** (p + 1)) * eps / 2
    delta = (2 * k + eps * (2 * p - m + 1) - 2 * r) ** 2 + 4 * mu_sq * eps
    plus = QuadSurd.make(trace_half, Fraction(1, 2), delta)
    minus = QuadSurd.make(trace_half, Fraction(-1, 2), delta)
    return plus, minus


def type2_records(
    provider: DolbeaultProvider, r: Fraction, eps: Fraction, m: int
) -> list[EigRecord]:
    records = []
    for k, p, mu_sq, _ in provider.entries:
        mult = alternating_multiplicity(provider, k, p, mu_sq)
        if mult == 0:
            continue
        plus, minus = type2_eigenvalues(k, p, mu_sq, r, eps, m)
        records.append(EigRecord(plus, mult, "type2plus", k, p, mu_sq))
        records.append(EigRecord(minus, mult, "type2minus", k, p, mu_sq))
    return records


def alternating_multiplicity(
    provider: DolbeaultProvider, k: int, p: int, mu_sq: Fraction
) -> int:
    """d^{p} = e^{p} - e^{p-1} + ... ± e^{0}; negative values mean the
    provider is not a legal Dolbeault spectrum."""
    total = 0
    for q in range(p + 1):
        total += (-1) ** (p - q) * provider.e(k, q, mu_sq)
    if total < 0:
        raise InvalidDolbeaultData(
            f"alternating multiplicity {total} < 0 at (k={k}, p={p}, mu_sq={mu_sq})"
        )
    return total


def kernel_dimension(
    g: Geometry, hp: HodgeProvider, r: Fraction, eps: Fraction
) -> int:
    """Total multiplicity of zero type-1 eigenvalues (type-2 values cannot
    vanish in the ε/8 < M validity regime)."""
    if eps <= 0:
        raise UsageError("eps must be positive")
    half_m = Fraction(g.m, 2)
    lo = math.floor(r - eps * half_m) - 1
    hi = math.ceil(r + eps * half_m) + 1
    total = 0
    for k in range(lo, hi + 1):
        for p in range(g.m + 1):
            if k + eps * (p - half_m) == r:
                total += hp.h(p, k)
    return total


def validate_epsilon(eps: Fraction, provider: DolbeaultProvider) -> bool:
    """Type-2 families keep their sign (and so never cross zero) when
    ε/8 < M."""
    return eps / 8 < provider.lower_bound


def finite_eta_partial(records: Sequence[EigRecord], s: float, cutoff: int) -> float:
    """Diagnostic partial sum Σ sign(λ)|λ|^{-s} over the cutoff records of
    largest |λ|; zero eigenvalues are skipped.  No convergence claim."""
    if s <= 0:
        raise UsageError("s must be positive")
    nonzero = [rec for rec in records if rec.value.sign() != 0]
    nonzero.sort(key=lambda rec: abs(float(rec.value)), reverse=True)
    total = 0.0
    for rec in nonzero[:cutoff]:
        total += rec.value.sign() * abs(float(rec.value)) ** (-s) * rec.multiplicity
    return total
