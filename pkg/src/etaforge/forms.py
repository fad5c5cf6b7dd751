"""Endomorphism-valued alternating forms on a model Kähler tangent space.

Dense exact engine for small dimensions: forms are stored on sorted basis
tuples, wedge products expand over shuffles with matrix composition, and all
identities are checked by exhaustive basis-tuple evaluation.  Scalars are
rationals except in the complexified traces, where Gaussian rationals appear.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import UsageError


@dataclass(frozen=True)
class GaussRat:
    """Gaussian rational re + im·i with exact components."""

    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def coerce(x: "GaussLike") -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return GaussRat(Fraction(x))

    def __add__(self, other: "GaussLike") -> "GaussRat":
        other = GaussRat.coerce(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other: "GaussLike") -> "GaussRat":
        return self + (-GaussRat.coerce(other))

    def __rsub__(self, other: "GaussLike") -> "GaussRat":
        return GaussRat.coerce(other) + (-self)

    def __mul__(self, other: "GaussLike") -> "GaussRat":
        other = GaussRat.coerce(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "GaussRat":
        out = GaussRat(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussRat(Fraction(other))
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))


GaussLike = Union[int, Fraction, GaussRat]
I = GaussRat(Fraction(0), Fraction(1))

Matrix = tuple[tuple, ...]  # rows of ring elements; column j = image of basis j


def mat_zero(size: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(size)) for _ in range(size))


def mat_identity(size: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(size)) for i in range(size)
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, s) -> Matrix:
    return tuple(tuple(x * s for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    size = len(a)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(size)), Fraction(0))
            for j in range(size)
        )
        for i in range(size)
    )


def mat_trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def _is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def _shuffles(combined: tuple[int, ...], left_size: int):
    """Yield (sign, left, right) over all splits of a sorted tuple."""
    idx = range(len(combined))
    for left_pos in itertools.combinations(idx, left_size):
        right_pos = tuple(i for i in idx if i not in left_pos)
        sign = 1
        for a in left_pos:
            sign *= (-1) ** sum(1 for b in right_pos if b < a)
        yield sign, tuple(combined[i] for i in left_pos), tuple(
            combined[i] for i in right_pos
        )


def _sort_args(args: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sort arguments, returning permutation sign, or None on repeats."""
    if len(set(args)) != len(args):
        return None
    order = sorted(range(len(args)), key=lambda i: args[i])
    sign = 1
    seen = list(args)
    # count inversions
    for i in range(len(args)):
        for j in range(i + 1, len(args)):
            if args[i] > args[j]:
                sign = -sign
    return sign, tuple(sorted(args))


class ScalarForm:
    """Alternating form with scalar values, stored on sorted basis tuples."""

    __slots__ = ("degree", "dim", "values")

    def __init__(self, degree: int, dim: int, values: Mapping[tuple[int, ...], object]):
        self.degree = degree
        self.dim = dim
        self.values = {k: v for k, v in values.items() if v != 0}

    def __call__(self, *args: int):
        sorted_ = _sort_args(args)
        if sorted_ is None:
            return Fraction(0)
        sign, key = sorted_
        return sign * self.values.get(key, Fraction(0))

    def __add__(self, other: "ScalarForm") -> "ScalarForm":
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, Fraction(0)) + v
        return ScalarForm(self.degree, self.dim, out)

    def scale(self, s) -> "ScalarForm":
        return ScalarForm(self.degree, self.dim, {k: v * s for k, v in self.values.items()})

    def __neg__(self) -> "ScalarForm":
        return self.scale(Fraction(-1))

    def wedge(self, other: "ScalarForm") -> "ScalarForm":
        degree = self.degree + other.degree
        out: dict[tuple[int, ...], object] = {}
        if degree > self.dim:
            return ScalarForm(degree, self.dim, out)
        for combo in itertools.combinations(range(self.dim), degree):
            acc = Fraction(0)
            for sign, left, right in _shuffles(combo, self.degree):
                a = self.values.get(left)
                b = other.values.get(right)
                if a is not None and b is not None:
                    acc = acc + a * b * sign
            if acc != 0:
                out[combo] = acc
        return ScalarForm(degree, self.dim, out)

    def power(self, n: int) -> "ScalarForm":
        out = ScalarForm(0, self.dim, {(): Fraction(1)})
        for _ in range(n):
            out = out.wedge(self)
        return out

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarForm):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.dim == other.dim
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"ScalarForm(deg={self.degree}, dim={self.dim}, {self.values})"


class EndForm:
    """Alternating form with endomorphism (matrix) values."""

    __slots__ = ("degree", "dim", "size", "values")

    def __init__(
        self,
        degree: int,
        dim: int,
        size: int,
        values: Mapping[tuple[int, ...], Matrix],
    ):
        self.degree = degree
        self.dim = dim
        self.size = size
        self.values = {k: v for k, v in values.items() if not _is_zero_matrix(v)}

    def __call__(self, *args: int) -> Matrix:
        sorted_ = _sort_args(args)
        if sorted_ is None:
            return mat_zero(self.size)
        sign, key = sorted_
        value = self.values.get(key)
        if value is None:
            return mat_zero(self.size)
        return value if sign == 1 else mat_scale(value, Fraction(-1))

    def __add__(self, other: "EndForm") -> "EndForm":
        if (self.degree, self.dim, self.size) != (other.degree, other.dim, other.size):
            raise UsageError("incompatible forms")
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = mat_add(out[k], v) if k in out else v
        return EndForm(self.degree, self.dim, self.size, out)

    def scale(self, s) -> "EndForm":
        return EndForm(
            self.degree, self.dim, self.size,
            {k: mat_scale(v, s) for k, v in self.values.items()},
        )

    def left_mul(self, mat: Matrix) -> "EndForm":
        return EndForm(
            self.degree, self.dim, self.size,
            {k: mat_mul(mat, v) for k, v in self.values.items()},
        )

    def right_mul(self, mat: Matrix) -> "EndForm":
        return EndForm(
            self.degree, self.dim, self.size,
            {k: mat_mul(v, mat) for k, v in self.values.items()},
        )

    def wedge(self, other: "EndForm") -> "EndForm":
        if self.dim != other.dim or self.size != other.size:
            raise UsageError("incompatible forms")
        degree = self.degree + other.degree
        out: dict[tuple[int, ...], Matrix] = {}
        if degree > self.dim:
            return EndForm(degree, self.dim, self.size, out)
        for combo in itertools.combinations(range(self.dim), degree):
            acc = mat_zero(self.size)
            for sign, left, right in _shuffles(combo, self.degree):
                a = self.values.get(left)
                b = other.values.get(right)
                if a is not None and b is not None:
                    acc = mat_add(acc, mat_scale(mat_mul(a, b), Fraction(sign)))
            if not _is_zero_matrix(acc):
                out[combo] = acc
        return EndForm(degree, self.dim, self.size, out)

    def power(self, n: int) -> "EndForm":
        out = EndForm(0, self.dim, self.size, {(): mat_identity(self.size)})
        for _ in range(n):
            out = out.wedge(self)
        return out

    def trace(self) -> ScalarForm:
        return ScalarForm(
            self.degree, self.dim,
            {k: mat_trace(v) for k, v in self.values.items()},
        )

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EndForm):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.dim == other.dim
            and self.size == other.size
            and self.values == other.values
        )


@dataclass(frozen=True)
class KahlerModel:
    """Model tangent space: horizontal pairs (e_i, f_i) with the standard
    complex rotation, optionally one vertical direction as the last basis
    vector.  Metric is the identity; ω(X, Y) = g(JX, Y)."""

    m: int
    vertical: bool = True

    @property
    def dim(self) -> int:
        return 2 * self.m + (1 if self.vertical else 0)

    @property
    def vertical_index(self) -> int | None:
        return 2 * self.m if self.vertical else None

    def is_horizontal(self, i: int) -> bool:
        return i < 2 * self.m

    def j_matrix(self) -> Matrix:
        n = self.dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(self.m):
            rows[2 * i + 1][2 * i] = Fraction(1)   # J e_i = f_i
            rows[2 * i][2 * i + 1] = Fraction(-1)  # J f_i = -e_i
        return tuple(tuple(r) for r in rows)

    def omega(self) -> ScalarForm:
        values = {
            (2 * i, 2 * i + 1): Fraction(1) for i in range(self.m)
        }
        return ScalarForm(2, self.dim, values)

def _omega_pairing(model: KahlerModel, i: int, j: int) -> Fraction:
    """ω(b_i, b_j) = g(J b_i, b_j)."""
    return model.j_matrix()[j][i]


def build_tensors(model: KahlerModel) -> dict:
    """The Kähler tensors: ω, J, and the three connection tensors coupling
    horizontal and vertical directions."""
    if not model.vertical:
        raise UsageError("these tensors need the vertical direction")
    n = model.dim
    v = model.vertical_index
    jm = model.j_matrix()

    omega_vals: dict[tuple[int, int], Fraction] = {}
    for i, j in itertools.combinations(range(n), 2):
        w = _omega_pairing(model, i, j)
        if w != 0:
            omega_vals[(i, j)] = w
    omega = ScalarForm(2, n, omega_vals)

    # Omega(b_i, b_j) x = ω(b_i, x) J b_j - ω(b_j, x) J b_i
    big_omega_vals: dict[tuple[int, ...], Matrix] = {}
    for i, j in itertools.combinations(range(2 * model.m), 2):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for col in range(2 * model.m):
            wi = _omega_pairing(model, i, col)
            wj = _omega_pairing(model, j, col)
            for row in range(n):
                rows[row][col] = wi * jm[row][j] - wj * jm[row][i]
        if any(any(r) for r in rows):
            big_omega_vals[(i, j)] = tuple(tuple(r) for r in rows)
    big_omega = EndForm(2, n, n, big_omega_vals)

    # alpha1(b_i): e -> J b_i; alpha2(b_i): x -> g(b_i, x) e; alpha3(b_i): e -> -b_i
    a1_vals, a2_vals, a3_vals = {}, {}, {}
    for i in range(2 * model.m):
        rows1 = [[Fraction(0)] * n for _ in range(n)]
        rows2 = [[Fraction(0)] * n for _ in range(n)]
        rows3 = [[Fraction(0)] * n for _ in range(n)]
        for row in range(n):
            rows1[row][v] = jm[row][i]
        rows2[v][i] = Fraction(1)
        rows3[i][v] = Fraction(-1)
        for vals, rows in ((a1_vals, rows1), (a2_vals, rows2), (a3_vals, rows3)):
            if any(any(r) for r in rows):
                vals[(i,)] = tuple(tuple(r) for r in rows)
    alpha1 = EndForm(1, n, n, a1_vals)
    alpha2 = EndForm(1, n, n, a2_vals)
    alpha3 = EndForm(1, n, n, a3_vals)

    return {
        "omega": omega,
        "J": jm,
        "Omega": big_omega,
        "alpha1": alpha1,
        "alpha2": alpha2,
        "alpha3": alpha3,
    }


def constant_curvature_block(model: KahlerModel, kappa: Fraction) -> EndForm:
    """Curvature of constant holomorphic sectional curvature κ on the
    horizontal space; satisfies the first Bianchi identity and commutes
    with J (both verified in tests, not assumed)."""
    n = model.dim
    jm = model.j_matrix()
    kappa = Fraction(kappa)
    values: dict[tuple[int, ...], Matrix] = {}

    def g(i: int, j: int) -> Fraction:
        return Fraction(1 if i == j else 0)

    for i, j in itertools.combinations(range(2 * model.m), 2):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for z in range(2 * model.m):
            # (κ/4)[g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY - 2 g(JX,Y)JZ]
            for row in range(n):
                val = Fraction(0)
                val += g(j, z) * g(row, i) - g(i, z) * g(row, j)
                val += jm[z][j] * jm[row][i] - jm[z][i] * jm[row][j]
                val -= 2 * jm[j][i] * jm[row][z]
                rows[row][z] = kappa / 4 * val
        if any(any(r) for r in rows):
            values[(i, j)] = tuple(tuple(r) for r in rows)
    return EndForm(2, n, n, values)


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def identity_suite(model: KahlerModel, kappa: Fraction = Fraction(1)) -> IdentityReport:
    """The tensor identities: nilpotency of Ω against itself and the
    curvature, the curvature annihilating α₁, the trace powers of ΩJ, and
    the α₁∧α₂ relation."""
    t = build_tensors(model)
    big_omega, jm, omega = t["Omega"], t["J"], t["omega"]
    curv = constant_curvature_block(model, kappa)
    checks = [
        ("omega_wedge_omega", big_omega.wedge(big_omega).is_zero()),
        ("omega_wedge_R", big_omega.wedge(curv).is_zero()),
        ("R_wedge_omega", curv.wedge(big_omega).is_zero()),
        ("R_wedge_alpha1", curv.wedge(t["alpha1"]).is_zero()),
        (
            "alpha1_wedge_alpha2",
            t["alpha1"].wedge(t["alpha2"]) == big_omega.right_mul(jm).scale(Fraction(-1)),
        ),
    ]
    omega_j = big_omega.right_mul(jm)
    for k in range(1, model.m + 1):
        lhs = omega_j.power(k).trace()
        rhs = omega.power(k).scale(Fraction(-(2**k)))
        checks.append((f"trace_omega_j_power_{k}", lhs == rhs))
    return IdentityReport(tuple(checks))


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    import math

    return math.comb(n, k)


def parity_count(N: int, k: int, variant: int) -> int:
    """Brute-force count of exponent tuples a ∈ ℕ₀^{k+1} under the variant's
    total-degree and parity constraints."""
    if N % 2 != 0 or N < 2 or k < 1:
        raise UsageError("N must be even >= 2 and k >= 1")
    if variant == 1:
        total = N - k
        cond = lambda a: (a[0] + a[-1]) % 2 == 1 and all(x % 2 == 1 for x in a[1:-1])
    elif variant == 2:
        total = N - 1 - k
        cond = lambda a: (a[0] + a[-1]) % 2 == 0 and all(x % 2 == 1 for x in a[1:-1])
    elif variant == 3:
        total = N - 2 - k
        cond = lambda a: a[0] % 2 == 0 and all(x % 2 == 1 for x in a[1:])
    else:
        raise UsageError("variant must be 1, 2 or 3")
    if total < 0:
        return 0
    count = 0
    for head in itertools.product(range(total + 1), repeat=k):
        rest = total - sum(head)
        if rest < 0:
            continue
        a = head + (rest,)
        if cond(a):
            count += 1
    return count


def parity_expected(N: int, k: int, variant: int) -> int:
    half = N // 2
    if variant == 1:
        return 2 * _binom(half, k)
    if variant == 2:
        return _binom(half, k) + _binom(half - 1, k)
    if variant == 3:
        return _binom(half - 1, k)
    raise UsageError("variant must be 1, 2 or 3")


def _complexify_endform(model: KahlerModel, form: EndForm) -> EndForm:
    """Restrict the complexified, J-commuting endomorphism values to the
    holomorphic eigenspace of J: in the basis v_a = e_a - i f_a the matrix
    entry is A + iB with A the e->e and B the e->f block."""
    m = model.m
    values: dict[tuple[int, ...], Matrix] = {}
    for key, mat in form.values.items():
        rows = [
            [
                GaussRat(mat[2 * a][2 * b], mat[2 * a + 1][2 * b])
                for b in range(m)
            ]
            for a in range(m)
        ]
        values[key] = tuple(tuple(r) for r in rows)
    return EndForm(form.degree, form.dim, m, values)


def _to_gauss_scalar(form: ScalarForm) -> ScalarForm:
    return ScalarForm(
        form.degree, form.dim, {k: GaussRat.coerce(v) for k, v in form.values.items()}
    )


@dataclass(frozen=True)
class TraceExpansionReport:
    checks: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def trace_expansion_check(
    m: int, N: int, delta: Fraction, kappa: Fraction = Fraction(1)
) -> TraceExpansionReport:
    """The three trace identities for A = R + 2δ(ω⊗J) + δΩ against their
    complexified right-hand sides, exactly over Gaussian rationals.

    Identity 2's constant term is 2ε_N·δ·ω (the δ belongs there: the term
    descends from (2iδω)^{N-1} at N = 2).
    """
    if N % 2 != 0 or N < 2:
        raise UsageError("N must be even and >= 2")
    delta = Fraction(delta)
    model = KahlerModel(m, vertical=False)
    n = model.dim
    jm = model.j_matrix()
    omega = model.omega()
    curv = constant_curvature_block(model, kappa)

    # Omega on the horizontal-only model
    big_omega_vals: dict[tuple[int, ...], Matrix] = {}
    for i, j in itertools.combinations(range(n), 2):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for col in range(n):
            wi = _omega_pairing(model, i, col)
            wj = _omega_pairing(model, j, col)
            for row in range(n):
                rows[row][col] = wi * jm[row][j] - wj * jm[row][i]
        if any(any(r) for r in rows):
            big_omega_vals[(i, j)] = tuple(tuple(r) for r in rows)
    big_omega = EndForm(2, n, n, big_omega_vals)

    omega_j = EndForm(
        2, n, n, {k: mat_scale(jm, v) for k, v in omega.values.items()}
    )
    total = curv + omega_j.scale(2 * delta) + big_omega.scale(delta)

    # complexified side: S = R^{1,0} + 2iδ·ω·Id
    r10 = _complexify_endform(model, curv)
    two_i_delta = I * (2 * delta)
    id_m = mat_identity(m)
    omega_id = EndForm(
        2, n, m,
        {k: mat_scale(id_m, GaussRat.coerce(v) * two_i_delta) for k, v in omega.values.items()},
    )
    s_form = r10 + omega_id

    eps_n = 1 if N == 2 else 0
    checks = []

    lhs1 = _to_gauss_scalar(total.power(N).trace())
    rhs1 = s_form.power(N).trace().scale(GaussRat.coerce(2))
    rhs1 = rhs1 + _to_gauss_scalar(omega.power(N)).scale(two_i_delta**N * 2)
    checks.append(("full_trace_power", lhs1 == rhs1))

    lhs2 = _to_gauss_scalar(total.power(N - 1).left_mul(jm).trace())
    rhs2 = s_form.power(N - 1).trace().scale(I * 2)
    rhs2 = rhs2 + _to_gauss_scalar(omega.power(N - 1)).scale(two_i_delta ** (N - 1) * I * 2)
    rhs2 = rhs2 + _to_gauss_scalar(omega).scale(GaussRat.coerce(2 * eps_n * delta))
    checks.append(("j_trace_power", lhs2 == rhs2))

    lhs3 = big_omega.right_mul(jm).wedge(total.power(N - 2)).trace()
    if eps_n:
        ok3 = lhs3 == omega.scale(Fraction(-2))
    else:
        ok3 = lhs3.is_zero()
    checks.append(("omega_j_trace_power", ok3))

    return TraceExpansionReport(tuple(checks))
