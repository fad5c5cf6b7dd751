"""Limit spectral measure: lattice structure, Laplace identity, near-zero mass."""

import math

import pytest

from etaforge.errors import UsageError
from etaforge.measure import (
    ModelPoint,
    _lattice,
    laplace_check,
    limit_measure_apply,
    near_zero_bound,
)

CONFIGS = (
    ModelPoint(1, ()),
    ModelPoint(3, (1.0,)),
    ModelPoint(5, (1.0, 2.0)),
)


def test_model_point_validation():
    with pytest.raises(UsageError):
        ModelPoint(2, ())
    with pytest.raises(UsageError):
        ModelPoint(3, (-1.0,))
    with pytest.raises(UsageError):
        ModelPoint(3, (1.0, 2.0))  # 2·2 + 1 > 3
    pt = ModelPoint(5, (1.0, 2.0))
    assert pt.m_y == 2 and pt.n_y == 0


def test_weight_normalization():
    pt = ModelPoint(3, (2.0,))
    expected = 2.0 / ((4 * math.pi) ** 1.5 * math.gamma(0.5))
    assert abs(pt.weight() - expected) < 1e-15


def test_lattice_enumeration_matches_brute_force():
    pt = ModelPoint(5, (1.0, 2.0))
    got = sorted(_lattice(pt, 10.0))
    expected = sorted(
        (2 * a * 1.0 + 2 * b * 2.0, (a > 0) + (b > 0))
        for a in range(6)
        for b in range(3)
        if 2 * a + 4 * b <= 10.0
    )
    assert got == expected


def test_flat_point_laplace_exact():
    # no rotation: measure is weight·s^{-1/2} ds, Laplace transform
    # weight·Γ(1/2)/√t = (4πt)^{-n/2}
    for n in (1, 3, 5):
        pt = ModelPoint(n, ())
        for t in (0.5, 1.0, 2.0):
            chk = laplace_check(pt, t, 200.0 / t)
            assert chk.rel_error < 1e-9, (n, t, chk.rel_error)


def test_laplace_identity_three_configs():
    for pt in CONFIGS:
        for t in (0.5, 1.0, 2.0):
            chk = laplace_check(pt, t, 80.0 / t)
            assert chk.rel_error < 1e-6, (pt, t, chk.rel_error)
            # the truncation tail bound really bounds the discrepancy
            assert abs(chk.measured - chk.target) <= abs(chk.tail_bound) + 1e-9


def test_tail_bound_controls_coarse_truncation():
    pt = ModelPoint(3, (1.0,))
    chk = laplace_check(pt, 1.0, 6.0)
    assert abs(chk.measured - chk.target) <= abs(chk.tail_bound) + 1e-12
    assert chk.tail_bound > 1e-6  # the truncation genuinely matters here


def test_near_zero_ratio_bounded():
    for pt in CONFIGS:
        ratios = [
            near_zero_bound(pt, eps).ratio for eps in (0.25, 0.0625, 0.015625)
        ]
        assert all(r > 0 for r in ratios)
        assert max(ratios) <= 1.0
        assert max(ratios) <= min(ratios) * (1 + 1e-9)  # exact √ε scaling here


def test_apply_validates_arguments():
    pt = ModelPoint(1, ())
    with pytest.raises(UsageError):
        limit_measure_apply(pt, lambda s: 1.0, 0.0)
    with pytest.raises(UsageError):
        near_zero_bound(pt, 2.0)
    with pytest.raises(UsageError):
        laplace_check(pt, -1.0, 10.0)
