import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factprod.density import (
    RegionSpec,
    analytic_density_t3s2,
    indicator,
    mc_density,
    quadrature_density,
    sample_block,
)


# ---------------------------------------------------------------- analytic

def test_analytic_values():
    assert analytic_density_t3s2(1) == Fraction(1, 120)
    assert analytic_density_t3s2(2) == Fraction(1, 80)
    assert analytic_density_t3s2(3) == Fraction(1, 72)
    assert analytic_density_t3s2(10) == Fraction(19, 1200)


def test_analytic_limit_is_one_sixtieth():
    assert analytic_density_t3s2(10**9) < Fraction(1, 60)
    assert float(Fraction(1, 60) - analytic_density_t3s2(10**9)) < 1e-10


def test_analytic_rejects_bad_c():
    with pytest.raises(ValueError):
        analytic_density_t3s2(0)
    with pytest.raises(ValueError):
        analytic_density_t3s2(1.5)
    with pytest.raises(ValueError):
        analytic_density_t3s2(True)


# ---------------------------------------------------------------- spec / indicator

def test_region_spec_validation():
    with pytest.raises(ValueError):
        RegionSpec(t=2, s=3, c=1)  # s > t
    with pytest.raises(ValueError):
        RegionSpec(t=3, s=2, c=0.5)
    with pytest.raises(ValueError):
        RegionSpec(t=3, s=2, c=1, pairing=(5,))
    with pytest.raises(ValueError):
        RegionSpec(t=4, s=3, c=1, pairing=(2, 2))
    assert RegionSpec(t=3, s=2, c=1).pairing == (2,)
    assert RegionSpec(t=4, s=3, c=1).pairing == (2, 3)


def test_indicator_examples():
    spec = RegionSpec(t=3, s=2, c=1)
    assert indicator((0.9, 0.5, 0.6, 0.3, 0.1), spec) is True
    assert indicator((0.9, 0.8, 0.85, 0.3, 0.1), spec) is False  # 0.5 > 0.05
    assert indicator((0.9, 0.5, 0.9, 0.3, 0.1), spec) is False  # boundary x1 = y1
    with pytest.raises(ValueError):
        indicator((0.5, 0.5, 0.5), spec)


def test_indicator_orderings():
    spec = RegionSpec(t=3, s=2, c=5)
    assert not indicator((0.5, 0.9, 0.4, 0.3, 0.1), spec)  # x not sorted
    assert not indicator((0.9, 0.5, 0.4, 0.1, 0.3), spec)  # y not sorted


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(0, 5000))
def test_scalar_indicator_matches_vectorized(seed, start):
    from factprod.density import _count_hits

    spec = RegionSpec(t=3, s=2, c=1)
    pts = sample_block(seed, start, 64, spec.dims)
    scalar = sum(indicator(tuple(row), spec) for row in pts)
    assert scalar == _count_hits(pts, spec)


# ---------------------------------------------------------------- sampler

def test_sampler_counter_based():
    a = sample_block(42, 0, 100, 5)
    b = np.vstack([sample_block(42, 0, 37, 5), sample_block(42, 37, 63, 5)])
    assert np.array_equal(a, b)
    c = sample_block(43, 0, 100, 5)
    assert not np.array_equal(a, c)
    assert float(a.min()) >= 0.0 and float(a.max()) < 1.0


def test_sampler_is_roughly_uniform():
    u = sample_block(7, 0, 200_000, 1).ravel()
    assert abs(u.mean() - 0.5) < 0.005
    hist, _ = np.histogram(u, bins=10, range=(0, 1))
    assert hist.min() > 18_000


# ---------------------------------------------------------------- monte carlo

def test_mc_density_flagship():
    spec = RegionSpec(t=3, s=2, c=1)
    est = mc_density(spec, 400_000, seed=11)
    assert abs(est.mc_mean - 1 / 120) < 4 * est.mc_stderr
    assert est.mc_stderr == pytest.approx(
        math.sqrt(est.mc_mean * (1 - est.mc_mean) / est.samples)
    )


def test_mc_density_worker_and_batch_invariance():
    spec = RegionSpec(t=3, s=2, c=2)
    base = mc_density(spec, 123_457, seed=5, workers=1)
    for workers in (2, 3, 8):
        assert mc_density(spec, 123_457, seed=5, workers=workers).mc_mean == base.mc_mean
    assert mc_density(spec, 123_457, seed=5, batch=1000).mc_mean == base.mc_mean


def test_mc_density_validation():
    with pytest.raises(ValueError):
        mc_density(RegionSpec(t=3, s=2, c=1), 0, seed=1)


# ---------------------------------------------------------------- quadrature

def test_quadrature_matches_analytic():
    for c in (1, 2, 3, 5, 10):
        q = quadrature_density(RegionSpec(t=3, s=2, c=c))
        assert q == pytest.approx(float(analytic_density_t3s2(c)), abs=1e-6)


def test_quadrature_v1_alone():
    q = quadrature_density(RegionSpec(t=3, s=2, c=math.inf))
    assert q == pytest.approx(1 / 60, abs=1e-6)


def test_quadrature_v2_complement():
    v1 = quadrature_density(RegionSpec(t=3, s=2, c=math.inf))
    for c in (1, 2):
        v2 = v1 - quadrature_density(RegionSpec(t=3, s=2, c=c))
        assert v2 == pytest.approx(1 / (120 * c), abs=1e-6)


def test_quadrature_s1_known_value():
    # x1 > y1 >= y2: one ordering of three coordinates -> 1/6
    q = quadrature_density(RegionSpec(t=2, s=1, c=1))
    assert q == pytest.approx(1 / 6, abs=1e-9)
    q = quadrature_density(RegionSpec(t=3, s=1, c=1))
    assert q == pytest.approx(1 / 24, abs=1e-9)


def test_quadrature_s3_exact_value_c1():
    # symbolic integration gives 1/480 for t=3, s=3, c=1, pairing (2,3)
    q = quadrature_density(RegionSpec(t=3, s=3, c=1), 96)
    assert q == pytest.approx(1 / 480, abs=2e-6)


def test_quadrature_dimension_guard():
    with pytest.raises(ValueError):
        quadrature_density(RegionSpec(t=5, s=2, c=1))
    with pytest.raises(ValueError):
        quadrature_density(RegionSpec(t=3, s=2, c=1), 0)


def test_quadrature_monotone_in_c():
    vals = [quadrature_density(RegionSpec(t=3, s=2, c=c)) for c in (1, 2, 3, 5, 10)]
    assert vals == sorted(vals)
    vals = [quadrature_density(RegionSpec(t=4, s=2, c=c)) for c in (1, 2, 5)]
    assert vals == sorted(vals)


def test_quadrature_positive_with_margin():
    for spec in (
        RegionSpec(t=3, s=2, c=1),
        RegionSpec(t=4, s=2, c=1, pairing=(3,)),
        RegionSpec(t=3, s=3, c=1),
    ):
        q_hi = quadrature_density(spec, 64)
        q_lo = quadrature_density(spec, 32)
        err_est = abs(q_hi - q_lo) + 1e-12
        assert q_hi > 10 * err_est


# ---------------------------------------------------------------- cross-route matrix

MATRIX = [
    (RegionSpec(t=2, s=1, c=1), 120_000),
    (RegionSpec(t=3, s=1, c=1), 120_000),
    (RegionSpec(t=4, s=1, c=1), 120_000),
    (RegionSpec(t=2, s=2, c=1), 120_000),
    (RegionSpec(t=3, s=2, c=1), 200_000),
    (RegionSpec(t=3, s=2, c=2, pairing=(3,)), 200_000),
    (RegionSpec(t=4, s=2, c=2, pairing=(3,)), 200_000),
    (RegionSpec(t=4, s=2, c=5, pairing=(4,)), 200_000),
    (RegionSpec(t=3, s=3, c=1), 400_000),
    (RegionSpec(t=3, s=3, c=2, pairing=(3, 2)), 400_000),
]


@pytest.mark.parametrize("spec,samples", MATRIX, ids=lambda v: str(v))
def test_mc_agrees_with_quadrature(spec, samples):
    if not isinstance(spec, RegionSpec):
        pytest.skip()
    q = quadrature_density(spec)
    est = mc_density(spec, samples, seed=97)
    assert abs(est.mc_mean - q) <= 4 * est.mc_stderr
