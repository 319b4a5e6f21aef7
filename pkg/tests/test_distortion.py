import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sectionradius import AlphaOrder, Branch
from sectionradius.distortion import (adaptive_simpson, convex_derivative_lower, growth_lower_L,
                                      quadrature_oracle_L, two_point_bound_A)

R_GRID = [round(0.05 * i, 2) for i in range(1, 20)]
A_GRID = [round(0.05 * i, 2) for i in range(0, 20)]


def mp_L(r, alpha, dps=40):
    """High-precision quadrature of the integrand, independent of both code paths."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        return float(mpmath.quad(lambda x: (1 - x) * (1 + x) ** (2 * a - 2), [0, mpmath.mpf(r)]))


def test_alpha_branches():
    assert AlphaOrder(0.0).branch is Branch.ZERO
    assert AlphaOrder(5e-10).branch is Branch.ZERO
    assert AlphaOrder(2e-9).branch is Branch.GENERAL
    assert AlphaOrder(0.5).branch is Branch.HALF
    assert AlphaOrder(-0.5).branch is Branch.MINUS_HALF
    assert AlphaOrder(0.3).branch is Branch.GENERAL


@pytest.mark.parametrize("bad", [-0.6, 1.0, 1.5, math.nan])
def test_alpha_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        AlphaOrder(bad)


def test_simpson_on_polynomial_and_exp():
    assert adaptive_simpson(lambda x: x ** 3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-13)
    assert adaptive_simpson(math.exp, 0.0, 1.0) == pytest.approx(math.e - 1, abs=1e-13)


def test_L_small_r():
    assert 0 < growth_lower_L(1e-8, 0.3) < 1e-7


def test_L_examples_against_quadrature():
    assert growth_lower_L(0.5, 0.5) == pytest.approx(2 * math.log(1.5) - 0.5, abs=1e-15)
    assert quadrature_oracle_L(0.5, 0.5) == pytest.approx(2 * math.log(1.5) - 0.5, abs=1e-12)
    assert growth_lower_L(0.5, 0.0) == pytest.approx(1 / 1.5 - math.log(1.5), abs=1e-15)
    assert quadrature_oracle_L(0.5, 0.0) == pytest.approx(1 / 1.5 - math.log(1.5), abs=1e-12)
    assert quadrature_oracle_L(0.9, 0.0) == pytest.approx(1.8 / 1.9 - math.log(1.9), abs=1e-12)
    # just off the half branch: closed form and oracle agree, and both sit
    # dL/dalpha * 1e-8 ~ 1.6e-9 away from the exact half-branch value
    near = growth_lower_L(0.7, 0.49999999)
    assert near == pytest.approx(quadrature_oracle_L(0.7, 0.49999999), abs=1e-9)
    assert near == pytest.approx(mp_L(0.7, 0.49999999), abs=1e-15)
    assert abs(near - (2 * math.log(1.7) - 0.7)) < 2e-9


def test_L_agrees_with_quadrature_on_grid():
    worst = max(abs(growth_lower_L(r, a) - quadrature_oracle_L(r, a)) for r in R_GRID for a in A_GRID)
    assert worst <= 1e-10


@pytest.mark.parametrize("alpha", [2e-9, 1e-7, 3e-6, 5e-5, 0.5 - 1e-7, 0.5 + 2e-6, 0.5 + 9e-5, 0.2, 0.8])
@pytest.mark.parametrize("r", [0.05, 0.5, 0.95])
def test_L_relative_error_near_removable_singularities(alpha, r):
    ref = mp_L(r, alpha)
    assert abs(growth_lower_L(r, alpha) - ref) <= 1e-10 * ref


@pytest.mark.parametrize("boundary", [0.0, 0.5])
def test_L_branch_continuity(boundary):
    for r in R_GRID:
        lo = growth_lower_L(r, max(0.0, boundary - 5e-8))
        hi = growth_lower_L(r, boundary + 5e-8)
        exact = growth_lower_L(r, boundary)
        assert abs(lo - hi) <= 1e-6
        assert abs(hi - exact) <= 1e-6


def test_L_monotone_in_r_and_alpha():
    rs = np.linspace(0.01, 0.99, 200)
    for a in (0.0, 0.25, 0.5, 0.75):
        vals = [growth_lower_L(r, a) for r in rs]
        assert all(np.diff(vals) > 0)
    for r in R_GRID:
        vals = [growth_lower_L(r, a) for a in A_GRID]
        assert all(np.diff(vals) >= 0)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.9])
def test_L_series_expansion_at_zero(alpha):
    r = 1e-3
    approx = r - (3 - 2 * alpha) * r * r / 2
    assert abs(growth_lower_L(r, alpha) - approx) < 5 * r ** 3


def test_A_limits_and_examples():
    assert two_point_bound_A(1e-6, 0.25) == pytest.approx(1.0, abs=1e-4)
    for a in (0.0, 0.5, 0.75):
        assert two_point_bound_A(1e-6, a) == pytest.approx(1.0, abs=1e-4)
        assert two_point_bound_A(1 - 1e-6, a) == pytest.approx(0.0, abs=1e-4)
    assert two_point_bound_A(1 - 1e-8, 0.5) < 1e-7
    L = 2 * math.log(1.5) - 0.5
    assert two_point_bound_A(0.5, 0.5) == pytest.approx(0.75 * L * L / 0.25, rel=1e-14)
    for r in R_GRID:
        assert two_point_bound_A(r, 0.3) > 0


def test_convex_derivative_lower():
    assert convex_derivative_lower(0.0, 0.4) == 1.0
    assert convex_derivative_lower(1 - 1e-12, 0.0) == pytest.approx(0.25, abs=1e-11)
    with mpmath.workdps(30):
        ref = float(mpmath.mpf("1.5") ** mpmath.mpf("-0.5"))
    assert convex_derivative_lower(0.5, 0.75) == pytest.approx(ref, rel=1e-15)


@pytest.mark.parametrize("fn", [growth_lower_L, two_point_bound_A, quadrature_oracle_L])
def test_domain_errors(fn):
    with pytest.raises(ValueError):
        fn(0.5, -0.1)
    for r in (0.0, 1.0, -0.2, 1.2):
        with pytest.raises(ValueError):
            fn(r, 0.3)


def test_limit_constant_at_unit_radius():
    # L(1, 1/2) = 2 log 2 - 1, approached from inside
    assert growth_lower_L(1 - 1e-12, 0.5) == pytest.approx(2 * math.log(2) - 1, abs=1e-11)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(0.01, 0.99), alpha=st.floats(0.0, 0.99))
def test_L_matches_integral_property(r, alpha):
    assert growth_lower_L(r, alpha) == pytest.approx(quadrature_oracle_L(r, alpha), rel=1e-10)
