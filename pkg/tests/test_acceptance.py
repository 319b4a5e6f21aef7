"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists a
PASS/FAIL line for each criterion.
"""

import json
import math
import time

import numpy as np
import pytest

from sectionradius.cli import run
from sectionradius.coefficients import bound_analytic, bound_coanalytic, build_section, extremal_taylor
from sectionradius.distortion import growth_lower_L, quadrature_oracle_L, two_point_bound_A
from sectionradius.solver import (GapQuery, find_radius, gap_eval, min_sections_table, t_function,
                                  table_family)
from sectionradius.tails import Side, tail_analytic, tail_coanalytic, tail_mu
from sectionradius.verification import (GridSpec, injectivity_scan, starkov_min,
                                        verify_distortion)

RHOS = [0.25, 0.5, 0.75, 0.9]
ALPHAS = [-0.5, 0.0, 0.25, 0.5, 0.75]
REFERENCE_ORDERS = [[4, 3, 2, 2, 2], [12, 8, 6, 4, 3], [43, 29, 22, 16, 9], [160, 111, 86, 61, 35]]


def _query(alpha, n):
    family, a = table_family(alpha)
    return GapQuery(family, n, n, a)


@pytest.mark.acceptance(1, "reference grid of minimal orders reproduced exactly by the table command in under 60 s")
def test_table_regression():
    start = time.perf_counter()
    out, err, code = run(["table"])
    elapsed = time.perf_counter() - start
    assert code == 0, err
    assert json.loads(out)["outputs"]["grid"] == REFERENCE_ORDERS
    assert min_sections_table(RHOS, ALPHAS, threads=1) == REFERENCE_ORDERS
    assert elapsed < 60


@pytest.mark.acceptance(2, "minimality certificates for every cell of the reference grid")
def test_minimality_certificates():
    checked_below = 0
    for rho, row in zip(RHOS, REFERENCE_ORDERS):
        for alpha, n_star in zip(ALPHAS, row):
            value, err = gap_eval(_query(alpha, n_star), rho)
            assert value > err, (rho, alpha, n_star)
            # n = 2 is the smallest order searched, so n* = 2 has nothing below it
            if n_star > 2:
                value, err = gap_eval(_query(alpha, n_star - 1), rho)
                assert value <= err, (rho, alpha, n_star)
                checked_below += 1
    assert checked_below == 17


@pytest.mark.acceptance(3, "half-order lower bound for n = 3..200 with positive margin in under 120 s")
def test_half_order_bound():
    start = time.perf_counter()
    margins = []
    for n in range(3, 201):
        sol = find_radius(GapQuery.falpha(0.5, n, n))
        margins.append(sol.bracket_low - (1 - 2 * math.log(n) / n))
    elapsed = time.perf_counter() - start
    assert min(margins) > 0
    assert elapsed < 120


@pytest.mark.acceptance(4, "distortion oracle: 10^4 pairs, zero violations on the 4 x 3 grid")
def test_distortion_oracle():
    for alpha in (0.0, 0.25, 0.5, 0.75):
        for r in (0.3, 0.6, 0.9):
            report = verify_distortion(alpha, r, 10_000, seed=0)
            assert report.violations == 0 and report.worst_margin >= -1e-12, (alpha, r)


@pytest.mark.acceptance(5, "extremal Taylor coefficients attain the bounds within 1e-9 for k <= 30")
def test_sharpness():
    for alpha in (0.0, 0.25, 0.5, 0.75):
        a, b = extremal_taylor(alpha, 30)
        for k in range(1, 31):
            assert abs(abs(a[k - 1]) - bound_analytic(k, alpha)) <= 1e-9
            if k >= 2:
                assert abs(abs(b[k - 1]) - bound_coanalytic(k, alpha)) <= 1e-9


@pytest.mark.acceptance(6, "closed-form L agrees with adaptive quadrature within 1e-10")
def test_quadrature_oracle():
    rs = [round(0.05 * i, 2) for i in range(1, 20)]
    alphas = [round(0.05 * i, 2) for i in range(0, 20)]
    worst = max(abs(growth_lower_L(r, a) - quadrature_oracle_L(r, a)) for r in rs for a in alphas)
    assert worst <= 1e-10


@pytest.mark.acceptance(7, "tails at alpha = -1/2 equal the convex-family tails within 1e-12")
def test_mu_consistency():
    for n in (2, 5, 20):
        for r in (0.1, 0.5, 0.9):
            a, b = tail_analytic(n, r, -0.5).value, tail_mu(n, r, Side.ANALYTIC).value
            assert abs(a - b) <= 1e-12 * max(1.0, b)
            a, b = tail_coanalytic(n, r, -0.5).value, tail_mu(n, r, Side.COANALYTIC).value
            assert abs(a - b) <= 1e-12 * max(1.0, b)


@pytest.mark.acceptance(8, "alpha = 1/2 gap identity within 1e-12 and the proof inequality")
def test_half_order_identity_and_inequality():
    rs = np.linspace(0.001, 0.999, 1000)
    for n in (2, 3, 10, 61):
        q = GapQuery.falpha(0.5, n, n)
        worst = max(abs(gap_eval(q, r)[0] - (two_point_bound_A(r, 0.5) - 2 * r ** n / (1 - r)))
                    for r in rs)
        assert worst <= 1e-12, n
    margin = min((1 - r * r) * ((2 * math.log1p(r) - r) / r) ** 2 - (1 - r) / (1 + r) ** 2 for r in rs)
    assert margin >= 0


@pytest.mark.acceptance(9, "t(x, n) decreasing on [2 log n, n] with t(2 log n, n), t(n, n) < 1")
def test_t_machinery():
    for n in range(3, 1001):
        lo = 2 * math.log(n)
        xs = np.linspace(lo, n, 1000)
        # t > 0, so monotonicity is checked on log t, which does not underflow
        log_t = math.log(2) - xs + 2 * np.log(2 * n / xs - 1)
        assert np.all(np.diff(log_t) < 0), n
        assert t_function(lo, n) < 1 and t_function(n, n) < 1
        assert math.exp(log_t[0]) == pytest.approx(t_function(lo, n), rel=1e-12)


@pytest.mark.acceptance(10, "Starkov and injectivity oracles agree with the solver radius")
def test_oracle_concordance():
    grid = GridSpec(24, 96, 24)
    for alpha in (0.0, 0.5):
        for n in (3, 5, 8):
            r = find_radius(GapQuery.falpha(alpha, n, n)).root * 0.999
            for theta in (0.0, math.pi / 2, math.pi):
                p = build_section(alpha, n, n, theta)
                assert starkov_min(p, r, grid)[0] > 0, (alpha, n, theta)
                assert injectivity_scan(p, r, grid).violations == 0, (alpha, n, theta)
    assert injectivity_scan(build_section(0.0, 2, 2, 0.0), 0.999).violations >= 1
