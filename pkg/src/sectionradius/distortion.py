"""Two-point distortion lower bounds for the family F(alpha), 0 <= alpha < 1.

``growth_lower_L`` is the lower bound on |h(z) + lambda g(z)| at |z| = r and
``two_point_bound_A`` the resulting lower bound on difference quotients over
the circle |z| = r.
"""

from __future__ import annotations

import math

from ._types import AlphaOrder, Branch, check_radius

# below this distance from alpha = 0 or 1/2 the general closed form loses
# more than ~1e-12 relative accuracy to cancellation
NEAR_BRANCH = 1e-4

QUAD_TOL = 1e-13
QUAD_MAX_DEPTH = 60


def _expm1_ratio(s: float, log_base: float) -> float:
    """(base**s - 1)/s, continuous through s = 0."""
    if s == 0.0:
        return log_base
    return math.expm1(s * log_base) / s


def _L_stable(r: float, a: float) -> float:
    # integral of (2 - u) u^(2a - 2) over u in [1, 1 + r], grouped by power
    lg = math.log1p(r)
    return 2.0 * _expm1_ratio(2 * a - 1, lg) - _expm1_ratio(2 * a, lg)


def growth_lower_L(r: float, alpha: float | AlphaOrder) -> float:
    """Lower bound L(r, alpha) = int_0^r (1 - p)(1 + p)^(2 alpha - 2) dp."""
    alpha = AlphaOrder.of(alpha)
    alpha.require_nonnegative()
    r = check_radius(r)
    a = alpha.value
    branch = alpha.branch
    if branch is Branch.ZERO:
        return 2 * r / (1 + r) - math.log1p(r)
    if branch is Branch.HALF:
        return 2 * math.log1p(r) - r
    if min(abs(a), abs(a - 0.5)) < NEAR_BRANCH:
        return _L_stable(r, a)
    num = (1 + r) ** (2 * a) * (1 + r + 2 * a - 2 * r * a) - (1 + r) * (1 + 2 * a)
    return num / (2 * a * (1 + r) * (2 * a - 1))


def two_point_bound_A(r: float, alpha: float | AlphaOrder) -> float:
    """A(r, alpha) = (1 - r^2) L(r, alpha)^2 / r^2."""
    r = check_radius(r)
    L = growth_lower_L(r, alpha)
    return (1 - r) * (1 + r) * (L / r) ** 2


def convex_derivative_lower(r: float, alpha: float | AlphaOrder) -> float:
    """Lower bound (1 + r)^(-2(1 - alpha)) on |h'(z)|, |z| = r, h convex of order alpha.

    ``r = 0`` is accepted and gives the normalisation h'(0) = 1.
    """
    alpha = AlphaOrder.of(alpha)
    alpha.require_nonnegative()
    r = float(r)
    if not (0.0 <= r < 1.0):
        raise ValueError(f"r must lie in [0, 1), got {r!r}")
    return (1 + r) ** (-2 * (1 - alpha.value))


def adaptive_simpson(f, a: float, b: float, tol: float = QUAD_TOL,
                     max_depth: int = QUAD_MAX_DEPTH) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    Intervals are split until |S_left + S_right - S_whole| <= 15 tol_local;
    the local tolerance halves with each split.
    """
    def simpson(fa, fm, fb, h):
        return h * (fa + 4 * fm + fb) / 6

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    total = 0.0
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)]
    while stack:
        a0, b0, fa0, fm0, fb0, whole, eps, depth = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m0), 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = simpson(fa0, flm, fm0, m0 - a0)
        right = simpson(fm0, frm, fb0, b0 - m0)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * eps:
            total += left + right + delta / 15
        else:
            stack.append((a0, m0, fa0, flm, fm0, left, eps / 2, depth + 1))
            stack.append((m0, b0, fm0, frm, fb0, right, eps / 2, depth + 1))
    return total


def quadrature_oracle_L(r: float, alpha: float | AlphaOrder) -> float:
    """L(r, alpha) by direct quadrature of its integrand (independent of the closed form)."""
    alpha = AlphaOrder.of(alpha)
    alpha.require_nonnegative()
    r = check_radius(r)
    p = 2 * alpha.value - 2
    return adaptive_simpson(lambda x: (1 - x) * (1 + x) ** p, 0.0, r)
