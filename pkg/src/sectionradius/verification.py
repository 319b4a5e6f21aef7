"""Independent numerical oracles that test univalence and distortion directly.

None of these prove anything. Grid minimisation and pair scans are
falsifiers: they catch implementation bugs and confirm that sections really
do fail beyond their radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from ._types import AlphaOrder, ViolationReport, check_radius, collect_witnesses
from .coefficients import contour_derivative, extremal_eval
from .distortion import two_point_bound_A
from .harmonic import HarmonicPolynomial

COLLISION_EPS = 1e-9
DISTORTION_SLACK = 1e-12
MAX_GRID_POINTS = 10**6

__all__ = [
    "COLLISION_EPS", "GridSpec", "GridTooLarge", "HarmonicPolynomial", "injectivity_scan",
    "starkov_functional", "starkov_min", "verify_distortion", "verify_extremal_dilatation",
    "verify_sense_preserving",
]


class GridTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    radial_count: int = 32
    angular_count: int = 128
    t_count: int = 32
    max_radius: float = 0.999
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.radial_count, self.angular_count, self.t_count) < 2:
            raise ValueError("grid counts must be >= 2")
        if not (0 < self.max_radius < 1):
            raise ValueError("max_radius must lie in (0, 1)")

    @classmethod
    def parse(cls, text: str, **kw) -> "GridSpec":
        """Build from 'RxAxT', e.g. '32x128x32'."""
        parts = [int(p) for p in text.lower().split("x")]
        if len(parts) != 3:
            raise ValueError(f"grid must look like RxAxT, got {text!r}")
        return cls(*parts, **kw)

    def polar(self, radius: float, include_center: bool = False) -> np.ndarray:
        rho = radius * np.arange(1, self.radial_count + 1) / self.radial_count
        phi = 2 * np.pi * np.arange(self.angular_count) / self.angular_count
        z = (rho[:, None] * np.exp(1j * phi[None, :])).ravel()
        return np.concatenate(([0j], z)) if include_center else z


def _sin_ratio(M: int, t: np.ndarray) -> np.ndarray:
    """sin(kt)/sin(t) for k = 1..M (Chebyshev U_{k-1}(cos t)); equals k at t = 0."""
    U = np.empty((M, t.size))
    c = np.cos(t)
    U[0] = 1.0
    if M > 1:
        U[1] = 2 * c
    for k in range(2, M):
        U[k] = 2 * c * U[k - 1] - U[k - 2]
    return U


def starkov_functional(p: HarmonicPolynomial, r: float, z, t, variant: str = "harmonic"):
    """Difference quotient of the rescaled section z -> s(rz)/r, in angle form.

    For z = rho e^{i phi} and t the half-angle between two points on |z| = rho,
    the harmonic variant is sum_k [a'_k z^(k-1) - conj(b'_k z^k)/z] sin(kt)/sin(t)
    and vanishes exactly when the two points share an image. The analytic
    variant is sum_k (a'_k + b'_k) z^(k-1) sin(kt)/sin(t), the functional of
    h + e^{i theta} g. Returns an array of shape (len(z), len(t)).
    """
    if variant not in ("harmonic", "analytic"):
        raise ValueError(f"unknown variant {variant!r}")
    a, b = p.rescaled(r)
    M = max(a.size, b.size)
    a = np.pad(a, (0, M - a.size))
    b = np.pad(b, (0, M - b.size))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    k = np.arange(M)[:, None]
    zk = z[None, :] ** k  # z^(k-1) for k = 1..M
    if variant == "analytic":
        W = (a + b)[:, None] * zk
    else:
        rho = np.abs(z)[None, :]
        phase = np.exp(-1j * (k + 2) * np.angle(z)[None, :])  # conj(z)^k / z / rho^(k-1)
        W = a[:, None] * zk - np.conj(b)[:, None] * rho ** k * phase
    return W.T @ _sin_ratio(M, t)


def starkov_min(p: HarmonicPolynomial, r: float, grid: GridSpec | None = None,
                variant: str = "harmonic", polish: bool = True):
    """Minimum modulus of the functional over |z| <= max_radius, t in [0, pi/2].

    The grid minimum is polished by a bounded local search from the grid
    argmin. Returns (min_modulus, (z_argmin, t_argmin)).
    """
    r = check_radius(r)
    grid = grid or GridSpec()
    z = grid.polar(grid.max_radius)
    t = np.linspace(0, np.pi / 2, grid.t_count)
    vals = np.abs(starkov_functional(p, r, z, t, variant))
    iz, it = np.unravel_index(np.argmin(vals), vals.shape)
    best = float(vals[iz, it])
    best_z, best_t = complex(z[iz]), float(t[it])
    if polish:
        def objective(x):
            zz = x[0] * np.exp(1j * x[1])
            return float(np.abs(starkov_functional(p, r, zz, x[2], variant))[0, 0])

        x0 = np.array([abs(best_z), np.angle(best_z), best_t])
        res = minimize(objective, x0, method="L-BFGS-B",
                       bounds=[(1e-12, grid.max_radius), (None, None), (0, np.pi / 2)])
        if res.fun < best:
            best = float(res.fun)
            best_z, best_t = complex(res.x[0] * np.exp(1j * res.x[1])), float(res.x[2])
    return best, (best_z, best_t)


def _newton_partner(p: HarmonicPolynomial, z1: complex, z2: complex, steps: int = 60):
    """Solve p(z) = p(z1) for z starting from z2; returns (z, residual)."""
    target = complex(p(z1))
    for _ in range(steps):
        F = complex(p(z2)) - target
        A = complex(p.dh(z2))
        B = complex(p.dg(z2))
        J = abs(A) ** 2 - abs(B) ** 2
        if J == 0:
            break
        # A d + conj(B) conj(d) = -F
        d = (np.conj(A) * -F - np.conj(B) * np.conj(-F)) / J
        if abs(d) > 0.25:
            d *= 0.25 / abs(d)
        z2 = z2 + d
        if abs(d) < 1e-16 * max(1.0, abs(z2)):
            break
    return z2, abs(complex(p(z2)) - target)


def injectivity_scan(p: HarmonicPolynomial, r: float, grid: GridSpec | None = None,
                     collision_eps: float = COLLISION_EPS, refine: int = 64) -> ViolationReport:
    """Look for distinct z1, z2 in |z| <= r with |p(z1) - p(z2)| < collision_eps |z1 - z2|.

    Image-space nearest neighbours of a polar grid give candidate pairs; the
    ``refine`` most suspicious well-separated pairs are polished by Newton's
    method on p(z2) = p(z1), which turns near-collisions of a folded map into
    exact ones.
    """
    r = check_radius(r)
    grid = grid or GridSpec()
    if grid.radial_count * grid.angular_count > MAX_GRID_POINTS:
        raise GridTooLarge(f"grid has more than {MAX_GRID_POINTS} points")
    z = grid.polar(r, include_center=True)
    w = p(z)
    tree = cKDTree(np.column_stack([w.real, w.imag]))
    kq = min(12, z.size)
    _, idx = tree.query(np.column_stack([w.real, w.imag]), k=kq)
    i = np.repeat(np.arange(z.size), kq - 1)
    j = idx[:, 1:].ravel()
    d = np.abs(z[i] - z[j])
    e = np.abs(w[i] - w[j])
    keep = d > 0
    i, j, d, e = i[keep], j[keep], d[keep], e[keep]
    quotient = e / d
    margins = list(quotient - collision_eps)

    spacing = max(r / grid.radial_count, 2 * np.pi * r / grid.angular_count)
    sep = 3 * spacing
    far = np.flatnonzero(d > sep)
    order = far[np.argsort(quotient[far])][:refine]
    found, found_margins = [], []
    for c in order:
        z1, z2 = complex(z[i[c]]), complex(z[j[c]])
        z2n, res = _newton_partner(p, z1, z2)
        gap = abs(z2n - z1)
        if abs(z2n) <= r and gap > sep / 2:
            m = res / gap - collision_eps
            found_margins.append(m)
            if m < 0:
                found.append((z1, z2n, res))
    margins.extend(found_margins)
    grid_bad = np.flatnonzero(quotient < collision_eps)
    witnesses = [(complex(z[i[c]]), complex(z[j[c]]), float(e[c])) for c in grid_bad]
    witnesses += found
    witnesses.sort(key=lambda x: x[2] / abs(x[0] - x[1]))
    return ViolationReport(
        samples=len(margins),
        violations=int(grid_bad.size) + len(found),
        worst_margin=float(min(margins)),
        witnesses=[(str(a), str(b), c) for a, b, c in witnesses[:ViolationReport.MAX_WITNESSES]],
        details={"refined_pairs": len(found_margins)},
    )


def verify_sense_preserving(p: HarmonicPolynomial, r: float,
                            grid: GridSpec | None = None) -> ViolationReport:
    """Check J = |h'|^2 - |g'|^2 > 0 on a polar grid of radius r."""
    r = check_radius(r)
    grid = grid or GridSpec()
    if grid.radial_count * grid.angular_count > MAX_GRID_POINTS:
        raise GridTooLarge(f"grid has more than {MAX_GRID_POINTS} points")
    z = grid.polar(r, include_center=True)
    J = p.jacobian(z)
    bad = J <= 0
    return ViolationReport(
        samples=int(z.size), violations=int(bad.sum()), worst_margin=float(J.min()),
        witnesses=collect_witnesses(list(J), [(str(complex(x)), float(v)) for x, v in zip(z, J)]),
    )


def verify_extremal_dilatation(alpha: float | AlphaOrder, r: float,
                               grid: GridSpec | None = None) -> ViolationReport:
    """Dilatation of f_alpha has modulus |z| < 1; derivatives by Cauchy integrals.

    The margin per point is 1 - |g'/h'|; ``max_identity_error`` records
    max | |g'/h'| - |z| |.
    """
    alpha = AlphaOrder.of(alpha)
    r = check_radius(r)
    grid = grid or GridSpec(radial_count=8, angular_count=16)
    z = grid.polar(r)
    dil = np.empty(z.size)
    for q, zz in enumerate(z):
        dh = contour_derivative(lambda x: extremal_eval(alpha, x)[0], zz)
        dg = contour_derivative(lambda x: extremal_eval(alpha, x)[1], zz)
        dil[q] = abs(dg / dh)
    margins = 1 - dil
    return ViolationReport(
        samples=int(z.size), violations=int((margins <= 0).sum()),
        worst_margin=float(margins.min()),
        witnesses=collect_witnesses(list(margins), [(str(complex(x)),) for x in z]),
        details={"max_identity_error": float(np.max(np.abs(dil - np.abs(z))))},
    )


def verify_distortion(alpha: float | AlphaOrder, r: float, pairs: int = 10_000,
                      seed: int = 0) -> ViolationReport:
    """Monte-Carlo check of |f(re^{it}) - f(re^{is})| / |re^{it} - re^{is}| >= A(r, alpha) for f_alpha."""
    alpha = AlphaOrder.of(alpha)
    alpha.require_nonnegative()
    r = check_radius(r)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0, 2 * np.pi, pairs)
    s = rng.uniform(0, 2 * np.pi, pairs)
    s = np.where(t == s, s + np.pi, s)
    z1, z2 = r * np.exp(1j * t), r * np.exp(1j * s)
    h1, g1 = extremal_eval(alpha, z1)
    h2, g2 = extremal_eval(alpha, z2)
    diff = (h1 - h2) + np.conj(g1 - g2)
    quotient = np.abs(diff) / np.abs(z1 - z2)
    bound = two_point_bound_A(r, alpha)
    margins = quotient - bound
    bad = margins < -DISTORTION_SLACK
    order = np.argsort(margins)[: ViolationReport.MAX_WITNESSES]
    witnesses = [(float(t[q]), float(s[q]), float(quotient[q])) for q in order if bad[q]]
    return ViolationReport(
        samples=int(pairs), violations=int(bad.sum()), worst_margin=float(margins.min()),
        witnesses=witnesses, details={"bound": bound},
    )
