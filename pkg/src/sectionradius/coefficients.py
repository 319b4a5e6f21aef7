"""Sharp coefficient bounds and the extremal functions f_alpha = h_alpha + conj(g_alpha).

The extremal analytic part satisfies h'(z) = (1 - z)^(2 alpha - 2) and the
co-analytic part g'(z) = z h'(z), so every Taylor coefficient is positive and
meets its bound with equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._types import AlphaOrder, Branch
from .distortion import NEAR_BRANCH
from .harmonic import HarmonicPolynomial

DEFAULT_CONTOUR_RADIUS = 0.7
DEFAULT_SAMPLES = 512


@lru_cache(maxsize=4096)
def _bound_analytic(k: int, a: float) -> float:
    v = 1.0
    for j in range(2, k + 1):
        v *= (j - 2 * a) / j
    return v


def bound_analytic(k: int, alpha: float | AlphaOrder) -> float:
    """A_k(alpha) = prod_{j=2}^k (j - 2 alpha) / k!, via A_k = A_{k-1} (k - 2 alpha)/k."""
    alpha = AlphaOrder.of(alpha)
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return _bound_analytic(k, alpha.value)


def bound_coanalytic(k: int, alpha: float | AlphaOrder) -> float:
    """Bound (k - 1)/(k - 2 alpha) A_k(alpha) on |b_k|."""
    alpha = AlphaOrder.of(alpha)
    k = int(k)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return (k - 1) / (k - 2 * alpha.value) * bound_analytic(k, alpha)


@dataclass(frozen=True)
class CoefficientBoundTable:
    """Bounds on |a_k| and |b_k| for k = 2..max_index (index 0 is k = 2)."""

    alpha: AlphaOrder
    max_index: int
    analytic: tuple[float, ...]
    coanalytic: tuple[float, ...]

    @classmethod
    def build(cls, alpha: float | AlphaOrder, max_index: int) -> "CoefficientBoundTable":
        alpha = AlphaOrder.of(alpha)
        if max_index < 2:
            raise ValueError("max_index must be >= 2")
        a = 2 * alpha.value
        analytic, coanalytic = [], []
        ak = 1.0
        for k in range(2, max_index + 1):
            ak *= (k - a) / k
            analytic.append(ak)
            coanalytic.append((k - 1) / (k - a) * ak)
        return cls(alpha, max_index, tuple(analytic), tuple(coanalytic))

    def analytic_bound(self, k: int) -> float:
        return self.analytic[k - 2]

    def coanalytic_bound(self, k: int) -> float:
        return self.coanalytic[k - 2]


def _cexpm1(w):
    """exp(w) - 1 for complex w without cancellation near w = 0."""
    x, y = np.real(w), np.imag(w)
    return (np.expm1(x) * np.cos(y) - 2 * np.sin(y / 2) ** 2) + 1j * np.exp(x) * np.sin(y)


def _q(s: float, log_w):
    # (1 - w^s)/s with w = 1 - z, continuous through s = 0
    if s == 0.0:
        return -log_w
    return -_cexpm1(s * log_w) / s


def extremal_eval(alpha: float | AlphaOrder, z):
    """Return (h_alpha(z), g_alpha(z)) using principal branches; z may be an array."""
    alpha = AlphaOrder.of(alpha)
    alpha.require_nonnegative()
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("extremal functions are evaluated only inside the unit disk")
    log_w = np.log(1 - z)
    branch = alpha.branch
    if branch is Branch.ZERO:
        h = z / (1 - z)
        g = h + log_w
    elif branch is Branch.HALF:
        h = -log_w
        g = -(z + log_w)
    else:
        a = alpha.value
        c = 2 * a - 1
        if min(abs(a), abs(a - 0.5)) < NEAR_BRANCH:
            h = _q(c, log_w)
            g = h - _q(c + 1, log_w)
        else:
            wc = np.exp(c * log_w)
            h = (1 - wc) / c
            g = (1 - wc * (1 + z * c)) / (2 * a * c)
    if h.ndim == 0:
        return complex(h), complex(g)
    return h, g


def _check_contour(count: int, contour_radius: float, samples: int) -> None:
    if count >= samples:
        raise ValueError(f"count ({count}) must be smaller than samples ({samples})")
    if samples < 4 * count:
        raise ValueError("samples must be at least 4 * count")
    if not (0 < contour_radius < 1):
        raise ValueError("contour_radius must lie in (0, 1)")


def taylor_by_contour(fn, count: int, contour_radius: float = DEFAULT_CONTOUR_RADIUS,
                      samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Taylor coefficients c_0..c_count of ``fn`` from equispaced samples on |z| = contour_radius.

    Aliasing error is at most max|fn| contour_radius^(samples - count)/(1 - contour_radius).
    """
    _check_contour(count, contour_radius, samples)
    z = contour_radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    spectrum = np.fft.fft(fn(z)) / samples
    k = np.arange(count + 1)
    return spectrum[: count + 1] / contour_radius ** k


def extremal_taylor(alpha: float | AlphaOrder, count: int,
                    contour_radius: float = DEFAULT_CONTOUR_RADIUS,
                    samples: int = DEFAULT_SAMPLES) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients a_1..a_count and b_1..b_count of f_alpha by discrete Fourier analysis."""
    alpha = AlphaOrder.of(alpha)
    a = taylor_by_contour(lambda z: extremal_eval(alpha, z)[0], count, contour_radius, samples)
    b = taylor_by_contour(lambda z: extremal_eval(alpha, z)[1], count, contour_radius, samples)
    return a[1:], b[1:]


def contour_derivative(fn, z: complex, samples: int = 256) -> complex:
    """fn'(z) by the trapezoidal Cauchy integral on a circle around z inside the unit disk."""
    z = complex(z)
    rho = 0.5 * (1 - abs(z))
    w = np.exp(2j * np.pi * np.arange(samples) / samples)
    return complex(np.mean(fn(z + rho * w) / (rho * w)))


def build_section(alpha: float | AlphaOrder, n: int, m: int, theta: float = 0.0,
                  method: str = "series") -> HarmonicPolynomial:
    """Truncate f_alpha after degree n (analytic) and m (co-analytic), rotated by theta.

    ``method="series"`` uses the exact coefficients (all positive, equal to
    the bounds); ``method="contour"`` extracts them numerically.
    """
    alpha = AlphaOrder.of(alpha)
    if n < 1 or m < 2:
        raise ValueError("sections need n >= 1 and m >= 2")
    if method == "series":
        a = [1.0] + [bound_analytic(k, alpha) for k in range(2, n + 1)]
        b = [0.0] + [bound_coanalytic(k, alpha) for k in range(2, m + 1)]
    elif method == "contour":
        top = max(n, m)
        ca, cb = extremal_taylor(alpha, top, samples=max(DEFAULT_SAMPLES, 4 * top))
        a, b = ca[:n].copy(), cb[:m].copy()
        a[0], b[0] = 1.0, 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    return HarmonicPolynomial(a, b, rotation=theta)
