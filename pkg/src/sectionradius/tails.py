"""Certified summation of the weighted power-series tails sum_{k>n} w_k r^(k-1).

Every tail used here has polynomially growing weights, and the term ratio
t_{k+1}/t_k = r w_{k+1}/w_k is monotone in k with limit r. After stopping at
term t_K the discarded remainder is therefore at most t_K q/(1 - q) with
q = max(t_{K+1}/t_K, r) < 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._types import AlphaOrder, check_radius
from .coefficients import bound_analytic

REL_TOL = 1e-15
TERM_TOL = 1e-17
MAX_R = 1 - 1e-9
MAX_TERMS = 10**8
_FIRST_CHUNK = 64
_MAX_CHUNK = 1 << 20
# Summation runs until the remainder is this far inside the requested bound,
# so a tail of size ~1e3 is still accurate to ~1e-14 in absolute terms.
HEADROOM = 1e-2


class Side(enum.Enum):
    ANALYTIC = "analytic"
    COANALYTIC = "coanalytic"


class TailTruncationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TailSum:
    """A nonnegative tail with a rigorous bound on the discarded remainder.

    The true sum lies in [value, value + truncation_bound]. When summation
    was cut short at a ``ceiling`` the bound is infinite and ``complete`` is
    False; ``value`` is then only a lower bound.
    """

    value: float
    truncation_bound: float
    terms_used: int
    complete: bool = True


def certified_tail(first_weight: float, weight_ratio: Callable[[np.ndarray], np.ndarray],
                   start: int, r: float, rel_tol: float = REL_TOL,
                   ceiling: float | None = None) -> TailSum:
    """Sum w_k r^(k-1) over k >= start, where w_{k+1} = w_k * weight_ratio(k).

    ``weight_ratio`` is vectorised over float arrays of k. Powers of r are
    taken directly rather than folded into a running product, and the
    returned value is an exactly rounded sum of the terms kept.
    """
    if r >= MAX_R:
        raise TailTruncationError(f"radius {r} too close to 1 for certified summation")
    if first_weight == 0.0:
        return TailSum(0.0, 0.0, 0)
    term_tol = TERM_TOL * rel_tol / REL_TOL
    pieces: list[float] = []
    acc = 0.0
    used = 0
    w_next = first_weight
    k0 = start
    chunk = _FIRST_CHUNK
    while used < MAX_TERMS:
        ks = np.arange(k0, k0 + chunk, dtype=float)
        c = weight_ratio(ks)  # c[i] = w_{ks[i]+1}/w_{ks[i]}
        weights = w_next * np.concatenate(([1.0], np.cumprod(c[:-1])))
        terms = weights * np.power(r, ks - 1)
        partial = acc + np.cumsum(terms)
        q = np.maximum(c * r, r)
        with np.errstate(divide="ignore"):
            bound = np.where(q < 1, terms * q / (1 - q), np.inf)
        done = (terms <= term_tol * partial) & (bound <= HEADROOM * rel_tol * np.maximum(1.0, partial))
        over = partial > ceiling if ceiling is not None else np.zeros(chunk, bool)
        hit_done = int(np.argmax(done)) if done.any() else chunk
        hit_over = int(np.argmax(over)) if over.any() else chunk
        if hit_over < chunk and hit_over <= hit_done:
            pieces.append(math.fsum(terms[:hit_over + 1]))
            return TailSum(math.fsum(pieces), math.inf, used + hit_over + 1, False)
        if hit_done < chunk:
            pieces.append(math.fsum(terms[:hit_done + 1]))
            return TailSum(math.fsum(pieces), float(bound[hit_done]), used + hit_done + 1)
        pieces.append(math.fsum(terms))
        acc = float(partial[-1])
        w_next = float(weights[-1] * c[-1])
        used += chunk
        k0 += chunk
        chunk = min(2 * chunk, _MAX_CHUNK)
    raise TailTruncationError(f"tail did not converge within {MAX_TERMS} terms at r={r}")


def tail_analytic(n: int, r: float, alpha: float | AlphaOrder, rel_tol: float = REL_TOL,
                  ceiling: float | None = None) -> TailSum:
    """R_n(alpha) = sum_{k>n} k A_k(alpha) r^(k-1)."""
    alpha = AlphaOrder.of(alpha)
    r = check_radius(r)
    if n < 1:
        raise ValueError("n must be >= 1")
    a2 = 2 * alpha.value
    k = n + 1
    first = k * bound_analytic(k, alpha)
    return certified_tail(first, lambda ks: (ks + 1 - a2) / ks, k, r, rel_tol, ceiling)


def tail_coanalytic(m: int, r: float, alpha: float | AlphaOrder, rel_tol: float = REL_TOL,
                    ceiling: float | None = None) -> TailSum:
    """T_m(alpha) = sum_{k>m} k(k-1)/(k - 2 alpha) A_k(alpha) r^(k-1)."""
    alpha = AlphaOrder.of(alpha)
    r = check_radius(r)
    if m < 1:
        raise ValueError("m must be >= 1")
    a2 = 2 * alpha.value
    k = m + 1
    first = k * (k - 1) / (k - a2) * bound_analytic(k, alpha)
    return certified_tail(first, lambda ks: (ks - a2) / (ks - 1), k, r, rel_tol, ceiling)


def _side(side) -> Side:
    return side if isinstance(side, Side) else Side(side)


def tail_ctc(n: int, r: float, side: Side | str, rel_tol: float = REL_TOL,
             ceiling: float | None = None) -> TailSum:
    """Close-to-convex tails with weight k(k+1)(2k+1)/6 or k(k-1)(2k-1)/6."""
    r = check_radius(r)
    k = n + 1
    if k < 2:
        raise ValueError("n must be >= 1")
    if _side(side) is Side.ANALYTIC:
        first = k * (k + 1) * (2 * k + 1) / 6
        ratio = lambda ks: (ks + 2) * (2 * ks + 3) / (ks * (2 * ks + 1))  # noqa: E731
    else:
        first = k * (k - 1) * (2 * k - 1) / 6
        ratio = lambda ks: (ks + 1) * (2 * ks + 1) / ((ks - 1) * (2 * ks - 1))  # noqa: E731
    return certified_tail(first, ratio, k, r, rel_tol, ceiling)


def tail_mu(n: int, r: float, side: Side | str, rel_tol: float = REL_TOL,
            ceiling: float | None = None) -> TailSum:
    """Convex-family tails with weight k(k+1)/2 or k(k-1)/2."""
    r = check_radius(r)
    k = n + 1
    if k < 2:
        raise ValueError("n must be >= 1")
    if _side(side) is Side.ANALYTIC:
        first = k * (k + 1) / 2
        ratio = lambda ks: (ks + 2) / ks  # noqa: E731
    else:
        first = k * (k - 1) / 2
        ratio = lambda ks: (ks + 1) / (ks - 1)  # noqa: E731
    return certified_tail(first, ratio, k, r, rel_tol, ceiling)
