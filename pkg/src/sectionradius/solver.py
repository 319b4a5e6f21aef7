"""Radius of univalence as the root of a gap function, plus the problems built on it.

A gap function is a lower bound on the Starkov/Bazilevich functional of a
rescaled section: leading distortion term minus two coefficient tails.
Wherever it is certifiably positive the section is univalent.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ._types import AlphaOrder, ViolationReport, check_radius, collect_witnesses
from .distortion import two_point_bound_A
from .tails import (REL_TOL, Side, TailSum, tail_analytic, tail_coanalytic, tail_ctc,
                    tail_mu)

SCAN_STEP = 1e-3
SCAN_END = 1 - 1e-6
BRACKET_WIDTH = 1e-12
TIGHTEN = 1e-3
MAX_RHO = 0.999


class SolverError(RuntimeError):
    pass


class NoSignChange(SolverError):
    """The gap function stays positive (or never becomes positive) on the scan."""


class AmbiguousSign(SolverError):
    """|gap| stays within the certified tail error even after tightening."""


class Family(enum.Enum):
    FALPHA = "falpha"
    CONVEX_MU = "mu"
    CLOSE_TO_CONVEX_PSI = "ctc"


@dataclass(frozen=True)
class GapQuery:
    family: Family
    n: int
    m: int
    alpha: AlphaOrder | None = None

    def __post_init__(self) -> None:
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if family is Family.FALPHA:
            if self.alpha is None:
                raise ValueError("the falpha family needs an alpha")
            alpha = AlphaOrder.of(self.alpha)
            alpha.require_nonnegative()
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is not None:
            raise ValueError(f"family {family.value} takes no alpha")
        if self.n < 1 or self.m < 2:
            raise ValueError(f"sections need n >= 1 and m >= 2, got n={self.n}, m={self.m}")

    @classmethod
    def falpha(cls, alpha: float | AlphaOrder, n: int, m: int) -> "GapQuery":
        return cls(Family.FALPHA, n, m, AlphaOrder.of(alpha))

    @classmethod
    def mu(cls, n: int, m: int) -> "GapQuery":
        return cls(Family.CONVEX_MU, n, m)

    @classmethod
    def ctc(cls, n: int, m: int) -> "GapQuery":
        return cls(Family.CLOSE_TO_CONVEX_PSI, n, m)

    def with_order(self, n: int, m: int | None = None) -> "GapQuery":
        return GapQuery(self.family, n, n if m is None else m, self.alpha)


@dataclass
class RadiusSolution:
    root: float
    bracket_low: float
    bracket_high: float
    residual: float
    iterations: int
    tail_error: float
    unique_bracket: bool
    sign_changes: int = 1
    gap_low: float = field(default=math.nan, repr=False)
    gap_high: float = field(default=math.nan, repr=False)

    def as_dict(self) -> dict:
        return {
            "root": self.root,
            "bracket_low": self.bracket_low,
            "bracket_high": self.bracket_high,
            "residual": self.residual,
            "iterations": self.iterations,
            "tail_error": self.tail_error,
            "unique_bracket": self.unique_bracket,
            "sign_changes": self.sign_changes,
        }


def leading_term(q: GapQuery, r: float) -> float:
    if q.family is Family.FALPHA:
        return two_point_bound_A(r, q.alpha)
    if q.family is Family.CONVEX_MU:
        return (1 - r) / (1 + r) ** 3
    # (1/12r) x^3 (1 - x^6), x = (1-r)/(1+r); 1 - x^6 via expm1 for small r
    log_x = math.log1p(-r) - math.log1p(r)
    return math.exp(3 * log_x) * -math.expm1(6 * log_x) / (12 * r)


def _tails(q: GapQuery, r: float, rel_tol: float,
           ceiling: float | None) -> tuple[TailSum, TailSum]:
    if q.family is Family.FALPHA:
        first = tail_analytic(q.n, r, q.alpha, rel_tol, ceiling)
        rest = None if ceiling is None else ceiling - first.value
        if not first.complete:
            return first, TailSum(0.0, math.inf, 0, False)
        return first, tail_coanalytic(q.m, r, q.alpha, rel_tol, rest)
    fn = tail_mu if q.family is Family.CONVEX_MU else tail_ctc
    first = fn(q.n, r, Side.ANALYTIC, rel_tol, ceiling)
    if not first.complete:
        return first, TailSum(0.0, math.inf, 0, False)
    rest = None if ceiling is None else ceiling - first.value
    return first, fn(q.m, r, Side.COANALYTIC, rel_tol, rest)


def gap_eval(q: GapQuery, r: float, rel_tol: float = REL_TOL) -> tuple[float, float]:
    """Return (gap value, tail_error) at radius r."""
    r = check_radius(r)
    t1, t2 = _tails(q, r, rel_tol, None)
    return leading_term(q, r) - t1.value - t2.value, t1.truncation_bound + t2.truncation_bound


def certified_sign(q: GapQuery, r: float) -> int:
    """+1 / -1 when the sign of the gap at r is certified, 0 when it is not.

    Tails are cut short once they exceed the leading term: partial sums only
    grow, so that alone certifies a negative gap.
    """
    r = check_radius(r)
    lead = leading_term(q, r)
    for rel_tol in (REL_TOL, REL_TOL * TIGHTEN):
        t1, t2 = _tails(q, r, rel_tol, lead)
        if not (t1.complete and t2.complete):
            return -1
        value = lead - t1.value - t2.value
        err = t1.truncation_bound + t2.truncation_bound
        if value > err:
            return 1
        if value < -err:
            return -1
    return 0


def _scan_points() -> list[float]:
    count = int(round(1 / SCAN_STEP))
    return [1e-6] + [j * SCAN_STEP for j in range(1, count)]


def find_radius(q: GapQuery, width: float = BRACKET_WIDTH) -> RadiusSolution:
    """Root of the gap function by a 1e-3 sign scan followed by certified bisection."""
    points = _scan_points()
    signs = [certified_sign(q, r) for r in points]
    if 0 in signs:
        r_bad = points[signs.index(0)]
        raise AmbiguousSign(f"gap sign undecidable at r={r_bad} for {q}")
    if signs[0] < 0:
        raise NoSignChange(f"gap is not positive near r=0 for {q}")
    changes = [i for i in range(1, len(signs)) if signs[i] != signs[i - 1]]
    if changes:
        i = changes[0]
        low, high = points[i - 1], points[i]
    else:
        s_end = certified_sign(q, SCAN_END)
        if s_end > 0:
            raise NoSignChange(f"gap stays positive up to r={SCAN_END} for {q}")
        if s_end == 0:
            raise AmbiguousSign(f"gap sign undecidable at r={SCAN_END} for {q}")
        changes = [len(points)]
        low, high = points[-1], SCAN_END
    iterations = 0
    while high - low > width:
        mid = 0.5 * (low + high)
        s = certified_sign(q, mid)
        if s == 0:
            raise AmbiguousSign(f"gap sign undecidable at r={mid!r} for {q}")
        if s > 0:
            low = mid
        else:
            high = mid
        iterations += 1
    root = 0.5 * (low + high)
    residual, err = gap_eval(q, root)
    g_low, e_low = gap_eval(q, low)
    g_high, e_high = gap_eval(q, high)
    return RadiusSolution(
        root=root, bracket_low=low, bracket_high=high, residual=residual,
        iterations=iterations, tail_error=max(err, e_low, e_high),
        unique_bracket=len(changes) == 1, sign_changes=len(changes),
        gap_low=g_low, gap_high=g_high,
    )


def _family_query(family, alpha, n: int) -> GapQuery:
    family = Family(family)
    return GapQuery(family, n, n, AlphaOrder.of(alpha) if family is Family.FALPHA else None)


def min_sections(rho: float, family: Family | str = Family.FALPHA,
                 alpha: float | AlphaOrder | None = None, n_max: int = 100_000) -> int:
    """Smallest n >= 2 with gap(n, n, rho) certifiably positive (value > tail_error)."""
    rho = check_radius(rho, "rho")
    if rho > MAX_RHO:
        raise ValueError(f"rho must not exceed {MAX_RHO}")
    for n in range(2, n_max + 1):
        value, err = gap_eval(_family_query(family, alpha, n), rho)
        if value > err:
            return n
    raise SolverError(f"no section order up to {n_max} works at rho={rho}")


def table_family(alpha: float) -> tuple[Family, float | None]:
    """Column dispatch: alpha = -1/2 maps to the convex-family gap mu."""
    a = AlphaOrder.of(alpha)
    if a.value < 0:
        if abs(a.value + 0.5) > 1e-9:
            raise ValueError("negative alpha is only tabulated at -1/2")
        return Family.CONVEX_MU, None
    return Family.FALPHA, a.value


def _threads() -> int:
    env = os.environ.get("SECTION_RADIUS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def min_sections_table(rhos, alphas, threads: int | None = None) -> list[list[int]]:
    """Grid of minimal section orders, rows indexed by rho, columns by alpha."""
    cells = [(rho, alpha) for rho in rhos for alpha in alphas]

    def solve(cell):
        family, a = table_family(cell[1])
        return min_sections(cell[0], family, a)

    workers = threads or _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(solve, cells))
    else:
        flat = [solve(c) for c in cells]
    width = len(alphas)
    return [flat[i:i + width] for i in range(0, len(flat), width)]


class BoundFamily(enum.Enum):
    """Closed-form lower bounds for r_{n,n}; value is (cli name, minimal n)."""

    HALF_ORDER_LOG = ("halforder", 3)
    CONVEX_THM_B = ("thmB", 7)
    CTC_THM_A = ("thmA", 15)
    CTC_CONVOLUTION = ("ctc3log", 5)
    JENKINS_STYLE = ("jenkins", 8)

    @property
    def cli_name(self) -> str:
        return self.value[0]

    @property
    def min_n(self) -> int:
        return self.value[1]

    @classmethod
    def from_name(cls, name: str) -> "BoundFamily":
        for member in cls:
            if member.cli_name == name or member.name == name:
                return member
        raise ValueError(f"unknown bound family {name!r}")


def asymptotic_bound(family: BoundFamily | str, n: int) -> float:
    family = family if isinstance(family, BoundFamily) else BoundFamily.from_name(family)
    if n < family.min_n:
        raise ValueError(f"{family.cli_name} bound is valid for n >= {family.min_n}, got {n}")
    ln = math.log(n)
    if family is BoundFamily.HALF_ORDER_LOG:
        return 1 - 2 * ln / n
    if family is BoundFamily.CONVEX_THM_B:
        return 1 - (4 * ln - 2 * math.log(ln)) / n
    if family is BoundFamily.CTC_THM_A:
        return 1 - (7 * ln - 4 * math.log(ln)) / n
    if family is BoundFamily.CTC_CONVOLUTION:
        return 1 - 3 * ln / n
    return 1 - (4 * ln - math.log(4 * ln)) / n


def t_function(x: float, n: int) -> float:
    """t(x, n) = 2 e^(-x) (2n/x - 1)^2; positivity of 1 - t certifies the half-order bound."""
    if not (0 < x <= n):
        raise ValueError(f"x must lie in (0, n], got x={x}, n={n}")
    return 2 * math.exp(-x) * (2 * n / x - 1) ** 2


def verify_halforder_bound(n_max: int, n_min: int = 3) -> ViolationReport:
    """Check r_{n,n} > 1 - 2 log n / n at alpha = 1/2 for n = n_min..n_max."""
    if n_min < 3 or n_max < n_min:
        raise ValueError("need 3 <= n_min <= n_max")
    margins, inputs = [], []
    for n in range(n_min, n_max + 1):
        sol = find_radius(GapQuery.falpha(0.5, n, n))
        bound = asymptotic_bound(BoundFamily.HALF_ORDER_LOG, n)
        # bracket_low is certified below the root, so this margin is conservative
        margins.append(sol.bracket_low - bound)
        inputs.append((n, sol.root, bound))
    worst = min(margins)
    violations = sum(1 for m in margins if m < 0)
    return ViolationReport(
        samples=len(margins), violations=violations, worst_margin=worst,
        witnesses=collect_witnesses(margins, inputs),
        details={"worst_n": inputs[margins.index(worst)][0]},
    )
