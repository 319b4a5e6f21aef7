"""Certified radii of univalence for partial sums of harmonic maps in the class F(alpha)."""

from ._types import AlphaOrder, Branch, ViolationReport
from .coefficients import (CoefficientBoundTable, bound_analytic, bound_coanalytic,
                           build_section, extremal_eval, extremal_taylor)
from .distortion import (convex_derivative_lower, growth_lower_L, quadrature_oracle_L,
                         two_point_bound_A)
from .harmonic import HarmonicPolynomial
from .solver import (AmbiguousSign, BoundFamily, Family, GapQuery, NoSignChange,
                     RadiusSolution, asymptotic_bound, find_radius, gap_eval, min_sections,
                     min_sections_table, t_function, verify_halforder_bound)
from .tails import Side, TailSum, tail_analytic, tail_coanalytic, tail_ctc, tail_mu
from .verification import (GridSpec, injectivity_scan, starkov_min, verify_distortion,
                           verify_sense_preserving)

__version__ = "0.1.0"
