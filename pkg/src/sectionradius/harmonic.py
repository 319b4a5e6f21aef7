"""Harmonic polynomials z -> sum a_k z^k + conj(sum b_k z^k)."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np


def _horner(coeffs: np.ndarray, z):
    # coeffs[0] multiplies z^1
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in coeffs[::-1]:
        acc = (acc + c) * z
    return acc


@dataclass(eq=False)
class HarmonicPolynomial:
    """A section s_{n,m}(f; theta) with its rotation folded into the co-analytic part.

    ``analytic`` holds a_1..a_n with a_1 = 1, ``coanalytic`` holds b_1..b_m
    with b_1 = 0. On construction the co-analytic list is replaced by
    e^{i theta} b_k, so the map evaluated is h(z) + conj(e^{i theta} g(z)).
    """

    analytic: np.ndarray
    coanalytic: np.ndarray
    rotation: float = 0.0

    def __post_init__(self) -> None:
        a = np.atleast_1d(np.asarray(self.analytic, dtype=complex)).copy()
        b = np.atleast_1d(np.asarray(self.coanalytic, dtype=complex)).copy()
        if a.size == 0 or abs(a[0] - 1) > 1e-14:
            raise ValueError("analytic part must be normalised with a_1 = 1")
        if b.size == 0:
            b = np.zeros(1, dtype=complex)
        if abs(b[0]) > 1e-14:
            raise ValueError("co-analytic part must have b_1 = 0")
        a[0], b[0] = 1.0, 0.0
        self.analytic = a
        self.coanalytic = b * cmath.exp(1j * float(self.rotation))

    @classmethod
    def identity(cls) -> "HarmonicPolynomial":
        return cls([1.0], [0.0])

    @property
    def n(self) -> int:
        return self.analytic.size

    @property
    def m(self) -> int:
        return self.coanalytic.size

    def h(self, z):
        return _horner(self.analytic, z)

    def g(self, z):
        return _horner(self.coanalytic, z)

    def __call__(self, z):
        return self.h(z) + np.conj(self.g(z))

    def dh(self, z):
        return _poly_derivative(self.analytic, z)

    def dg(self, z):
        return _poly_derivative(self.coanalytic, z)

    def jacobian(self, z):
        return np.abs(self.dh(z)) ** 2 - np.abs(self.dg(z)) ** 2

    def rescaled(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients of z -> s(rz)/r: (a_k r^{k-1}, b_k r^{k-1})."""
        pa = r ** np.arange(self.n)
        pb = r ** np.arange(self.m)
        return self.analytic * pa, self.coanalytic * pb


def _poly_derivative(coeffs: np.ndarray, z):
    # d/dz sum c_k z^k = sum k c_k z^{k-1}
    k = np.arange(1, coeffs.size + 1)
    d = coeffs * k
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in d[:0:-1]:
        acc = (acc + c) * z
    return acc + d[0]
