"""Exponential sums of edges and colorings, and squared-imbalance totals.

The transform used throughout maps a finitely supported f on the integers
to ``alpha -> sum_z f(z) * exp(2*pi*i*z*alpha)`` on [0, 1).  Only
magnitudes matter downstream, so the sign of the exponent is a pure
convention.  Phases are reduced exactly: for rational alpha = p/q the
phase of z is (z*p mod q)/q, so no large-argument trigonometry ever
happens.

``sum_sq_disc`` accumulates the squared color values of all translates of
an edge by a direct translate loop (exact integers); ``parseval_check``
compares it against uniform-grid quadrature of |chi_hat|^2 * |edge_hat|^2,
which is exact for trigonometric polynomials once the grid has more points
than twice the polynomial degree.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergraph import Coloring, SumEdge, edge_elements_array, translate_values
from .numtheory import gcd

TWO_PI = 2.0 * cmath.pi

# int64 is safe while |value * p| stays below 2^63; beyond that we fall back
# to exact Python integers.
_INT64_GUARD = 1 << 62


class GridTooCoarse(ValueError):
    """Quadrature grid too small to integrate the polynomial exactly."""


@dataclass(frozen=True)
class FourierPoint:
    alpha: Fraction
    value: complex


@dataclass(frozen=True)
class GridSpec:
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("grid size must be positive")


def _phases(values: np.ndarray, p: int, q: int) -> np.ndarray:
    """Fractional phases (v*p mod q)/q for nonnegative integer values."""
    if values.size and int(values.max()) * abs(p) < _INT64_GUARD:
        return ((values.astype(np.int64) * p) % q) / q
    return np.array([((int(v) * p) % q) / q for v in values], dtype=float)


def unit_exp_sum(values: np.ndarray, alpha: Fraction) -> complex:
    """sum over v of exp(2*pi*i*v*alpha), phases reduced mod 1 exactly."""
    ph = _phases(values, alpha.numerator, alpha.denominator)
    return complex(np.exp(TWO_PI * 1j * ph).sum())


def _cis_minus_one(r: int, q: int) -> complex:
    """exp(2*pi*i*r/q) - 1 evaluated as 2i*sin(pi*t)*exp(i*pi*t) with t the
    signed distance of r/q to its nearest integer.

    The naive exp-then-subtract form loses ~1e-9 relative accuracy when r/q
    is within ~1e-7 of an integer, which is exactly the regime the
    certificates operate in; the half-angle form keeps full precision.
    """
    t = r / q if 2 * r <= q else (r - q) / q
    return 2j * cmath.sin(cmath.pi * t) * cmath.exp(1j * cmath.pi * t)


def geometric_exp_sum(diff: int, length: int, alpha: Fraction) -> complex:
    """sum_{j<length} exp(2*pi*i*j*diff*alpha) in closed form."""
    p, q = alpha.numerator, alpha.denominator
    r = (diff * p) % q
    if r == 0:
        return complex(length)
    return _cis_minus_one((length * r) % q, q) / _cis_minus_one(r, q)


def indicator_fourier(e: SumEdge, alpha: Fraction, method: str = "auto") -> complex:
    """Exponential sum of the edge's element set at alpha.

    With no lattice collisions the double sum factorizes into a product of
    two geometric sums; ``auto`` uses that route whenever the injectivity
    criterion certifies it, and the direct element sum otherwise.
    """
    if method not in ("auto", "direct", "factorized"):
        raise ValueError(f"unknown method {method!r}")
    if method != "direct":
        g = gcd(e.d1, e.d2)
        factorizable = e.l1 * g <= e.d2 or e.l2 * g <= e.d1
        if method == "factorized" and not factorizable:
            raise ValueError("edge has lattice collisions; product form invalid")
        if factorizable:
            return (geometric_exp_sum(e.d1, e.l1, alpha)
                    * geometric_exp_sum(e.d2, e.l2, alpha))
    return unit_exp_sum(edge_elements_array(e), alpha)


def coloring_fourier(chi: Coloring, alpha: Fraction) -> complex:
    """sum_{z in [1, N]} chi(z) * exp(2*pi*i*z*alpha)."""
    p, q = alpha.numerator, alpha.denominator
    ph = _phases(np.arange(1, chi.n + 1, dtype=np.int64), p, q)
    return complex((chi.values * np.exp(TWO_PI * 1j * ph)).sum())


def sum_sq_disc(chi: Coloring, e: SumEdge) -> int:
    """Sum over all offsets of the squared color value of the translate.

    Offsets outside [-span, N] contribute nothing, so the sum is finite;
    the accumulation is exact integer arithmetic.
    """
    c = translate_values(chi, e)
    return int(np.dot(c, c))


def parseval_check(chi: Coloring, e: SumEdge, g: GridSpec) -> float:
    """Relative gap between the translate-loop total and grid quadrature.

    Requires m > 2 * (N + span): the integrand is a trigonometric
    polynomial of degree N - 1 + span, and uniform quadrature is exact
    strictly above twice the degree.  The result should be at numerical
    noise level (<= 1e-8).
    """
    span = e.span
    if g.m <= 2 * (chi.n + span):
        raise GridTooCoarse(
            f"m={g.m} <= 2*(n + span)={2 * (chi.n + span)}")
    lhs = sum_sq_disc(chi, e)
    rhs = quadrature_sum_sq(chi, [e], g.m)
    return abs(lhs - rhs) / lhs


def _grid_transform(positions: np.ndarray, weights: np.ndarray, m: int) -> np.ndarray:
    """|transform|^2 on the m-point grid via an FFT of the padded signal."""
    padded = np.zeros(m, dtype=np.float64)
    padded[positions % m] += weights
    return np.abs(np.fft.fft(padded)) ** 2


def edge_spectrum(e: SumEdge, m: int) -> list[FourierPoint]:
    """The edge's exponential sum sampled on the uniform grid t/m."""
    return [FourierPoint(alpha=Fraction(t, m),
                         value=indicator_fourier(e, Fraction(t, m)))
            for t in range(m)]


def quadrature_sum_sq(chi: Coloring, edges, m: int) -> float:
    """(1/m) * sum_t |chi_hat(t/m)|^2 * sum_E |edge_hat(t/m)|^2."""
    chi_power = _grid_transform(np.arange(1, chi.n + 1), chi.values.astype(np.float64), m)
    edge_power = np.zeros(m)
    for e in edges:
        els = edge_elements_array(e)
        if els[-1] >= m:
            raise GridTooCoarse(f"edge span {els[-1]} does not fit grid m={m}")
        edge_power += _grid_transform(els, np.ones(els.size), m)
    return float(np.mean(chi_power * edge_power))
