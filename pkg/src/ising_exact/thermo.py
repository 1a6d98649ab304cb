"""Bulk thermodynamics in zero field.

The free energy per site is

    -F/T = ln 2 + (1/8 pi^2) int int ln[ch_h ch_v - s_h cos th1 - s_v cos th2] dth1 dth2,

with ``ch = cosh 2K`` and ``s = sinh 2K``.  The inner angle is done in closed
form, ``(1/2 pi) int ln(a - b cos th) = ln((a + sqrt(a^2 - b^2)) / 2)``, which
leaves a one dimensional integral with at most a ``|th|`` kink at the critical
point.  The plain double integral is kept as an independent route.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from scipy import integrate

from .core import Branch, CouplingPoint, critical_temperature
from .errors import CapacityError, DomainError
from .series import RationalSeries
from .toeplitz import row_correlation

MAX_SERIES_ORDER = 30


@dataclass(frozen=True)
class FreeEnergyResult:
    value: float
    error: float
    branch: Branch


def _inner_log(a, b):
    return np.log(0.5 * (a + np.sqrt(np.maximum(a * a - b * b, 0.0))))


def onsager_free_energy(point: CouplingPoint, method: str = "reduced") -> FreeEnergyResult:
    """``-F/T`` per site for the infinite lattice.

    ``method="reduced"`` integrates the closed-form inner average;
    ``method="double"`` runs a two dimensional adaptive rule on the full
    integrand, which is slower and serves as a cross-check.
    """
    if not (point.T > 0):
        raise DomainError("temperature must be positive")
    Kv, Kh = point.Kv, point.Kh
    if Kv == 0 and Kh == 0:
        return FreeEnergyResult(math.log(2.0), 0.0, point.branch)
    ch = math.cosh(2 * Kh) * math.cosh(2 * Kv)
    sh, sv = math.sinh(2 * Kh), math.sinh(2 * Kv)
    if method == "reduced":
        # the logarithms grow like 2K; subtract it so the quadrature
        # sees an O(1) integrand
        shift = 2 * (Kv + Kh)
        def f(th):
            a = ch - sh * math.cos(th)
            return float(_inner_log(a, sv)) - shift + math.log(4.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(f, 0.0, math.pi, epsabs=1e-14, epsrel=1e-14, limit=400)
        value = math.log(2.0) + 0.5 * (val / math.pi + shift - math.log(4.0))
        return FreeEnergyResult(value, 0.5 * err / math.pi, point.branch)
    if method == "double":
        def g(t2, t1):
            return math.log(ch - sh * math.cos(t1) - sv * math.cos(t2))
        opts = {"epsabs": 1e-11, "epsrel": 1e-11, "limit": 200}
        val, err = integrate.nquad(g, [[0.0, math.pi], [0.0, math.pi]], opts=[opts, opts])
        return FreeEnergyResult(math.log(2.0) + 0.5 * val / math.pi**2, 0.5 * err / math.pi**2, point.branch)
    raise DomainError(f"unknown method {method!r}")


def spontaneous_magnetization(point: CouplingPoint) -> float:
    """``(1 - k^2)^(1/8)`` below the critical temperature, zero at or above it."""
    if point.branch is not Branch.BELOW_TC:
        return 0.0
    k = point.k
    return (1.0 - k * k) ** 0.125


def nearest_neighbour_correlations(point: CouplingPoint) -> tuple[float, float]:
    """``(<s00 s10>, <s00 s01>)``: the vertical and horizontal bond averages."""
    return row_correlation(1, point, "v"), row_correlation(1, point, "h")


def internal_energy(point: CouplingPoint) -> float:
    """Energy per site ``-Ev <s00 s10> - Eh <s00 s01>``."""
    cv, ch = nearest_neighbour_correlations(point)
    return -point.Ev * cv - point.Eh * ch


def internal_energy_from_free_energy(point: CouplingPoint, rel_step: float = 1e-4) -> float:
    """``-d(-F/T)/d(1/T)`` by a central difference of the quadrature."""
    beta = 1.0 / point.T
    h = rel_step * beta

    def f(b):
        return onsager_free_energy(CouplingPoint(point.Ev, point.Eh, 1.0 / b)).value

    return -(f(beta + h) - f(beta - h)) / (2 * h)


# ---------------------------------------------------------------------
# Exact series
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cos_moment(k: int) -> Fraction:
    """Average of ``cos(theta)**k`` over a period."""
    if k % 2:
        return Fraction(0)
    return Fraction(comb(k, k // 2), 2**k)


@lru_cache(maxsize=None)
def _pair_moment(m: int) -> Fraction:
    """Average of ``(cos th1 + cos th2)**m`` over two independent periods."""
    return sum((comb(m, j) * _cos_moment(j) * _cos_moment(m - j) for j in range(m + 1)), Fraction(0))


def _log_average(X: RationalSeries, order: int, step: int) -> RationalSeries:
    """``-sum_m X^m/m <(c1 + c2)^m>`` for a series ``X`` of valuation >= 1."""
    total = RationalSeries([], order, X.var)
    power = RationalSeries.one(X.var).truncate(order)
    for m in range(1, order + 1):
        power = (power * X).truncate(order)
        if m % step:
            continue
        mom = _pair_moment(m)
        if mom:
            total = total - power * (mom / m)
    return total


def free_energy_series(order: int, which: str = "high") -> RationalSeries:
    """Isotropic free energy as an exact series.

    ``which="high"``: ``-F/T = ln 2 + S(v)`` with ``v = tanh K``.
    ``which="low"``:  ``-F/T = 2K + S(u)`` with ``u = exp(-4K)``.
    """
    if order > MAX_SERIES_ORDER:
        raise CapacityError(f"series order is capped at {MAX_SERIES_ORDER}")
    if order < 0:
        raise DomainError("order must be non-negative")
    if which == "high":
        v = RationalSeries.variable("v")
        one = RationalSeries.one("v").truncate(order + 1)
        sq = v * v
        # X = 2 v (1 - v^2) / (1 + v^2)^2
        X = (2 * v * (1 - sq)) / ((one + sq) * (one + sq))
        base = (one + sq).log() - (one - sq).log()
        return (base + _log_average(X, order + 1, 1) * Fraction(1, 2)).truncate(order)
    if which == "low":
        u = RationalSeries.variable("u")
        one = RationalSeries.one("u").truncate(order + 1)
        # Y^2 = 4u (1 - u)^2 / (1 + u)^4; only even powers of Y survive the average
        Y2 = 4 * u * (one - u) ** 2 / (one + u) ** 4
        total = RationalSeries([], order + 1, "u")
        power = one
        for j in range(1, order + 1):
            power = (power * Y2).truncate(order + 1)
            total = total - power * (_pair_moment(2 * j) / (2 * j))
        return ((one + u).log() + total * Fraction(1, 2)).truncate(order)
    raise DomainError("which must be 'high' or 'low'")


def series_free_energy(point: CouplingPoint, order: int = MAX_SERIES_ORDER, which: str | None = None,
                       extrapolate: bool = True) -> float:
    """Evaluate the isotropic series at a temperature.

    Partial sums are Richardson-extrapolated in ``1/n`` when ``extrapolate``
    is set, which accelerates the algebraic convergence on the circle of
    convergence at the critical point.
    """
    if not point.is_isotropic:
        raise DomainError("the series are implemented for the isotropic lattice")
    K = point.Kv
    if which is None:
        which = "low" if point.branch is Branch.BELOW_TC else "high"
    S = free_energy_series(order, which)
    x = math.tanh(K) if which == "high" else math.exp(-4 * K)
    base = math.log(2.0) if which == "high" else 2 * K
    partial = np.cumsum([float(c) * x**i for i, c in enumerate(S.coeffs)])
    if not extrapolate or len(partial) < 8:
        return base + float(partial[-1])
    return base + _richardson(partial)


def _richardson(partial: np.ndarray, depth: int = 4) -> float:
    """Extrapolate ``S_n = S + c_2/n^2 + c_3/n^3 + ...`` from the last partial sums."""
    n = np.arange(1, len(partial) + 1, dtype=float)
    idx = np.arange(len(partial) - 2 * (depth + 1), len(partial), 2)
    ns, ss = n[idx], partial[idx]
    basis = np.column_stack([np.ones_like(ns)] + [ns ** -(p + 2) for p in range(depth)])
    coef, *_ = np.linalg.lstsq(basis, ss, rcond=None)
    return float(coef[0])


# ---------------------------------------------------------------------
# Singular structure at the critical point
# ---------------------------------------------------------------------

def log_singularity_amplitudes(E: float = 1.0, eps_range=(2e-3, 5e-2), samples: int = 40,
                               degree: int = 5) -> dict:
    """Fitted coefficient of ``(T - Tc)^2 ln|T - Tc|`` on each side of ``Tc``.

    Each side is fitted separately: a polynomial of the given degree plus
    ``eps^j ln|eps|`` for ``2 <= j <= degree``.
    """
    Tc = critical_temperature(E, E)
    eps = np.geomspace(*eps_range, samples)
    out = {}
    for side, sign in (("above", 1.0), ("below", -1.0)):
        e = sign * eps
        vals = np.array([onsager_free_energy(CouplingPoint(E, E, Tc + x)).value for x in e])
        lg = np.log(np.abs(e))
        cols = [e**j for j in range(degree + 1)] + [e**j * lg for j in range(2, degree + 1)]
        coef, *_ = np.linalg.lstsq(np.column_stack(cols), vals, rcond=None)
        out[side] = float(coef[degree + 1])
    out["relative_difference"] = abs(out["above"] - out["below"]) / abs(out["above"])
    return out


def thermo_summary(point: CouplingPoint, series_order: int | None = None) -> dict:
    fe = onsager_free_energy(point)
    out = {"free_energy": fe.value, "free_energy_error": fe.error,
           "magnetization": spontaneous_magnetization(point),
           "internal_energy": internal_energy(point), "branch": point.branch.value}
    if series_order is not None and point.is_isotropic:
        out["series_free_energy"] = series_free_energy(point, series_order)
    return out
