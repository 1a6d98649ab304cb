"""Painleve structures of the diagonal correlation and of its scaling limit.

Exact side: the sigma-form of Painleve VI is checked coefficient by
coefficient on the rational series of ``C(N, N)``.

Numerical side: the Painleve III transcendent ``eta(theta)`` with the
exponentially decaying boundary condition ``eta ~ 1 - (2 lam/pi) K0(2 theta)``
is integrated inward in the variables ``y = log eta`` and ``x = log theta``,
where the equation reads ``y_xx = 2 e^{2x} sinh(2y)``.  The scaling
functions

    G_pm(r) = (1 -+ eta) / (2 sqrt(eta)) * exp(I/4),
    I(theta) = int_theta^inf s (4 sinh^2 y - y_s^2) ds,

are read from the same solution with ``theta = r/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize, special

from .core import Branch
from .errors import CapacityError, DomainError, NumericError, RangeError
from .series import RationalSeries
from .toeplitz import (MAX_SERIES_N, PrefactoredSeries, SymbolParams, critical_amplitude,
                       diagonal_series, fft_coefficients, leading_minors)

# ---------------------------------------------------------------------
# Painleve VI, sigma form
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaSeries:
    sigma: RationalSeries
    N: int
    branch: Branch


def sigma_series(N: int, order: int, branch: Branch) -> SigmaSeries:
    """``sigma = t(t-1) d/dt log C(N,N) - 1/4`` above, ``- t/4`` below."""
    corr: PrefactoredSeries = diagonal_series(N, order + 1, branch)
    t = RationalSeries.variable()
    S = corr.series
    log_derivative = S.derivative() / S
    sigma = t * (t - 1) * log_derivative
    if branch is Branch.ABOVE_TC:
        sigma = sigma + (t - 1) * corr.exponent - Fraction(1, 4)
    else:
        sigma = sigma - t / 4
    return SigmaSeries(sigma.truncate(order), N, branch)


def pvi_residual(sigma: RationalSeries, N: int) -> RationalSeries:
    """Left-hand side of the sigma-form, which vanishes on a solution."""
    t = RationalSeries.variable(sigma.var)
    d1 = sigma.derivative()
    d2 = d1.derivative()
    lhs = (t * (t - 1) * d2) ** 2
    lhs = lhs - N * N * ((t - 1) * d1 - sigma) ** 2
    lhs = lhs + 4 * d1 * ((t - 1) * d1 - sigma - Fraction(1, 4)) * (t * d1 - sigma)
    return lhs


def pvi_sigma_residual(N: int, order: int, branch: Branch | str) -> RationalSeries:
    """Residual of the sigma-form on the exact series, known through ``t**order``."""
    branch = _branch(branch)
    if N > MAX_SERIES_N:
        raise CapacityError(f"series are available for N <= {MAX_SERIES_N}")
    sig = sigma_series(N, order + 2, branch)
    res = pvi_residual(sig.sigma, N)
    if res.order < order + 1:
        raise CapacityError("series order insufficient for the requested residual order")
    return res.truncate(order + 1)


def _branch(branch) -> Branch:
    if isinstance(branch, Branch):
        return branch
    mapping = {"low": Branch.BELOW_TC, "below": Branch.BELOW_TC, "-": Branch.BELOW_TC,
               "high": Branch.ABOVE_TC, "above": Branch.ABOVE_TC, "+": Branch.ABOVE_TC}
    try:
        return mapping[branch]
    except KeyError:
        raise DomainError(f"unknown branch {branch!r}") from None


# ---------------------------------------------------------------------
# Painleve III and the scaling functions
# ---------------------------------------------------------------------

THETA_MAX = 12.0
THETA_MIN = 1e-7


def _tail_integral(lam: float, theta: float) -> float:
    """``I(theta)`` from the linearised solution beyond ``theta``."""
    if lam == 0.0:
        return 0.0
    c = 16.0 * lam * lam / math.pi**2
    val, _ = integrate.quad(lambda s: s * c * (special.k0(2 * s) ** 2 - special.k1(2 * s) ** 2),
                            theta, np.inf, epsabs=1e-18, epsrel=1e-13, limit=200)
    return val


@dataclass
class EtaSolution:
    lam: float
    theta_min: float
    theta_max: float
    error_estimate: float
    _dense: object

    def _state(self, theta):
        theta = np.asarray(theta, dtype=float)
        if np.any(theta < self.theta_min * (1 - 1e-12)) or np.any(theta > self.theta_max):
            raise RangeError(f"theta outside the solved range [{self.theta_min}, {self.theta_max}]")
        if self._dense is None:
            z = np.zeros_like(theta)
            return z, z, z
        return self._dense(np.log(theta))

    def eta(self, theta):
        return np.exp(self._state(theta)[0])

    def deta(self, theta):
        y, v, _ = self._state(theta)
        return np.exp(y) * v / np.asarray(theta, dtype=float)

    def log_integral(self, theta):
        return self._state(theta)[2]

    def ode_residual(self, theta) -> np.ndarray:
        """Pointwise residual of the equation in the original variables."""
        theta = np.asarray(theta, dtype=float)
        if self._dense is None:
            return np.zeros_like(theta)
        h = 5e-3
        x = np.log(theta)
        v = lambda xx: self._dense(xx)[1]
        vx = (-v(x + 2 * h) + 8 * v(x + h) - 8 * v(x - h) + v(x - 2 * h)) / (12 * h)
        return vx - 2 * theta**2 * np.sinh(2 * self._dense(x)[0])


def piii_solve(lam: float = 1.0, theta_min: float = THETA_MIN, theta_max: float = THETA_MAX,
               rtol: float = 1e-12) -> EtaSolution:
    """Integrate the Painleve III transcendent inward from ``theta_max``."""
    if lam < 0:
        raise DomainError("lambda must be non-negative")
    if not (0 < theta_min < theta_max):
        raise DomainError("need 0 < theta_min < theta_max")
    if lam == 0.0:
        return EtaSolution(0.0, theta_min, theta_max, 0.0, None)

    eps = 2 * lam / math.pi * special.k0(2 * theta_max)
    y0 = math.log1p(-eps)
    dy_dtheta = (4 * lam / math.pi * special.k1(2 * theta_max)) / (1 - eps)
    state0 = [y0, theta_max * dy_dtheta, _tail_integral(lam, theta_max)]

    def rhs(x, s):
        y, v, _ = s
        th2 = math.exp(2 * x)
        sh = math.sinh(y)
        return [v, 2 * th2 * math.sinh(2 * y), -(4 * th2 * sh * sh - v * v)]

    def blowup(x, s):
        return s[0] + 60.0

    blowup.terminal = True
    sol = integrate.solve_ivp(rhs, [math.log(theta_max), math.log(theta_min)], state0,
                              method="DOP853", rtol=rtol, atol=1e-15, dense_output=True,
                              events=blowup)
    if sol.status == 1:
        where = math.exp(sol.t_events[0][0])
        raise NumericError(f"solution becomes singular near theta = {where:.6g}", residual=where)
    if sol.status != 0:
        where = math.exp(sol.t[-1])
        raise NumericError(f"integration failed near theta = {where:.6g}: {sol.message}", residual=where)
    # the asymptotic seed drops terms of order K0(2 theta_max)^2
    err = max(eps * eps, rtol)
    return EtaSolution(lam, theta_min, theta_max, err, sol.sol)


_DEFAULT_SOLUTIONS: dict[float, EtaSolution] = {}


def _default_solution(lam: float) -> EtaSolution:
    if lam not in _DEFAULT_SOLUTIONS:
        _DEFAULT_SOLUTIONS[lam] = piii_solve(lam)
    return _DEFAULT_SOLUTIONS[lam]


def scaling_G(r, branch: Branch | str = Branch.BELOW_TC, lam: float = 1.0,
              solution: EtaSolution | None = None):
    """Scaling function ``G_-`` (below) or ``G_+`` (above) at distance ``r``."""
    branch = _branch(branch)
    sol = solution or _default_solution(lam)
    theta = np.asarray(r, dtype=float) / 2
    eta = sol.eta(theta)
    factor = np.exp(sol.log_integral(theta) / 4) / (2 * np.sqrt(eta))
    sign = -1.0 if branch is Branch.ABOVE_TC else 1.0
    return (1 + sign * eta) * factor


def small_r_amplitude(solution: EtaSolution | None = None, r_values=(1e-6, 1e-5, 1e-4)) -> dict:
    """Estimate ``A_G = lim r^(1/4) G(r)`` from both branches.

    The branch average cancels the term linear in ``eta``; a fit in
    ``(1, r log r, r)`` removes the leftover small-r drift.
    """
    sol = solution or _default_solution(1.0)
    r = np.asarray(r_values, dtype=float)
    gm = scaling_G(r, Branch.BELOW_TC, solution=sol) * r**0.25
    gp = scaling_G(r, Branch.ABOVE_TC, solution=sol) * r**0.25
    avg = 0.5 * (gm + gp)
    if len(r) >= 3:
        basis = np.column_stack([np.ones_like(r), r * np.log(r), r])[:, : len(r)]
        coef, *_ = np.linalg.lstsq(basis, avg, rcond=None)
        amp = float(coef[0])
    else:
        amp = float(avg[0])
    return {"A_G": amp, "below": gm.tolist(), "above": gp.tolist(), "r": r.tolist(),
            "branch_spread": float(abs(gm[0] - gp[0]) / avg[0])}


def small_theta_exponent(solution: EtaSolution | None = None, thetas=None) -> float:
    """Leading exponent ``p`` in ``eta ~ theta^p (a + b log theta)`` as ``theta -> 0``."""
    sol = solution or _default_solution(1.0)
    th = np.geomspace(sol.theta_min * 10, sol.theta_min * 1e3, 12) if thetas is None else np.asarray(thetas)
    eta = sol.eta(th)

    def resid(params):
        p, a, b = params
        return np.log(eta) - (p * np.log(th) + np.log(np.abs(a + b * np.log(th))))

    fit = optimize.least_squares(resid, [1.0, 0.0, -1.0])
    return float(fit.x[0])


def diagonal_mass_amplitude(ts=(0.6, 0.7, 0.8, 0.9, 0.95), window=(10.0, 30.0)) -> dict:
    """``A_kappa = lim (1 - t) / kappa`` from decay of lattice diagonal correlations.

    ``kappa`` is the fitted decay rate per diagonal step of ``C(N, N)``
    above the critical point, using ``N`` between ``window`` multiples of
    ``1/(1 - t)``.  The ratio ``(1 - t)/kappa`` is extrapolated to ``t = 1``
    with a quadratic in ``1 - t``.
    """
    ratios = []
    for t in ts:
        lo, hi = int(window[0] / (1 - t)), int(window[1] / (1 - t))
        params = SymbolParams(0.0, 1.0 / math.sqrt(t))
        table = fft_coefficients(params, hi)
        pos = np.array([table[n] for n in range(hi + 1)])
        neg = np.array([table[-n] for n in range(hi + 1)])
        D = leading_minors(neg, pos, hi)
        Ns = np.arange(lo, hi + 1, dtype=float)
        basis = np.column_stack([np.ones_like(Ns), -Ns, np.log(Ns), 1 / Ns])
        coef, *_ = np.linalg.lstsq(basis, np.log(D[lo:hi + 1]), rcond=None)
        ratios.append((1 - t) / coef[1])
    x = 1 - np.asarray(ts)
    intercept = np.polyfit(x, ratios, min(3, len(ts) - 1))[-1]
    return {"A_kappa": float(intercept), "t": list(ts), "ratios": [float(v) for v in ratios]}


@dataclass(frozen=True)
class TracyReport:
    A_G: float
    A_kappa: float
    A_c: float
    ratio: float
    branch_spread: float

    @property
    def passed(self) -> bool:
        return abs(self.ratio - 1) < 1e-3


def tracy_identity_check(lam: float = 1.0) -> TracyReport:
    """Compare ``A_G A_kappa^(1/4)`` with the critical lattice amplitude."""
    if lam != 1.0:
        raise DomainError("the amplitude identity only applies to the lattice solution lambda = 1")
    amp = small_r_amplitude()
    kappa = diagonal_mass_amplitude()
    A_c = float(critical_amplitude())
    ratio = amp["A_G"] * kappa["A_kappa"] ** 0.25 / A_c
    return TracyReport(amp["A_G"], kappa["A_kappa"], A_c, ratio, amp["branch_spread"])


def scaling_convergence(Ns=(8, 16, 32, 64), r_values=None) -> dict:
    """Max deviation of ``(1-t)^(-1/4) C(N,N)`` from ``G_-(r)`` along ``t = exp(-2r/N)``."""
    r_values = np.linspace(1.0, 4.0, 13) if r_values is None else np.asarray(r_values)
    G = scaling_G(r_values, Branch.BELOW_TC)
    out = {}
    for N in Ns:
        dev = 0.0
        for r, g in zip(r_values, G):
            t = math.exp(-2 * r / N)
            table = fft_coefficients(SymbolParams(0.0, math.sqrt(t)), N)
            pos = np.array([table[n] for n in range(N + 1)])
            neg = np.array([table[-n] for n in range(N + 1)])
            C = leading_minors(neg, pos, N)[N]
            dev = max(dev, abs((1 - t) ** -0.25 * C - g))
        out[N] = dev
    return out


# ---------------------------------------------------------------------
# Meson masses in a weak field
# ---------------------------------------------------------------------

def _bessel_combination(z):
    return special.jv(1 / 3, z) + special.jv(-1 / 3, z)


def meson_spectrum(count: int) -> list[float]:
    """Positive roots of ``J_{1/3}(z) + J_{-1/3}(z)`` with ``z = lam^{3/2}/3``."""
    if count < 0:
        raise DomainError("count must be non-negative")
    if count > 50:
        raise CapacityError("meson spectrum is capped at 50 roots")
    roots: list[float] = []
    z_prev, f_prev = 1e-3, _bessel_combination(1e-3)
    step = 0.05
    while len(roots) < count:
        z = z_prev + step
        f = _bessel_combination(z)
        if f_prev * f < 0:
            zr = optimize.brentq(_bessel_combination, z_prev, z, xtol=1e-15, rtol=1e-15)
            roots.append((3 * zr) ** (2 / 3))
        z_prev, f_prev = z, f
    return roots


def meson_spectrum_airy(count: int) -> list[float]:
    """Same spectrum from the Airy zeros, ``lam_j = 2^(2/3) |a_j|``."""
    if count == 0:
        return []
    zeros = special.ai_zeros(count)[0]
    return [float(2 ** (2 / 3) * abs(a)) for a in zeros]
