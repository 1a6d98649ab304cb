"""Correlations of the zero-field lattice as Toeplitz determinants.

The symbol is

    phi(z) = [(1 - a1 z)(1 - a2/z) / ((1 - a1/z)(1 - a2 z))]^(1/2),  z = e^{i theta},

with ``a1 = 0, a2 = k`` on the diagonal and
``a1 = e^{-2Kv} tanh Kh, a2 = e^{-2Kv} coth Kh`` along a row.  The
correlation is ``D_N = det[a_{i-j}]`` with ``a_n`` the Fourier coefficients.

Three independent routes to the coefficients are provided: adaptive
quadrature, the FFT trapezoid rule and closed hypergeometric forms at high
precision.  On the diagonal, exact rational series in ``t`` are available.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from .core import Branch, CouplingPoint
from .errors import CapacityError, DomainError, NumericError
from .precision import high_precision, working_digits
from .series import RationalSeries, series_determinant, series_solve

MAX_NUMERIC_N = 64
MAX_SERIES_N = 12
FLOAT_LU_LIMIT = 32


class NearSingularWarning(RuntimeWarning):
    """Emitted when quadrature runs close to the critical symbol."""


@dataclass(frozen=True)
class SymbolParams:
    alpha1: float
    alpha2: float

    def __post_init__(self):
        if not (0.0 <= self.alpha1 < 1.0):
            raise DomainError(f"alpha1 must lie in [0, 1), got {self.alpha1}")
        if not (self.alpha2 >= 0.0):
            raise DomainError(f"alpha2 must be non-negative, got {self.alpha2}")

    @classmethod
    def diagonal(cls, point: CouplingPoint) -> "SymbolParams":
        if point.branch is Branch.AT_TC:
            return cls(0.0, 1.0)
        return cls(0.0, point.k)

    @classmethod
    def row(cls, point: CouplingPoint, axis: str = "h") -> "SymbolParams":
        """Symbol for correlations along the horizontal (``"h"``) or vertical axis."""
        if axis == "h":
            Kv, Kh = point.Kv, point.Kh
        elif axis == "v":
            Kv, Kh = point.Kh, point.Kv
        else:
            raise DomainError("axis must be 'h' or 'v'")
        if point.branch is Branch.AT_TC and point.is_isotropic:
            return cls(math.exp(-2 * Kv) * math.tanh(Kh), 1.0)
        return cls(math.exp(-2 * Kv) * math.tanh(Kh), math.exp(-2 * Kv) / math.tanh(Kh))

    @classmethod
    def row_hp(cls, point: CouplingPoint, axis: str = "h") -> "SymbolParams":
        """Row symbol with parameters computed in multiprecision."""
        if point.branch is Branch.AT_TC and point.is_isotropic:
            K = mpmath.asinh(1) / 2
            return cls(mpmath.exp(-2 * K) * mpmath.tanh(K), mpmath.mpf(1))
        Ev, Eh, T = (mpmath.mpf(point.Ev), mpmath.mpf(point.Eh), mpmath.mpf(point.T))
        Kv, Kh = (Ev / T, Eh / T) if axis == "h" else (Eh / T, Ev / T)
        return cls(mpmath.exp(-2 * Kv) * mpmath.tanh(Kh), mpmath.exp(-2 * Kv) / mpmath.tanh(Kh))

    @property
    def critical(self) -> bool:
        return self.alpha2 == 1.0

    @property
    def decay(self) -> float:
        """Geometric decay rate of the Fourier coefficients (``< 1`` off criticality)."""
        a2 = self.alpha2 if self.alpha2 <= 1.0 else 1.0 / self.alpha2
        return max(self.alpha1, a2)


def symbol(theta, params: SymbolParams):
    """Values of the generating function on the unit circle."""
    theta = np.asarray(theta, dtype=float)
    z = np.exp(1j * theta)
    a1, a2 = params.alpha1, params.alpha2
    first = np.sqrt(1 - a1 * z) / np.sqrt(1 - a1 / z)
    if a2 < 1.0:
        return first * np.sqrt(1 - a2 / z) / np.sqrt(1 - a2 * z)
    if a2 == 1.0:
        phase = np.mod(theta, 2 * np.pi)
        return first * np.exp(0.5j * (np.pi - phase))
    b = 1.0 / a2
    return -first / z * np.sqrt(1 - b * z) / np.sqrt(1 - b / z)


# ---------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------

def _quad_coefficient(n: int, params: SymbolParams) -> tuple[float, float]:
    def integrand(theta):
        return (symbol(theta, params) * np.exp(-1j * n * theta)).real

    dist = abs(math.log(params.alpha2)) if 0 < params.alpha2 != 1.0 else 1.0
    scale = min(max(dist, 1e-6), 0.5)
    pts = [0.0, scale, math.pi, 2 * math.pi - scale, 2 * math.pi]
    total, err = 0.0, 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        with warnings.catch_warnings():
            # roundoff notices at the 1e-15 level; the error estimate is kept
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e = integrate.quad(integrand, lo, hi, limit=400, epsabs=1e-15, epsrel=1e-14)
        total += val
        err += e
    return total / (2 * math.pi), err / (2 * math.pi)


def fourier_coefficient(n: int, params: SymbolParams, mode: str = "numeric", order: int = 12):
    """Fourier coefficient ``a_n`` of the symbol.

    ``mode="numeric"`` integrates over ``[0, 2 pi]`` adaptively;
    ``mode="series"`` returns the exact expansion in ``alpha2`` for the
    diagonal symbol (``alpha1 = 0``, ``alpha2 < 1``) to ``O(alpha2**order)``;
    ``mode="hp"`` returns an ``mpmath`` value from the hypergeometric forms.
    """
    if mode == "numeric":
        if params.alpha2 != 1.0 and abs(params.alpha2 - 1.0) < 1e-6:
            warnings.warn("symbol is near-singular; error bound degraded", NearSingularWarning)
        return _quad_coefficient(n, params)[0]
    if mode == "series":
        if params.alpha1 != 0.0:
            raise DomainError("series mode is available for the diagonal symbol only")
        h = diagonal_coefficient_series(n, (order - abs(n) + 1) // 2)
        out = [Fraction(0)] * order
        for p, c in enumerate(h.coeffs):
            idx = abs(n) + 2 * p
            if idx < order:
                out[idx] = c
        return RationalSeries(out, order, var="alpha")
    if mode == "hp":
        return hp_coefficients(params, abs(n) + 1)[n]
    raise DomainError(f"unknown mode {mode!r}")


def fft_coefficients(params: SymbolParams, nmax: int, digits: int = 17) -> dict[int, float]:
    """Coefficients ``a_{-nmax..nmax}`` by the trapezoid rule.

    The rule is exponentially accurate for analytic periodic symbols; the
    grid size is chosen from the known geometric decay so that aliasing stays
    below ``10**-digits``.
    """
    rho = params.decay
    if rho >= 1.0:
        raise DomainError("trapezoid route needs a non-critical symbol")
    needed = 2 * nmax + 2
    if rho > 0:
        needed = max(needed, int(digits * math.log(10) / -math.log(rho)) + 2 * nmax + 2)
    size = 1 << max(int(math.ceil(math.log2(needed))) + 1, 6)
    theta = 2 * np.pi * np.arange(size) / size
    c = np.fft.fft(symbol(theta, params)) / size
    return {n: float(c[(-n) % size].real) for n in range(-nmax, nmax + 1)}


def _poch_ratio(m: int) -> mpmath.mpf:
    """``(1/2)_m / m!``."""
    return mpmath.rf(mpmath.mpf(1) / 2, m) / mpmath.factorial(m)


def _g_coefficient(n: int, a) -> mpmath.mpf:
    """Coefficient of ``z^n`` in ``(1 - a/z)^(1/2) (1 - a z)^(-1/2)`` for ``0 <= a < 1``."""
    a = mpmath.mpf(a)
    if n >= 0:
        return a**n * _poch_ratio(n) * mpmath.hyp2f1(-0.5, n + 0.5, n + 1, a * a)
    m = -n
    return -(a**m) * _poch_ratio(m) / (2 * m - 1) * mpmath.hyp2f1(m - 0.5, 0.5, m + 1, a * a)


def hp_coefficients(params: SymbolParams, nmax: int, digits: int | None = None) -> dict[int, mpmath.mpf]:
    """Coefficients ``a_{-nmax..nmax}`` at high precision.

    Built from hypergeometric closed forms of the one-parameter factors and a
    convolution in the row case.
    """
    with high_precision(digits):
        dps = mpmath.mp.dps
        a1 = mpmath.mpf(params.alpha1)
        a2 = mpmath.mpf(params.alpha2)

        if a2 < 1:
            def second(n):
                return _g_coefficient(n, a2)
        elif a2 == 1:
            def second(n):
                return 2 / (mpmath.pi * (2 * n + 1))
        else:
            beta = 1 / a2

            def second(n):
                return -_g_coefficient(-(n + 1), beta)

        if a1 == 0:
            return {n: +second(n) for n in range(-nmax, nmax + 1)}

        jmax = int(dps * math.log(10) / -math.log(float(a1))) + 2
        first = {j: _g_coefficient(-j, a1) for j in range(-jmax, jmax + 1)}
        cache: dict[int, mpmath.mpf] = {}

        def second_cached(n):
            if n not in cache:
                cache[n] = second(n)
            return cache[n]

        out = {}
        for n in range(-nmax, nmax + 1):
            out[n] = mpmath.fsum(first[j] * second_cached(n - j) for j in first)
        return out


# ---------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------

def _coefficient_table(params: SymbolParams, nmax: int, method: str):
    if method == "quad":
        return {n: _quad_coefficient(n, params)[0] for n in range(-nmax, nmax + 1)}
    if method == "fft":
        return fft_coefficients(params, nmax)
    if method == "hp":
        return hp_coefficients(params, nmax)
    raise DomainError(f"unknown coefficient method {method!r}")


def toeplitz_matrix(coeffs: dict, N: int):
    return [[coeffs[i - j] for j in range(N)] for i in range(N)]


def toeplitz_determinant(N: int, params: SymbolParams, mode: str = "numeric", order: int = 20):
    """``D_N = det[a_{i-j}]_{0 <= i, j < N}``.

    ``mode="numeric"`` uses double precision LU for ``N <= 32`` and
    multiprecision LU above; ``mode="hp"`` always uses multiprecision;
    ``mode="series"`` returns the exact :class:`PrefactoredSeries` of the
    diagonal correlation (see :func:`diagonal_series`).
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    if mode == "series":
        if params.alpha1 != 0.0:
            raise DomainError("series mode is available for the diagonal symbol only")
        branch = Branch.BELOW_TC if params.alpha2 < 1.0 else Branch.ABOVE_TC
        return diagonal_series(N, order, branch)
    if N > MAX_NUMERIC_N:
        raise CapacityError(f"numeric determinants are capped at N = {MAX_NUMERIC_N}")
    if N == 0:
        return 1.0
    if mode == "numeric" and N <= FLOAT_LU_LIMIT:
        method = "hp" if params.critical else "quad"
        table = _coefficient_table(params, N - 1, method)
        A = np.array([[float(v) for v in row] for row in toeplitz_matrix(table, N)])
        return float(np.linalg.det(A))
    if mode in ("numeric", "hp"):
        with high_precision():
            table = hp_coefficients(params, N - 1)
            return mpmath.det(mpmath.matrix(toeplitz_matrix(table, N)))
    raise DomainError(f"unknown mode {mode!r}")


def leading_minors(neg, pos, N: int):
    """All leading principal minors ``D_0..D_N`` of a Toeplitz matrix.

    ``pos[n] = a_n`` and ``neg[n] = a_{-n}`` for ``0 <= n <= N``.  Works on
    numpy floats or on lists of ``mpmath`` numbers and costs ``O(N^2)``
    through the non-symmetric Levinson recursion.
    """
    use_mp = not isinstance(pos, np.ndarray)
    D = [1, pos[0]] if use_mp else np.empty(N + 1)
    if not use_mp:
        D[0], D[1] = 1.0, pos[0]
        f = np.array([1.0 / pos[0]])
        b = f.copy()
    else:
        f = [1 / pos[0]]
        b = [1 / pos[0]]
    for n in range(1, N):
        if use_mp:
            ef = mpmath.fsum(pos[n - i] * f[i] for i in range(n))
            eb = mpmath.fsum(neg[i + 1] * b[i] for i in range(n))
        else:
            ef = float(np.dot(pos[n:0:-1], f))
            eb = float(np.dot(neg[1:n + 1], b))
        den = 1 - ef * eb
        if den == 0:
            raise NumericError("Levinson recursion hit a singular leading minor", residual=0.0)
        if use_mp:
            f0, b0 = f + [0], [0] + b
            f = [(x - ef * y) / den for x, y in zip(f0, b0)]
            b = [(y - eb * x) / den for x, y in zip(f0, b0)]
            D.append(D[n] / b[-1])
        else:
            f0 = np.append(f, 0.0)
            b0 = np.insert(b, 0, 0.0)
            f, b = (f0 - ef * b0) / den, (b0 - eb * f0) / den
            D[n + 1] = D[n] / b[-1]
    return D


def diagonal_minors(point_or_params, N: int, precision: str = "float"):
    """``C(n, n)`` for ``n = 0..N`` at one temperature."""
    params = point_or_params if isinstance(point_or_params, SymbolParams) else SymbolParams.diagonal(point_or_params)
    if precision == "hp" or params.critical:
        with high_precision():
            table = hp_coefficients(params, N)
            pos = [table[n] for n in range(N + 1)]
            neg = [table[-n] for n in range(N + 1)]
            return leading_minors(neg, pos, N)
    table = fft_coefficients(params, N)
    pos = np.array([table[n] for n in range(N + 1)])
    neg = np.array([table[-n] for n in range(N + 1)])
    return leading_minors(neg, pos, N)


def diagonal_correlation(N: int, point: CouplingPoint, mode: str = "numeric"):
    """``<sigma_{0,0} sigma_{N,N}>`` of the infinite lattice."""
    if point.branch is Branch.AT_TC:
        return float(diagonal_at_tc(N))
    return toeplitz_determinant(N, SymbolParams.diagonal(point), mode)


def row_correlation(N: int, point: CouplingPoint, axis: str = "h", mode: str = "numeric"):
    """``<sigma_{0,0} sigma_{0,N}>`` (``axis="h"``) or ``<sigma_{0,0} sigma_{N,0}>``."""
    return toeplitz_determinant(N, SymbolParams.row(point, axis), mode)


# ---------------------------------------------------------------------
# The critical closed form and its asymptotics
# ---------------------------------------------------------------------

def diagonal_at_tc_rational(N: int) -> Fraction:
    """Rational ``r_N`` with ``C(N, N) = r_N / pi**N`` at the critical point."""
    if N < 0:
        raise DomainError("N must be non-negative")
    r = Fraction(2) ** N
    for j in range(1, N):
        r *= Fraction(4 * j * j - 1, 4 * j * j) ** (j - N)
    return r


def diagonal_at_tc(N: int, digits: int | None = None) -> mpmath.mpf:
    """Exact critical diagonal correlation evaluated at high precision."""
    r = diagonal_at_tc_rational(N)
    with high_precision(digits):
        return mpmath.mpf(r.numerator) / r.denominator / mpmath.pi**N


def critical_amplitude(digits: int | None = None) -> mpmath.mpf:
    """``2**(1/12) exp(3 zeta'(-1))``."""
    with high_precision(digits):
        return mpmath.power(2, mpmath.mpf(1) / 12) * mpmath.exp(3 * mpmath.zeta(-1, derivative=1))


@dataclass(frozen=True)
class AsymptoteFit:
    amplitude: float
    correction: float
    residual: float
    n_range: tuple[int, int]
    amplitude_error: float


def critical_asymptote_check(n_range: tuple[int, int] = (8, 64), terms: int = 6) -> AsymptoteFit:
    """Fit ``C(N,N) N^(1/4) = A (1 + c/N^2 + ...)`` at the critical point.

    Even powers of ``1/N`` only.  The reported error is the change in ``A``
    when one fewer correction term is used.
    """
    lo, hi = n_range
    if hi > MAX_NUMERIC_N:
        raise CapacityError(f"fits are capped at N = {MAX_NUMERIC_N}")
    with high_precision():
        def fit(nterms):
            Ns = list(range(lo, hi + 1))
            rows = [[mpmath.mpf(N) ** (-2 * p) for p in range(nterms)] for N in Ns]
            rhs = [diagonal_at_tc(N) * mpmath.mpf(N) ** 0.25 for N in Ns]
            A = mpmath.matrix(rows)
            y = mpmath.matrix(rhs)
            sol, res = mpmath.qr_solve(A, y)
            return sol, res

        sol, res = fit(terms)
        sol2, _ = fit(terms - 1)
        amp = sol[0]
        return AsymptoteFit(float(amp), float(sol[1] / amp), float(res), (lo, hi),
                            float(abs(amp - sol2[0])))


# ---------------------------------------------------------------------
# Exact series on the diagonal
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _minus_binom_half(p: int) -> Fraction:
    """Coefficient of ``x^p`` in ``(1 - x)^(1/2)``."""
    c = Fraction(1)
    for i in range(p):
        c *= Fraction(2 * i - 1, 2 * (i + 1))
    return c


@lru_cache(maxsize=None)
def _rising_half(q: int) -> Fraction:
    """Coefficient of ``x^q`` in ``(1 - x)^(-1/2)``, i.e. ``(1/2)_q / q!``."""
    c = Fraction(1)
    for i in range(q):
        c *= Fraction(2 * i + 1, 2 * (i + 1))
    return c


@lru_cache(maxsize=None)
def _diag_coeff_cached(n: int, order: int) -> tuple[Fraction, ...]:
    if n >= 0:
        return tuple(_minus_binom_half(p) * _rising_half(n + p) for p in range(order))
    m = -n
    return tuple(_minus_binom_half(m + q) * _rising_half(q) for q in range(order))


def diagonal_coefficient_series(n: int, order: int) -> RationalSeries:
    """``H_n(t)`` with ``a_n = alpha^{|n|} H_n(alpha^2)`` for the diagonal symbol."""
    return RationalSeries(_diag_coeff_cached(n, max(order, 0)), max(order, 0), var="t")


@dataclass(frozen=True)
class PrefactoredSeries:
    """``t**exponent * series``; the exponent is a half-integer."""

    exponent: Fraction
    series: RationalSeries

    @property
    def order(self):
        return self.series.order

    def __call__(self, t):
        return t ** float(self.exponent) * self.series(t)


def _conjugated_matrix(size: int, order: int, reflect: bool):
    t = RationalSeries.variable("t")
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            n = j - i if reflect else i - j
            h = diagonal_coefficient_series(n, order)
            row.append(h if i >= j else h.shift(j - i).truncate(order))
        rows.append(row)
    return rows


def diagonal_series(N: int, order: int, branch: Branch) -> PrefactoredSeries:
    """Exact series of ``C(N, N)`` in ``t`` on either side of the critical point.

    Below: ``C = S(t)``.  Above: ``C = t^{N/2} S(t)``.  ``S`` is exact to
    ``O(t**order)``.
    """
    if N > MAX_SERIES_N:
        raise CapacityError(f"series determinants are capped at N = {MAX_SERIES_N}")
    if branch is Branch.AT_TC:
        raise DomainError("the series is centred at t = 0 on either side, not at the critical point")
    if branch is Branch.BELOW_TC:
        if N == 0:
            return PrefactoredSeries(Fraction(0), RationalSeries.one().truncate(order))
        det = series_determinant(_conjugated_matrix(N, order, reflect=False))
        return PrefactoredSeries(Fraction(0), det.truncate(order))
    size = N + 1
    matrix = _conjugated_matrix(size, order, reflect=True)
    rhs = [RationalSeries.one().truncate(order)] + [RationalSeries([], order) for _ in range(N)]
    det, x = series_solve(matrix, rhs)
    return PrefactoredSeries(Fraction(N, 2), (det * x[N]).truncate(order))


# ---------------------------------------------------------------------
# Correlation grids
# ---------------------------------------------------------------------

class CorrelationGrid:
    """Values of ``C(M, N) = <sigma_{0,0} sigma_{M,N}>`` with provenance tags.

    Reflection symmetry ``C(-M, N) = C(M, -N) = C(M, N)`` always holds; on
    an isotropic lattice ``C(M, N) = C(N, M)`` is enforced as well, so only
    ``0 <= M <= N`` is stored.
    """

    def __init__(self, n_max: int, point: CouplingPoint | None = None, isotropic: bool = True):
        self.n_max = n_max
        self.point = point
        self.isotropic = isotropic
        self._values: dict[tuple[int, int], tuple[object, str]] = {(0, 0): (1, "exact")}

    def key(self, M: int, N: int) -> tuple[int, int]:
        M, N = abs(M), abs(N)
        if self.isotropic and M > N:
            M, N = N, M
        return M, N

    def __contains__(self, mn) -> bool:
        return self.key(*mn) in self._values

    def __getitem__(self, mn):
        try:
            return self._values[self.key(*mn)][0]
        except KeyError:
            raise KeyError(f"C{mn} is not in the grid") from None

    def set(self, M: int, N: int, value, provenance: str) -> None:
        self._values[self.key(M, N)] = (value, provenance)

    def provenance(self, M: int, N: int) -> str:
        return self._values[self.key(M, N)][1]

    def entries(self):
        for (M, N), (v, prov) in sorted(self._values.items()):
            yield M, N, v, prov

    def to_records(self) -> list[dict]:
        return [{"M": M, "N": N, "value": str(v) if not isinstance(v, (int, float)) else v,
                 "provenance": prov} for M, N, v, prov in self.entries()]
