"""Susceptibility constants, the diagonal susceptibility and Nickel singularities.

Amplitude constants
-------------------
Near the critical point ``k_B T chi_pm ~ sqrt(2) C_pm |tau|^{-7/4}`` with
``C_- = sum C^(2n)`` and ``C_+ = sum C^(2n+1)``, where
``C^(n) = 2^{-n} pi^{1-n} D_n`` and

    D_n = (4/n!) int_{(0,inf)^n} prod du_i/u_i
          prod_{i<j} ((u_i - u_j)/(u_i + u_j))^2 / (sum_j (u_j + 1/u_j))^2.

Writing ``u_j = e^{y_j}``, integrating out the common shift of the ``y_j``
and ordering the remaining points by their gaps ``g_1..g_{n-1}`` gives

    D_n = 2 int_{(0,1)^{n-1}} prod_{i<j} ((1-U_ij)/(1+U_ij))^2
          / (n P + sum_{i<j} (U_ij P + P/U_ij)) dv,

with ``v_i = e^{-g_i}``, ``U_ij = v_i ... v_{j-1}`` and ``P = v_1 ... v_{n-1}``.
The integrand is a rational function on the closed cube, so tensor
Gauss-Legendre rules converge exponentially and randomized Sobol rules
converge faster than ``samples^{-1/2}``.

Nickel singularities
--------------------
For the isotropic lattice ``chi^(n)`` is singular where
``cosh^2 2K = sinh 2K (cos(2 pi j/n) + cos(2 pi l/n))``, which puts every
singular ``s = sinh 2K`` on the unit circle.
"""
from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.stats import qmc

from .core import Branch
from .errors import CapacityError, DomainError
from .toeplitz import SymbolParams, diagonal_minors

MAX_DN_N = 6
MAX_CHI_NCUT = 8192
TAIL_WINDOW = 32

# ---------------------------------------------------------------------
# Clausen function and closed forms
# ---------------------------------------------------------------------


def _reduce_angle(theta: float) -> float:
    r = math.fmod(theta, 2 * math.pi)
    if r > math.pi:
        r -= 2 * math.pi
    elif r <= -math.pi:
        r += 2 * math.pi
    return r


def _clausen_bernoulli(theta: float) -> float:
    """Expansion about zero, convergent for ``|theta| < 2 pi``."""
    if theta == 0.0:
        return 0.0
    with mpmath.workdps(30):
        th = mpmath.mpf(theta)
        total = th - th * mpmath.log(abs(th))
        k = 1
        while True:
            term = abs(mpmath.bernoulli(2 * k)) * th ** (2 * k + 1) / (2 * k * (2 * k + 1) * mpmath.factorial(2 * k))
            total += term
            if abs(term) < mpmath.mpf(10) ** -25 * (1 + abs(total)):
                break
            k += 1
        return float(total)


def clausen_tail_bound(theta: float, M: int = 1000, K: int = 8) -> tuple[float, float]:
    """Tail ``sum_{n>=M} sin(n theta)/n^2`` by repeated summation by parts.

    Returns ``(estimate, bound)``.  With ``z = e^{i theta}`` and forward
    differences of ``f(n) = 1/n^2``,

        sum_{n>=M} z^n f(n) = sum_{k<K} z^{M+k} Delta^k f(M) / (1-z)^{k+1} + R_K,

    and complete monotonicity of ``f`` gives
    ``|R_K| <= |Delta^{K-1} f(M)| / |1-z|^K``.
    """
    z = cmath.exp(1j * theta)
    if abs(1 - z) < 1e-8:
        raise DomainError("summation by parts needs theta away from multiples of 2 pi")

    def delta(k: int) -> Fraction:
        return sum(((-1) ** (k - i)) * math.comb(k, i) * Fraction(1, (M + i) ** 2) for i in range(k + 1))

    est = 0j
    for k in range(K):
        est += z ** (M + k) * float(delta(k)) / (1 - z) ** (k + 1)
    bound = abs(float(delta(K - 1))) / abs(1 - z) ** K
    return est.imag, bound


def _clausen_series(theta: float, M: int = 1000) -> tuple[float, float]:
    r = _reduce_angle(theta)
    if r == 0.0 or r == math.pi:
        return 0.0, 0.0
    n = np.arange(1, M)
    partial = math.fsum(np.sin(n * r) / n.astype(float) ** 2)
    tail, bound = clausen_tail_bound(r, M)
    return partial + tail, bound


def clausen2(theta: float, method: str = "bernoulli") -> float:
    """Clausen function ``Cl_2(theta) = sum_{n>=1} sin(n theta)/n^2``.

    ``method`` is ``"bernoulli"`` (expansion about zero), ``"series"`` (the
    defining series with a bounded tail) or ``"mpmath"``.
    """
    r = _reduce_angle(theta)
    if method == "bernoulli":
        return _clausen_bernoulli(r)
    if method == "series":
        return _clausen_series(r)[0]
    if method == "mpmath":
        return float(mpmath.clsin(2, r))
    raise DomainError(f"unknown method {method!r}")


def c3_analytic(method: str = "bernoulli") -> float:
    cl = clausen2(math.pi / 3, method)
    return (math.pi**2 / 3 + 2 - 3 * math.sqrt(3) * cl) / (2 * math.pi**2)


def c4_analytic() -> float:
    zeta3 = float(mpmath.zeta(3))
    return (4 * math.pi**2 / 9 - 1 / 6 - 3.5 * zeta3) / (16 * math.pi**3)


# ---------------------------------------------------------------------
# D_n integrals
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class DnEstimate:
    n: int
    value: float
    error: float
    samples: int
    method: str
    stream_values: tuple = ()

    @property
    def c_value(self) -> float:
        """``C^(n) = 2^{-n} pi^{1-n} D_n``."""
        return self.value * 2.0**-self.n * math.pi ** (1 - self.n)

    @property
    def c_error(self) -> float:
        return self.error * 2.0**-self.n * math.pi ** (1 - self.n)


def dn_integrand(v: np.ndarray) -> np.ndarray:
    """Integrand of ``D_n`` on ``(0,1)^{n-1}``; ``v`` has shape ``(m, n-1)``."""
    m, d = v.shape
    n = d + 1
    prefix = np.ones((m, n))
    prefix[:, 1:] = np.cumprod(v, axis=1)
    full = prefix[:, -1]
    num = np.ones(m)
    den = n * full
    for i in range(n):
        for j in range(i + 1, n):
            U = prefix[:, j] / prefix[:, i]
            num *= ((1 - U) / (1 + U)) ** 2
            den += U * full + full / U
    return 2 * num / den


def _gauss_rule(n: int, points: int) -> float:
    x, w = np.polynomial.legendre.leggauss(points)
    x, w = (x + 1) / 2, w / 2
    d = n - 1
    total = 0.0
    # Slice over the first coordinate to bound memory.
    rest = np.array(list(itertools.product(range(points), repeat=d - 1)), dtype=int).reshape(points ** (d - 1), d - 1)
    rest_x = x[rest]
    rest_w = np.prod(w[rest], axis=1)
    for a in range(points):
        pts = np.column_stack([np.full(len(rest_x), x[a]), rest_x])
        total += w[a] * float(np.dot(dn_integrand(pts), rest_w))
    return total


def dn_integral(n: int, budget: int | None = None, method: str = "quadrature",
                seed: int = 0, streams: int = 16) -> DnEstimate:
    """Estimate ``D_n``.

    ``method="quadrature"`` uses a tensor Gauss-Legendre rule with about
    ``budget`` nodes and reports the change from a rule with half the nodes
    per axis as the error.  ``method="rqmc"`` averages ``streams``
    independently scrambled Sobol rules whose seeds are spawned from
    ``seed``; the error is the standard error across streams.
    """
    if not 1 <= n <= MAX_DN_N:
        raise CapacityError(f"D_n is supported for 1 <= n <= {MAX_DN_N}")
    if n == 1:
        return DnEstimate(1, 2.0, 0.0, 0, "exact")
    if method == "quadrature":
        budget = budget or {2: 40, 3: 40**2, 4: 30**3, 5: 20**4, 6: 14**5}[n]
        points = max(4, int(round(budget ** (1.0 / (n - 1)))))
        fine = _gauss_rule(n, points)
        coarse = _gauss_rule(n, max(2, points // 2))
        return DnEstimate(n, fine, abs(fine - coarse), points ** (n - 1), "quadrature")
    if method == "rqmc":
        budget = budget or 2**18
        per_stream = max(16, budget // streams)
        m = int(math.floor(math.log2(per_stream)))
        children = np.random.SeedSequence(seed).spawn(streams)
        values = []
        for child in children:
            engine = qmc.Sobol(n - 1, scramble=True, seed=np.random.default_rng(child))
            values.append(float(np.mean(dn_integrand(engine.random_base2(m)))))
        arr = np.array(values)
        err = float(arr.std(ddof=1) / math.sqrt(streams))
        return DnEstimate(n, float(arr.mean()), err, streams * 2**m, "rqmc", tuple(values))
    raise DomainError(f"unknown method {method!r}")


def c_constant(n: int, method: str = "quadrature", budget: int | None = None, seed: int = 0) -> float:
    return dn_integral(n, budget, method, seed).c_value


@dataclass(frozen=True)
class AmplitudeRatio:
    c_plus: float
    c_minus: float
    terms: int

    @property
    def ratio(self) -> float:
        return self.c_plus / self.c_minus

    @property
    def relative_to_12pi(self) -> float:
        return self.ratio / (12 * math.pi) - 1


def amplitude_ratio(terms: int = 4) -> AmplitudeRatio:
    """Partial sums ``C_+ = C^(1) + C^(3) + ...`` and ``C_- = C^(2) + C^(4) + ...``."""
    cs = [dn_integral(n).c_value for n in range(1, terms + 1)]
    return AmplitudeRatio(sum(cs[0::2]), sum(cs[1::2]), terms)


def chi_amplitudes(terms: int = 4) -> dict:
    """Amplitudes in both normalizations: the raw sums and ``sqrt(2) C``."""
    r = amplitude_ratio(terms)
    return {"C_plus": r.c_plus, "C_minus": r.c_minus,
            "sqrt2_C_plus": math.sqrt(2) * r.c_plus, "sqrt2_C_minus": math.sqrt(2) * r.c_minus,
            "ratio": r.ratio, "twelve_pi": 12 * math.pi}


# ---------------------------------------------------------------------
# Diagonal susceptibility
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalChi:
    t: float
    branch: Branch
    value: float
    partial: float
    tail: float
    n_cut: int
    tail_reliable: bool
    decay_ratio: float | None = None
    decay_power: float | None = None


def _branch(branch) -> Branch:
    if isinstance(branch, Branch):
        return branch
    key = str(branch).lower()
    if key in ("low", "below", "below_tc", "-"):
        return Branch.BELOW_TC
    if key in ("high", "above", "above_tc", "+"):
        return Branch.ABOVE_TC
    raise DomainError(f"unknown branch {branch!r}")


def _tail_fit(terms: np.ndarray, n_cut: int):
    """Fit ``c rho^N N^{-p}`` to the last terms and sum it beyond ``n_cut``."""
    N = np.arange(n_cut - TAIL_WINDOW + 1, n_cut + 1, dtype=float)
    y = terms[-TAIL_WINDOW:]
    if np.any(y <= 0):
        return None
    A = np.column_stack([np.ones_like(N), N, -np.log(N)])
    coef, *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - np.log(y)) ** 2)))
    log_c, log_rho, p = coef
    rho = math.exp(log_rho)
    if not rho < 1:
        return None
    length = min(int(40 / -log_rho) + 1, 10**6)
    M = np.arange(n_cut + 1, n_cut + 1 + length, dtype=float)
    tail = float(np.sum(np.exp(log_c + M * log_rho - p * np.log(M))))
    return tail, rho, float(p), rms


def diagonal_chi(t: float, n_cut: int | None = None, branch=Branch.BELOW_TC) -> DiagonalChi:
    """``k_B T chi_d = sum_N (C(N,N) - M^2)`` by direct summation.

    Terms up to ``n_cut`` come from Levinson minors of the diagonal symbol;
    beyond that a fitted geometric tail is added and flagged when it is
    not trustworthy.
    """
    br = _branch(branch)
    if br is Branch.AT_TC:
        raise DomainError("the diagonal susceptibility diverges at T_c")
    if not 0.0 <= t <= 1 - 1e-3:
        raise DomainError("t must lie in [0, 1 - 1e-3]")
    if t == 0.0:
        # Zero temperature has M = 1 and T -> infinity has no correlations.
        return DiagonalChi(t, br, 0.0 if br is Branch.BELOW_TC else 1.0, 0.0, 0.0, 0, True)
    if n_cut is None:
        n_cut = min(MAX_CHI_NCUT, max(64, int(math.ceil(40 / (1 - t)))))
    if n_cut > MAX_CHI_NCUT:
        raise CapacityError(f"n_cut is capped at {MAX_CHI_NCUT}")
    if br is Branch.BELOW_TC:
        params, m2 = SymbolParams(0.0, math.sqrt(t)), (1 - t) ** 0.25
    else:
        params, m2 = SymbolParams(0.0, 1 / math.sqrt(t)), 0.0
    D = np.asarray(diagonal_minors(params, n_cut), dtype=float)
    terms = D - m2
    partial = float(terms[0] + 2 * math.fsum(terms[1:]))
    scale = max(abs(partial), 1e-300)
    if np.max(np.abs(terms[-TAIL_WINDOW:])) < 1e-11 * scale:
        # Terms have reached the round-off floor.
        return DiagonalChi(t, br, partial, partial, 0.0, n_cut, True)
    fit = _tail_fit(terms[1:], n_cut) if n_cut > TAIL_WINDOW + 8 else None
    if fit is None:
        warnings.warn("diagonal susceptibility tail could not be fitted", RuntimeWarning, stacklevel=2)
        return DiagonalChi(t, br, partial, partial, float("nan"), n_cut, False)
    tail, rho, p, rms = fit
    reliable = rms < 1e-3 and 2 * tail < 0.05 * abs(partial)
    return DiagonalChi(t, br, partial + 2 * tail, partial, 2 * tail, n_cut, reliable, rho, p)


def diagonal_constants(integral_i: float = -2.2128121) -> dict:
    """Higher diagonal amplitude constants.

    ``C4_minus = (1/8)(1 - (64 + 16 I)/(3 pi^2))`` with ``I = -2.2128121...``;
    the opposite sign in front of ``I`` would make it negative and larger
    than ``1/4``.  ``C3_plus`` is the known numerical value.
    """
    c4 = (1 - (64 + 16 * integral_i) / (3 * math.pi**2)) / 8
    return {"C1_plus": 1.0, "C3_plus": 0.016329, "C2_minus": 0.25, "C4_minus": c4}


def diagonal_prefactor(t: float, branch) -> float:
    """Leading divergence: ``(1-t)^{-3/4}`` below and ``(1-x^2)^{1/4}/(1-x)``, ``x = sqrt t``, above."""
    br = _branch(branch)
    if br is Branch.BELOW_TC:
        return (1 - t) ** -0.75
    x = math.sqrt(t)
    return (1 - x * x) ** 0.25 / (1 - x)


@dataclass(frozen=True)
class DiagonalAmplitudeFit:
    branch: Branch
    ts: tuple
    scaled: tuple
    amplitude: float
    coefficients: tuple
    target: float

    @property
    def relative_error(self) -> float:
        return abs(self.amplitude / self.target - 1)


def diagonal_amplitude_fit(branch, ts=(0.95, 0.97, 0.98, 0.99, 0.995)) -> DiagonalAmplitudeFit:
    """Fit ``chi_d / prefactor = A + B (1-t)^{3/4} + C (1-t)`` and report ``A``.

    ``A`` estimates the sum of the leading constants; the ``(1-t)^{3/4}``
    term absorbs the regular background of ``chi_d``.
    """
    br = _branch(branch)
    scaled = []
    for t in ts:
        res = diagonal_chi(t, branch=br)
        scaled.append(res.value / diagonal_prefactor(t, br))
    eps = 1 - np.asarray(ts)
    A = np.column_stack([np.ones_like(eps), eps**0.75, eps])
    coef, *_ = np.linalg.lstsq(A, np.asarray(scaled), rcond=None)
    target = 0.25 if br is Branch.BELOW_TC else 1.0
    return DiagonalAmplitudeFit(br, tuple(ts), tuple(scaled), float(coef[0]), tuple(map(float, coef)), target)


# ---------------------------------------------------------------------
# Nickel singularities
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class SingularityRecord:
    n: int
    j: int
    l: int
    s: complex
    w: float | None
    exponent: Fraction
    log: bool
    amplitude: complex | None = field(default=None, compare=False)

    @property
    def angle(self) -> float:
        return cmath.phase(self.s)

    def as_dict(self) -> dict:
        return {"n": self.n, "j": self.j, "l": self.l, "s_re": self.s.real, "s_im": self.s.imag,
                "w": self.w, "exponent": str(self.exponent), "log": self.log,
                "amp_re": None if self.amplitude is None else self.amplitude.real,
                "amp_im": None if self.amplitude is None else self.amplitude.imag}


def singularity_exponent(N: int, branch=None, diagonal: bool = False) -> tuple[Fraction, bool]:
    """Exponent of ``epsilon`` at a singularity of ``chi^(N)`` and whether a log multiplies it.

    Even ``N = 2n`` belongs to the low-temperature side, odd ``N = 2n+1`` to
    the high-temperature side.  Full susceptibility: ``2n^2 - 3/2`` and
    ``2n(n+1) - 1`` with a log.  Diagonal susceptibility: ``2n^2 - 1`` with
    a log and ``(n+1)^2 - 1/2``.
    """
    if N < 1:
        raise DomainError("N must be positive")
    even = N % 2 == 0
    if branch is not None:
        expected = Branch.BELOW_TC if even else Branch.ABOVE_TC
        if _branch(branch) is not expected:
            raise DomainError(f"chi^({N}) belongs to {expected.name}")
    n = N // 2
    if diagonal:
        return (Fraction(2 * n * n - 1), True) if even else (Fraction((n + 1) ** 2) - Fraction(1, 2), False)
    return (Fraction(2 * n * n) - Fraction(3, 2), False) if even else (Fraction(2 * n * (n + 1) - 1), True)


def _allowed_pair(n: int, j: int, l: int) -> bool:
    if not (0 <= j <= n // 2 and 0 <= l <= n // 2):
        return False
    if j == 0 and l == 0:
        return False
    if n % 2 == 0 and j + l == n // 2:
        return False
    return True


def nickel_amplitude(N: int, j: int, l: int) -> complex:
    """Amplitude ``A^(N)_{j,l}`` of the Nickel singularity labelled ``(j, l)``.

    Principal branches are used for the fractional powers.
    """
    if N < 3 or not _allowed_pair(N, j, l):
        raise DomainError(f"(j, l) = ({j}, {l}) is not a singularity label for N = {N}")
    phi_j, phi_l = 2 * math.pi * j / N, 2 * math.pi * l / N
    cos_theta = (math.cos(phi_j) + math.cos(phi_l)) / 2
    sin_theta = math.sqrt(max(0.0, 1 - cos_theta**2))
    base = math.sin(phi_j) ** 2 * math.cos(phi_l) + math.sin(phi_l) ** 2 * math.cos(phi_j)
    if abs(base) < 1e-14:
        raise DomainError(f"amplitude formula degenerates at (j, l) = ({j}, {l})")
    log_const = sum(math.lgamma(m + 1) - m * math.log(2) for m in range(1, N))
    log_const -= (N - 3) / 2 * math.log(math.pi) + 0.5 * math.log(N) + math.lgamma((N * N - 1) / 2)
    if sin_theta == 0.0:
        return 0j
    # Principal powers, assembled in log form to avoid overflow at large N.
    log_num = (N * N - 3) / 2 * cmath.log(complex(0, N * sin_theta))
    log_den = (N * N - 1) / 2 * cmath.log(complex(base))
    try:
        return cmath.exp(log_num - log_den + log_const)
    except OverflowError:
        raise CapacityError(f"amplitude for N = {N} exceeds the float range") from None


def nickel_singularities(n: int, amplitudes: bool = True) -> list[SingularityRecord]:
    """All isotropic singular points ``s`` of ``chi^(n)``, both roots per label, deduplicated."""
    if n < 3:
        raise DomainError("n must be at least 3")
    exponent, log = singularity_exponent(n)
    records: list[SingularityRecord] = []
    for j in range(n // 2 + 1):
        for l in range(n // 2 + 1):
            if not _allowed_pair(n, j, l):
                continue
            c = math.cos(2 * math.pi * j / n) + math.cos(2 * math.pi * l / n)
            w = 1 / (2 * c) if abs(c) > 1e-14 else None
            root = math.sqrt(max(0.0, 4 - c * c)) / 2
            amp = None
            if amplitudes:
                try:
                    amp = nickel_amplitude(n, j, l)
                except (DomainError, CapacityError):
                    amp = None
            for sign in (1, -1):
                s = complex(c / 2, sign * root)
                if any(abs(s - r.s) < 1e-12 for r in records):
                    continue
                records.append(SingularityRecord(n, j, l, s, w, exponent, log, amp))
    return records


def new_w_values(n: int) -> list[float]:
    """Distinct ``w`` values of ``chi^(n)`` absent from lower orders of the same parity."""
    lower = set()
    for m in range(n - 2, 1, -2):
        for j in range(m // 2 + 1):
            for l in range(m // 2 + 1):
                if _allowed_pair(m, j, l):
                    c = math.cos(2 * math.pi * j / m) + math.cos(2 * math.pi * l / m)
                    if abs(c) > 1e-14:
                        lower.add(round(1 / (2 * c), 10))
    out = []
    for r in nickel_singularities(n, amplitudes=False):
        if r.w is None or round(r.w, 10) in lower:
            continue
        if all(abs(r.w - v) > 1e-12 for v in out):
            out.append(r.w)
    return sorted(out)


@dataclass(frozen=True)
class GapScaling:
    ns: tuple
    bulk_spacing: tuple
    edge_gap: tuple
    bulk_slope: float
    edge_slope: float


def angular_gap_scaling(ns=tuple(range(10, 41, 2)), window=(math.pi / 4, 3 * math.pi / 4)) -> GapScaling:
    """Count singular angles on the upper half circle.

    ``bulk_spacing`` is the window length over the number of distinct angles
    in ``window``; ``edge_gap`` is the angle of the singularity closest to
    ``s = 1``.  Log-log slopes against ``n`` are returned.
    """
    bulk, edge = [], []
    for n in ns:
        angles = sorted({round(abs(r.angle), 12) for r in nickel_singularities(n, amplitudes=False)})
        inside = [a for a in angles if window[0] <= a <= window[1]]
        bulk.append((window[1] - window[0]) / len(inside))
        edge.append(min(a for a in angles if a > 0))
    x = np.log(np.asarray(ns, dtype=float))
    bs = float(np.polyfit(x, np.log(bulk), 1)[0])
    es = float(np.polyfit(x, np.log(edge), 1)[0])
    return GapScaling(tuple(ns), tuple(bulk), tuple(edge), bs, es)


@dataclass(frozen=True)
class CurvePoint:
    s_h: complex
    s_v: complex | None
    residual: float | None

    @property
    def is_gap(self) -> bool:
        return self.s_v is None


def anisotropic_residual(s_v: complex, s_h: complex, c_j: float, c_l: float) -> float:
    return abs((1 + s_v * s_v) * (1 + s_h * s_h) - (c_j * s_v + c_l * s_h) ** 2)


def anisotropic_nickel_curve(n: int, j: int, l: int, samples=32, s_h_values=None) -> list[CurvePoint]:
    """Sample ``cosh 2Kv cosh 2Kh = s_v cos(2 pi j/n) + s_h cos(2 pi l/n)``.

    The curve is treated in its algebraic form
    ``(1 + s_v^2)(1 + s_h^2) = (c_j s_v + c_l s_h)^2``.  For each ``s_h``
    (default: ``samples`` points on ``[0.1, 3]``) both roots of the quadratic
    in ``s_v`` are returned.  A degenerate quadratic yields a gap record.
    """
    if n < 3 or not (1 <= j <= n and 1 <= l <= n):
        raise DomainError("need n >= 3 and 1 <= j, l <= n")
    cj, cl = math.cos(2 * math.pi * j / n), math.cos(2 * math.pi * l / n)
    if s_h_values is None:
        if samples <= 0:
            return []
        s_h_values = np.linspace(0.1, 3.0, samples)
    out: list[CurvePoint] = []
    for sh in s_h_values:
        sh = complex(sh)
        a = 1 + sh * sh - cj * cj
        b = -2 * cj * cl * sh
        c = 1 + sh * sh - cl * cl * sh * sh
        if abs(a) < 1e-14:
            if abs(b) < 1e-14:
                out.append(CurvePoint(sh, None, None))
                continue
            roots = [-c / b]
        else:
            disc = cmath.sqrt(b * b - 4 * a * c)
            roots = [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
        for sv in roots:
            out.append(CurvePoint(sh, sv, anisotropic_residual(sv, sh, cj, cl)))
    return out
