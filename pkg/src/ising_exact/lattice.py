"""Exact results on small finite lattices.

Every configuration of a lattice with at most 25 sites is enumerated in
blocks of ``2**20`` states using bit operations.  With a single coupling
scale the partition function is returned as an exact integer polynomial

    Z = e^{K B + h N} sum_{a,b} c[a, b] x^a z^b,   x = e^{-2K},  z = e^{-2h},

where ``a`` counts unsatisfied bonds, ``b`` counts down spins, ``B`` is the
bond count and ``N`` the site count.  On periodic lattices ``a`` is always even
and the polynomial is also available in ``u = x**2 = e^{-4K}``.

A transfer-matrix mode handles longer cylinders and tori in floating point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import CapacityError, DomainError, NumericError, UnsupportedRepresentationError
from .precision import high_precision

MAX_SITES = 25
BLOCK_BITS = 20
MAX_TM_WIDTH_CYLINDER = 12
MAX_TM_WIDTH_TORUS = 10


@dataclass(frozen=True)
class FiniteLattice:
    """Rectangular lattice of ``Lv x Lh`` sites.

    ``boundary="periodic"`` wraps both directions; ``"cylindrical"`` wraps the
    horizontal direction only.  ``couplings`` maps a displacement
    ``(dj, dk)`` (rows, columns) to a coupling energy; a displacement and its
    negation describe the same bond and may be given once.
    """

    Lv: int
    Lh: int
    boundary: str = "periodic"
    couplings: dict = field(default_factory=lambda: {(1, 0): 1.0, (0, 1): 1.0})

    def __post_init__(self):
        if self.Lv < 1 or self.Lh < 1:
            raise DomainError("lattice needs at least one site")
        if self.boundary not in ("periodic", "cylindrical"):
            raise DomainError("boundary must be 'periodic' or 'cylindrical'")
        canon = {}
        for (dj, dk), E in self.couplings.items():
            key = (dj, dk) if (dj, dk) > (-dj, -dk) else (-dj, -dk)
            if key == (0, 0):
                raise DomainError("a site cannot couple to itself")
            if key in canon and canon[key] != E:
                raise DomainError(f"couplings for {(dj, dk)} and its negation differ")
            canon[key] = E
        object.__setattr__(self, "couplings", canon)

    @classmethod
    def nearest_neighbour(cls, Lv: int, Lh: int, Ev: float = 1.0, Eh: float | None = None,
                          boundary: str = "periodic") -> "FiniteLattice":
        return cls(Lv, Lh, boundary, {(1, 0): Ev, (0, 1): Ev if Eh is None else Eh})

    @property
    def sites(self) -> int:
        return self.Lv * self.Lh

    def site(self, j: int, k: int) -> int:
        return (j % self.Lv) * self.Lh + (k % self.Lh)

    def bonds(self) -> list[tuple[int, int, float]]:
        """Bond list ``(i, j, E)``; self-bonds and zero couplings are dropped."""
        out = []
        for (dj, dk), E in sorted(self.couplings.items()):
            if E == 0:
                continue
            for j in range(self.Lv):
                jj = j + dj
                if self.boundary == "cylindrical" and not (0 <= jj < self.Lv):
                    continue
                for k in range(self.Lh):
                    a, b = self.site(j, k), self.site(jj, k + dk)
                    if a != b:
                        out.append((a, b, E))
        return out

    @property
    def single_scale(self) -> float | None:
        energies = {E for _, _, E in self.bonds()}
        if len(energies) > 1:
            return None
        return energies.pop() if energies else 0.0


@dataclass(frozen=True)
class PartitionPolynomial:
    """Exact coefficients ``c[a][b]`` of ``x^a z^b`` with the stated prefactor."""

    coefficients: tuple[tuple[int, ...], ...]
    sites: int
    bond_count: int
    coupling: float
    convention: str = "Z = exp(K*bonds + h*sites) * sum c[a][b] x^a z^b, x = exp(-2K), z = exp(-2h)"

    @property
    def max_x_power(self) -> int:
        return len(self.coefficients) - 1

    def total(self) -> int:
        return sum(sum(row) for row in self.coefficients)

    @property
    def even_in_x(self) -> bool:
        return all(not any(row) for a, row in enumerate(self.coefficients) if a % 2)

    def u_coefficients(self) -> list[list[int]]:
        """Coefficients in ``u = x^2``; only for polynomials even in ``x``."""
        if not self.even_in_x:
            raise UnsupportedRepresentationError("odd powers of exp(-2K) occur; no polynomial in u")
        return [list(row) for row in self.coefficients[::2]]

    def field_free(self) -> list[int]:
        """Coefficients in ``x`` at ``z = 1``."""
        return [sum(row) for row in self.coefficients]

    def z_polynomial(self, x) -> list:
        """Coefficients in ``z`` after substituting a value for ``x``."""
        out = [0 * x] * (self.sites + 1)
        xp = 1 + 0 * x
        for row in self.coefficients:
            out = [o + c * xp for o, c in zip(out, row)]
            xp = xp * x
        return out

    def log_value(self, T: float, H: float = 0.0) -> float:
        """``log Z`` at temperature ``T`` and field ``H``."""
        if self.coupling == 0:
            K = 0.0
        else:
            K = self.coupling / T
        h = H / T
        with high_precision():
            x = mpmath.exp(-2 * mpmath.mpf(K))
            z = mpmath.exp(-2 * mpmath.mpf(h))
            s = mpmath.polyval(list(reversed(self.z_polynomial(x))), z)
            return float(K * self.bond_count + h * self.sites + mpmath.log(s))

    def to_json(self) -> str:
        return json.dumps({"sites": self.sites, "bonds": self.bond_count, "coupling": self.coupling,
                           "convention": self.convention,
                           "coefficients": [[str(c) for c in row] for row in self.coefficients]})


def _check_capacity(lattice: FiniteLattice):
    if lattice.sites > MAX_SITES:
        raise CapacityError(f"exhaustive enumeration is capped at {MAX_SITES} sites")


def _blocks(n_sites: int):
    total = 1 << n_sites
    size = min(total, 1 << BLOCK_BITS)
    for start in range(0, total, size):
        yield np.arange(start, start + size, dtype=np.int64)


def _bit(states, i):
    return (states >> i) & 1


def _histogram(lattice: FiniteLattice, weight_pair: tuple[int, int] | None = None) -> np.ndarray:
    """Counts over (unsatisfied bonds, down spins); optionally signed by ``s_i s_j``."""
    bonds = lattice.bonds()
    N = lattice.sites
    B = len(bonds)
    hist = np.zeros((B + 1) * (N + 1), dtype=np.int64)
    for states in _blocks(N):
        unsat = np.zeros_like(states)
        for i, j, _ in bonds:
            unsat += _bit(states, i) ^ _bit(states, j)
        down = np.bitwise_count(states).astype(np.int64)
        key = unsat * (N + 1) + down
        if weight_pair is None:
            hist += np.bincount(key, minlength=hist.size)
        else:
            i, j = weight_pair
            sign = 1 - 2 * (_bit(states, i) ^ _bit(states, j))
            hist += np.bincount(key, weights=sign, minlength=hist.size).astype(np.int64)
    return hist.reshape(B + 1, N + 1)


def _as_polynomial(hist: np.ndarray, lattice: FiniteLattice, scale: float) -> PartitionPolynomial:
    rows = [tuple(int(c) for c in row) for row in hist]
    while len(rows) > 1 and not any(rows[-1]):
        rows.pop()
    return PartitionPolynomial(tuple(rows), lattice.sites, len(lattice.bonds()), scale)


def enumerate_partition(lattice: FiniteLattice) -> PartitionPolynomial:
    """Exact partition polynomial by visiting every configuration."""
    _check_capacity(lattice)
    scale = lattice.single_scale
    if scale is None:
        raise UnsupportedRepresentationError("polynomial output needs a single coupling scale")
    return _as_polynomial(_histogram(lattice), lattice, scale)


def log_partition_function(lattice: FiniteLattice, T: float, H: float = 0.0) -> float:
    """``log Z`` by a direct floating-point sum; works for any couplings."""
    _check_capacity(lattice)
    if not (T > 0):
        raise DomainError("temperature must be positive")
    bonds = lattice.bonds()
    N = lattice.sites
    logs = []
    for states in _blocks(N):
        energy = np.zeros(states.size)
        for i, j, E in bonds:
            energy -= E * (1 - 2 * (_bit(states, i) ^ _bit(states, j)))
        energy -= H * (N - 2 * np.bitwise_count(states).astype(float))
        a = -energy / T
        m = a.max()
        logs.append(m + math.log(np.exp(a - m).sum()))
    m = max(logs)
    return m + math.log(sum(math.exp(v - m) for v in logs))


@dataclass(frozen=True)
class RationalCorrelation:
    """Ratio of two exact polynomials in ``x`` and ``z`` (shared prefactor cancels)."""

    numerator: PartitionPolynomial
    denominator: PartitionPolynomial

    def __call__(self, T: float, H: float = 0.0) -> float:
        return math.exp(self.numerator.log_value(T, H) - self.denominator.log_value(T, H)) \
            if self._positive(T, H) else self._signed(T, H)

    def _positive(self, T, H):
        return min(min(row) for row in self.numerator.coefficients) >= 0

    def _signed(self, T, H):
        K = self.denominator.coupling / T
        with high_precision():
            x = mpmath.exp(-2 * mpmath.mpf(K))
            z = mpmath.exp(-2 * mpmath.mpf(H) / T)
            num = mpmath.polyval(list(reversed(self.numerator.z_polynomial(x))), z)
            den = mpmath.polyval(list(reversed(self.denominator.z_polynomial(x))), z)
            return float(num / den)

    def exact_value(self, x: Fraction, z: Fraction = Fraction(1)) -> Fraction:
        num = sum(c * x**a * z**b for a, row in enumerate(self.numerator.coefficients) for b, c in enumerate(row))
        den = sum(c * x**a * z**b for a, row in enumerate(self.denominator.coefficients) for b, c in enumerate(row))
        return Fraction(num) / Fraction(den)


def oracle_correlation(lattice: FiniteLattice, T: float, H: float, displacement: tuple[int, int],
                       exact: bool = False):
    """``<s_{0,0} s_{M,N}>`` on the finite lattice."""
    _check_capacity(lattice)
    M, N = displacement
    if not (abs(M) < lattice.Lv and abs(N) < lattice.Lh):
        raise DomainError(f"displacement {displacement} does not fit in the lattice")
    if (M, N) == (0, 0):
        return Fraction(1) if exact else 1.0
    pair = (lattice.site(0, 0), lattice.site(M, N))
    if exact:
        scale = lattice.single_scale
        if scale is None:
            raise UnsupportedRepresentationError("exact correlations need a single coupling scale")
        num = _as_polynomial(_histogram(lattice, pair), lattice, scale)
        den = enumerate_partition(lattice)
        return RationalCorrelation(num, den)
    bonds = lattice.bonds()
    Nsites = lattice.sites
    num = den = 0.0
    shift = None
    for states in _blocks(Nsites):
        energy = np.zeros(states.size)
        for i, j, E in bonds:
            energy -= E * (1 - 2 * (_bit(states, i) ^ _bit(states, j)))
        energy -= H * (Nsites - 2 * np.bitwise_count(states).astype(float))
        a = -energy / T
        if shift is None:
            shift = a.max()
        w = np.exp(a - shift)
        s = 1 - 2 * (_bit(states, pair[0]) ^ _bit(states, pair[1]))
        num += float(np.dot(w, s))
        den += float(w.sum())
    return num / den


def field_moments(poly: PartitionPolynomial, T: float) -> tuple[float, float]:
    """Magnetisation and susceptibility per site at zero field from the exact polynomial."""
    K = poly.coupling / T
    with high_precision():
        x = mpmath.exp(-2 * mpmath.mpf(K))
        weights = poly.z_polynomial(x)
        Z = mpmath.fsum(weights)
        n = poly.sites
        mags = [n - 2 * b for b in range(n + 1)]
        m1 = mpmath.fsum(w * m for w, m in zip(weights, mags)) / Z
        m2 = mpmath.fsum(w * m * m for w, m in zip(weights, mags)) / Z
        return float(m1 / n), float((m2 - m1 * m1) / (n * T))


# ---------------------------------------------------------------------
# Zeros
# ---------------------------------------------------------------------

def _roots(coeffs_low_to_high) -> list[complex]:
    with high_precision():
        cs = [mpmath.mpmathify(c) for c in coeffs_low_to_high]
        while cs and cs[-1] == 0:
            cs.pop()
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        zeros_at_origin = [0j] * lead
        cs = cs[lead:]
        deg = len(cs) - 1
        if deg <= 0:
            return zeros_at_origin
        if deg == 1:
            return zeros_at_origin + [complex(-cs[0] / cs[1])]
        # companion matrix of the monic polynomial
        comp = mpmath.zeros(deg, deg)
        for i in range(1, deg):
            comp[i, i - 1] = 1
        for i in range(deg):
            comp[i, deg - 1] = -cs[i] / cs[deg]
        eigs = mpmath.eig(comp, left=False, right=False)
        scale = mpmath.fsum(abs(c) for c in cs)
        worst = 0
        polished = []
        for r in eigs:
            # a few Newton steps on the exact coefficients
            for _ in range(3):
                p = mpmath.polyval(list(reversed(cs)), r)
                dp = mpmath.polyval(list(reversed([i * c for i, c in enumerate(cs)][1:])), r)
                if dp == 0:
                    break
                r = r - p / dp
            res = abs(mpmath.polyval(list(reversed(cs)), r)) / (scale * max(1, abs(r)) ** deg)
            worst = max(worst, res)
            polished.append(complex(r))
        if worst > mpmath.mpf(10) ** (-20):
            raise NumericError("root finder did not converge", residual=float(worst))
        return zeros_at_origin + polished


def lee_yang_zeros(lattice: FiniteLattice, T: float) -> list[complex]:
    """Zeros of ``Z`` as a polynomial in ``z = exp(-2H/T)``."""
    poly = enumerate_partition(lattice)
    if poly.coupling < 0:
        raise DomainError("the circle theorem needs ferromagnetic couplings")
    with high_precision():
        x = mpmath.exp(-2 * mpmath.mpf(poly.coupling) / T)
        return _roots(poly.z_polynomial(x))


def complex_u_zeros(lattice: FiniteLattice, z: Fraction | int = 1) -> list[complex]:
    """Zeros of ``Z`` in ``u = exp(-4E/T)`` at a fixed rational ``z``."""
    poly = enumerate_partition(lattice)
    z = Fraction(z)
    coeffs = [sum(c * z**b for b, c in enumerate(row)) for row in poly.u_coefficients()]
    with high_precision():
        return _roots([mpmath.mpf(c.numerator) / c.denominator for c in coeffs])


# ---------------------------------------------------------------------
# Transfer matrices
# ---------------------------------------------------------------------

def _row_weights(width: int, Kh: float, h: float) -> np.ndarray:
    states = np.arange(1 << width, dtype=np.int64)
    log_w = np.zeros(states.size)
    for k in range(width):
        if width == 1:
            break
        # a ring of two sites carries two bonds between the same pair
        a, b = _bit(states, k), _bit(states, (k + 1) % width)
        log_w += Kh * (1 - 2 * (a ^ b))
    log_w += h * (width - 2 * np.bitwise_count(states).astype(float))
    return log_w


def _apply_vertical(vec: np.ndarray, width: int, Kv: float) -> np.ndarray:
    """Multiply by the inter-row bond matrix, one site at a time."""
    e_same, e_diff = math.exp(Kv), math.exp(-Kv)
    out = vec
    for k in range(width):
        shape = (-1, 2, 1 << k) if out.ndim == 1 else (-1, 2, 1 << k, out.shape[-1])
        v = out.reshape(shape)
        a, b = v[:, 0], v[:, 1]
        new = np.stack([e_same * a + e_diff * b, e_diff * a + e_same * b], axis=1)
        out = new.reshape(out.shape)
    return out


def transfer_matrix_log_z(width: int, length: int, T: float, Ev: float = 1.0, Eh: float = 1.0,
                          H: float = 0.0, boundary: str = "cylindrical") -> float:
    """``log Z`` for rings of ``width`` sites stacked ``length`` times.

    ``"cylindrical"`` leaves the first and last rings free; ``"periodic"``
    closes the stack into a torus.  Agrees with :func:`log_partition_function`
    on the same lattice.
    """
    if boundary == "cylindrical" and width > MAX_TM_WIDTH_CYLINDER:
        raise CapacityError(f"cylinder width is capped at {MAX_TM_WIDTH_CYLINDER}")
    if boundary == "periodic" and width > MAX_TM_WIDTH_TORUS:
        raise CapacityError(f"torus width is capped at {MAX_TM_WIDTH_TORUS}")
    Kv, Kh, h = Ev / T, Eh / T, H / T
    log_row = _row_weights(width, Kh, h)
    half = np.exp(0.5 * (log_row - log_row.max()))
    offset = 0.5 * log_row.max()
    if boundary == "cylindrical":
        vec = half * half
        log_scale = 2 * offset
        for _ in range(length - 1):
            vec = half * half * _apply_vertical(vec, width, Kv)
            log_scale += 2 * offset
            norm = vec.max()
            vec = vec / norm
            log_scale += math.log(norm)
        return log_scale + math.log(vec.sum())
    if boundary == "periodic":
        n = 1 << width
        mat = np.eye(n)
        log_scale = 0.0
        if length == 1:
            raise DomainError("a torus needs at least two rings")
        for _ in range(length):
            mat = _apply_vertical(mat * (half * half)[:, None], width, Kv)
            log_scale += 2 * offset
            norm = np.abs(mat).max()
            mat = mat / norm
            log_scale += math.log(norm)
        return log_scale + math.log(np.trace(mat))
    raise DomainError("boundary must be 'cylindrical' or 'periodic'")


def torus_bond_correlation(L: int, T: float, Ev: float = 1.0, Eh: float = 1.0, axis: str = "h",
                           step: float = 1e-4) -> float:
    """Nearest-neighbour ``<sigma sigma>`` on the ``L x L`` torus along ``axis``.

    Uses ``<sigma sigma>_h = (T / L^2) d log Z / d Eh`` with a Richardson
    combination of two central differences.
    """
    if axis not in ("h", "v"):
        raise DomainError("axis must be 'h' or 'v'")

    def logz(delta):
        if axis == "h":
            return transfer_matrix_log_z(L, L, T, Ev, Eh + delta, 0.0, "periodic")
        return transfer_matrix_log_z(L, L, T, Ev + delta, Eh, 0.0, "periodic")

    d1 = (logz(step) - logz(-step)) / (2 * step)
    d2 = (logz(2 * step) - logz(-2 * step)) / (4 * step)
    return (4 * d1 - d2) / 3 * T / (L * L)
