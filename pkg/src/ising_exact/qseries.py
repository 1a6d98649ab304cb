"""Exact q-series and the Bose/Fermi character identities of M(3,4) and M(2,5).

All coefficients are Python integers, so every identity check is an exact
equality of truncated power series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CapacityError, ContractError, DomainError

MAX_ROCHA_CARIDI_ORDER = 2000
MAX_E8_ORDER = 60


@dataclass(frozen=True)
class QSeries:
    """``c_0 + c_1 q + ... + c_K q^K + O(q^{K+1})``."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ContractError("coefficient count must equal order + 1")

    @classmethod
    def from_list(cls, coeffs, order: int | None = None) -> "QSeries":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        coeffs = (coeffs + [0] * (order + 1))[: order + 1]
        return cls(tuple(int(c) for c in coeffs), order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.from_list([1], order)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return self.order + 1

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ContractError(f"cannot extend a series known to order {self.order}")
        return QSeries(self.coeffs[: order + 1], order)

    def __add__(self, other: "QSeries") -> "QSeries":
        K = min(self.order, other.order)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[: K + 1], other.coeffs[: K + 1])), K)

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QSeries(tuple(other * c for c in self.coeffs), self.order)
        K = min(self.order, other.order)
        out = [0] * (K + 1)
        b = other.coeffs
        for i, a in enumerate(self.coeffs[: K + 1]):
            if a:
                for j in range(K + 1 - i):
                    if b[j]:
                        out[i + j] += a * b[j]
        return QSeries(tuple(out), K)

    __rmul__ = __mul__

    def shift(self, power: int) -> "QSeries":
        """Multiply by ``q^power`` keeping the same truncation order."""
        K = self.order
        if power >= 0:
            return QSeries.from_list([0] * power + list(self.coeffs[: K + 1 - power]), K)
        raise DomainError("negative shifts leave the power-series ring")

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def normalized(self) -> "QSeries":
        """Strip the leading power of ``q``; the order drops accordingly."""
        v = self.valuation()
        if v is None:
            return self
        coeffs = list(self.coeffs[v:])
        return QSeries.from_list(coeffs, self.order - v)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:12])
        more = ", ..." if self.order >= 12 else ""
        return f"QSeries([{head}{more}], order={self.order})"


# ---------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------


def euler_function(K: int) -> QSeries:
    """``(q)_inf = prod_{n>=1} (1 - q^n)`` from the pentagonal number theorem."""
    out = [0] * (K + 1)
    k = 0
    while True:
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= K:
                out[e] += -1 if kk % 2 else 1
        if k * (3 * k - 1) // 2 > K:
            break
        k += 1
    return QSeries.from_list(out, K)


@lru_cache(maxsize=32)
def partition_numbers(K: int) -> tuple:
    """``1/(q)_inf`` by Euler's pentagonal recurrence."""
    p = [1] + [0] * K
    for n in range(1, K + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def inverse_euler_function(K: int) -> QSeries:
    return QSeries(partition_numbers(K), K)


@lru_cache(maxsize=4096)
def _inverse_pochhammer(m: int, K: int) -> tuple:
    if m == 0:
        return (1,) + (0,) * K
    c = list(_inverse_pochhammer(m - 1, K))
    # divide by (1 - q^m)
    for n in range(m, K + 1):
        c[n] += c[n - m]
    return tuple(c)


def inverse_pochhammer(m: int, K: int) -> QSeries:
    """``1/(q)_m = prod_{i=1}^m 1/(1 - q^i)`` to order ``K``."""
    if m < 0:
        raise DomainError("m must be non-negative")
    return QSeries(_inverse_pochhammer(m, K), K)


def pochhammer(m: int, K: int) -> QSeries:
    c = [1] + [0] * K
    for i in range(1, m + 1):
        for n in range(K, i - 1, -1):
            c[n] -= c[n - i]
    return QSeries.from_list(c, K)


# ---------------------------------------------------------------------
# Bosonic characters
# ---------------------------------------------------------------------


def rocha_caridi(p: int, pp: int, r: int, s: int, K: int) -> QSeries:
    """Normalized Virasoro character of the minimal model ``M(p, pp)``,

        (1/(q)_inf) sum_{j in Z} (q^{j(p pp j + r pp - s p)} - q^{(pp j + s)(p j + r)}),

    with the overall power of ``q`` stripped so that the series starts at 1.
    """
    if not (1 <= r <= p - 1 and 1 <= s <= pp - 1):
        raise DomainError(f"(r, s) = ({r}, {s}) out of range for M({p}, {pp})")
    if math.gcd(p, pp) != 1:
        raise DomainError("p and p' must be coprime")
    if K > MAX_ROCHA_CARIDI_ORDER:
        raise CapacityError(f"order capped at {MAX_ROCHA_CARIDI_ORDER}")
    num = [0] * (K + 1)
    # Both exponents are quadratics in j with positive leading coefficient.
    bound = int(math.isqrt(K // (p * pp) + 1)) + 3
    for j in range(-bound, bound + 1):
        e1 = j * (p * pp * j + r * pp - s * p)
        e2 = (pp * j + s) * (p * j + r)
        if 0 <= e1 <= K:
            num[e1] += 1
        if 0 <= e2 <= K:
            num[e2] -= 1
    series = QSeries.from_list(num, K) * inverse_euler_function(K)
    return series.normalized() if series.valuation() else series


# ---------------------------------------------------------------------
# Fermionic sums
# ---------------------------------------------------------------------


def _fermionic_sum(exponent, K: int, parity=None) -> QSeries:
    out = [0] * (K + 1)
    m = 0
    while True:
        e = exponent(m)
        if e > K:
            if m > 2:
                break
        elif parity is None or m % 2 == parity:
            inv = _inverse_pochhammer(m, K - e)
            for n, c in enumerate(inv):
                out[e + n] += c
        m += 1
    return QSeries.from_list(out, K)


def fermionic_m34_spin(parity: str, K: int) -> QSeries:
    """``sum q^{m(m-1)/2}/(q)_m`` over odd or even ``m``."""
    if parity not in ("odd", "even"):
        raise DomainError("parity must be 'odd' or 'even'")
    return _fermionic_sum(lambda m: m * (m - 1) // 2, K, 1 if parity == "odd" else 0)


def rogers_ramanujan(which: int, K: int) -> QSeries:
    """``which=1``: ``sum q^{n^2}/(q)_n``; ``which=2``: ``sum q^{n^2+n}/(q)_n``."""
    if which == 1:
        return _fermionic_sum(lambda n: n * n, K)
    if which == 2:
        return _fermionic_sum(lambda n: n * n + n, K)
    raise DomainError("which must be 1 or 2")


# Bourbaki labelling: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


@dataclass(frozen=True)
class CartanE8:
    matrix: tuple
    inverse: tuple

    @classmethod
    def build(cls) -> "CartanE8":
        C = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
        for a, b in E8_EDGES:
            C[a - 1][b - 1] = C[b - 1][a - 1] = -1
        inv = _integer_inverse(C)
        return cls(tuple(map(tuple, C)), tuple(map(tuple, inv)))

    def determinant(self) -> int:
        return int(_fraction_det([list(map(Fraction, row)) for row in self.matrix]))

    def quadratic_form(self, m) -> int:
        inv = self.inverse
        return sum(m[i] * inv[i][j] * m[j] for i in range(8) for j in range(8))


def _fraction_det(A) -> Fraction:
    A = [row[:] for row in A]
    n, det = len(A), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return det


def _integer_inverse(C) -> list:
    n = len(C)
    A = [[Fraction(C[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next(i for i in range(k, n) if A[i][k] != 0)
        A[k], A[piv] = A[piv], A[k]
        p = A[k][k]
        A[k] = [x / p for x in A[k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    inv = [row[n:] for row in A]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ContractError("Cartan inverse is not integral")
    return [[int(x) for x in row] for row in inv]


def e8_vectors(K: int, cartan: CartanE8 | None = None):
    """All ``m`` in ``Z_{>=0}^8`` with ``m C^{-1} m <= K``, with their form values.

    Every entry of ``C^{-1}`` is positive, so the form restricted to the
    coordinates fixed so far is a lower bound for all completions.
    """
    cartan = cartan or CartanE8.build()
    inv = cartan.inverse
    if any(x <= 0 for row in inv for x in row):
        raise ContractError("pruning needs a positive inverse Cartan matrix")
    m = [0] * 8

    def rec(i: int, value: int):
        if i == 8:
            yield tuple(m), value
            return
        k = 0
        while True:
            # value with m_i = k: add 2 k sum_{j<i} inv[i][j] m_j + inv[i][i] k^2
            cross = sum(inv[i][j] * m[j] for j in range(i))
            v = value + 2 * k * cross + inv[i][i] * k * k
            if v > K:
                break
            m[i] = k
            yield from rec(i + 1, v)
            k += 1
        m[i] = 0

    yield from rec(0, 0)


def fermionic_e8(K: int) -> QSeries:
    """``sum_{m >= 0} q^{m C^{-1} m} / prod_i (q)_{m_i}`` for the E8 Cartan matrix."""
    if K > MAX_E8_ORDER:
        raise CapacityError(f"E8 sum capped at order {MAX_E8_ORDER}")
    cartan = CartanE8.build()
    out = [0] * (K + 1)
    for m, Q in e8_vectors(K, cartan):
        if Q < 0 or Q != cartan.quadratic_form(m):
            raise ContractError(f"quadratic form check failed at m = {m}")
        L = K - Q
        term = QSeries.one(L)
        for mi in m:
            if mi:
                term = term * inverse_pochhammer(mi, L)
        for n, c in enumerate(term.coeffs):
            out[Q + n] += c
    return QSeries.from_list(out, K)


def e8_form_minimum(box: int = 3) -> int:
    """Smallest nonzero value of ``m C^{-1} m`` over the box ``0 <= m_i <= box`` (brute force)."""
    import itertools

    cartan = CartanE8.build()
    best = None
    for m in itertools.product(range(box + 1), repeat=8):
        if any(m):
            v = cartan.quadratic_form(m)
            best = v if best is None else min(best, v)
    return best


# ---------------------------------------------------------------------
# Oracles and comparison
# ---------------------------------------------------------------------


def gap_partition_counts(K: int, gap: int = 2, smallest: int = 1) -> QSeries:
    """Number of partitions of ``n`` whose parts differ by at least ``gap`` and are ``>= smallest``.

    Counted by a direct recursion on the largest part, independent of any
    q-series identity.
    """
    @lru_cache(maxsize=None)
    def count(n: int, max_part: int) -> int:
        # partitions of n into parts <= max_part, >= smallest, pairwise gaps >= gap
        if n == 0:
            return 1
        total = 0
        for part in range(min(n, max_part), smallest - 1, -1):
            total += count(n - part, part - gap)
        return total

    return QSeries.from_list([count(n, n) for n in range(K + 1)], K)


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    order: int
    first_mismatch: int | None = None
    left: int | None = None
    right: int | None = None


def verify_identity(a: QSeries, b: QSeries) -> IdentityCheck:
    """Exact coefficient comparison of two series known to the same order."""
    if a.order != b.order:
        raise ContractError(f"orders differ: {a.order} vs {b.order}")
    for n, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return IdentityCheck(False, a.order, n, x, y)
    return IdentityCheck(True, a.order)


IDENTITIES = ("m34-spin", "m34-e8", "rr1", "rr2")


def identity_sides(name: str, K: int) -> list[tuple[str, QSeries]]:
    """Named sides of one of the implemented identities."""
    if name == "m34-spin":
        return [("odd", fermionic_m34_spin("odd", K)), ("even", fermionic_m34_spin("even", K)),
                ("character_1_2", rocha_caridi(3, 4, 1, 2, K))]
    if name == "m34-e8":
        return [("e8", fermionic_e8(K)), ("character_1_1", rocha_caridi(3, 4, 1, 1, K))]
    if name == "rr1":
        return [("fermionic", rogers_ramanujan(1, K)), ("character", rocha_caridi(2, 5, 1, 2, K))]
    if name == "rr2":
        return [("fermionic", rogers_ramanujan(2, K)), ("character", rocha_caridi(2, 5, 1, 1, K))]
    raise DomainError(f"unknown identity {name!r}; choose from {IDENTITIES}")


def check_named_identity(name: str, K: int) -> IdentityCheck:
    sides = identity_sides(name, K)
    ref = sides[0][1]
    for _, other in sides[1:]:
        res = verify_identity(ref, other)
        if not res.ok:
            return res
    return IdentityCheck(True, K)
