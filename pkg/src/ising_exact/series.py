"""Truncated power series with exact rational coefficients.

A :class:`RationalSeries` stores ``c_0 + c_1 x + ... + c_{n-1} x^{n-1} + O(x^n)``.
The truncation order ``n`` is propagated pessimistically through every
operation, so a coefficient is only ever reported if it is exact.  An order of
``math.inf`` marks an exact polynomial.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import CapacityError, DomainError

INF = math.inf


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact coefficient expected, got {type(value).__name__}")


class RationalSeries:
    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs: Iterable = (), order: float | int | None = None, var: str = "t"):
        cs = [_frac(c) for c in coeffs]
        if order is None:
            order = INF
            while cs and cs[-1] == 0:
                cs.pop()
        else:
            if order < 0:
                raise DomainError("truncation order must be non-negative")
            cs = cs[: int(order)] if order != INF else cs
            if order != INF:
                cs += [Fraction(0)] * (int(order) - len(cs))
        self.coeffs: list[Fraction] = cs
        self.order = order
        self.var = var

    # constructors -----------------------------------------------------
    @classmethod
    def polynomial(cls, coeffs: Iterable, var: str = "t") -> "RationalSeries":
        return cls(coeffs, None, var)

    @classmethod
    def one(cls, var: str = "t") -> "RationalSeries":
        return cls([1], None, var)

    @classmethod
    def variable(cls, var: str = "t") -> "RationalSeries":
        return cls([0, 1], None, var)

    @classmethod
    def binomial(cls, exponent, order: int, sign: int = 1, var: str = "t") -> "RationalSeries":
        """``(1 + sign*x)**exponent`` to the given order."""
        a = _frac(exponent)
        cs = [Fraction(1)]
        for n in range(1, order):
            cs.append(cs[-1] * (a - n + 1) / n * sign)
        return cls(cs, order, var)

    # basic queries ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        if n >= self.order:
            raise IndexError(f"coefficient {n} lies beyond truncation order {self.order}")
        return self.coeffs[n] if n < len(self.coeffs) else Fraction(0)

    @property
    def is_exact(self) -> bool:
        return self.order == INF

    def valuation(self) -> float:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.order

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "RationalSeries":
        return RationalSeries(self.coeffs, min(order, self.order), self.var)

    def _like(self, coeffs, order) -> "RationalSeries":
        return RationalSeries(coeffs, order, self.var)

    def _coerce(self, other) -> "RationalSeries":
        if isinstance(other, RationalSeries):
            if other.var != self.var:
                raise DomainError(f"series variables differ: {self.var} vs {other.var}")
            return other
        return RationalSeries([_frac(other)], None, self.var)

    # arithmetic -------------------------------------------------------
    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.order)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        n = max(len(self.coeffs), len(other.coeffs))
        if order != INF:
            n = min(n, int(order))
        a, b = self.coeffs, other.coeffs
        out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        return self._like(out, None if order == INF else order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalSeries):
            c = _frac(other)
            return self._like([c * x for x in self.coeffs], None if self.is_exact else self.order)
        other = self._coerce(other)
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + vb, other.order + va)
        a, b = self.coeffs, other.coeffs
        n = len(a) + len(b) - 1 if a and b else 0
        if order != INF:
            n = min(n, int(order))
        out = [Fraction(0)] * max(n, 0)
        for i, ai in enumerate(a):
            if ai == 0 or i >= n:
                continue
            for j in range(min(len(b), n - i)):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return self._like(out, None if order == INF else order)

    __rmul__ = __mul__

    def shift(self, k: int) -> "RationalSeries":
        """Multiply by ``x**k`` (``k`` may be negative if the low terms vanish)."""
        if k >= 0:
            return self._like([Fraction(0)] * k + self.coeffs,
                              None if self.is_exact else self.order + k)
        if self.valuation() < -k:
            raise DomainError("cannot divide by a power of the variable that does not divide the series")
        return self._like(self.coeffs[-k:], None if self.is_exact else self.order + k)

    def inverse(self) -> "RationalSeries":
        return RationalSeries.one(self.var) / self

    def __truediv__(self, other):
        if not isinstance(other, RationalSeries):
            c = _frac(other)
            if c == 0:
                raise ZeroDivisionError("series division by zero")
            return self * (1 / c)
        other = self._coerce(other)
        v = other.valuation()
        if v == other.order:
            raise ZeroDivisionError("divisor is zero to its known order")
        num, den = self, other
        if v > 0:
            if self.valuation() < v:
                raise DomainError("quotient is not a power series")
            num, den = self.shift(-v), other.shift(-v)
        order = min(num.order, den.order)
        if order == INF:
            if len(den.coeffs) == 1:
                return num * (1 / den.coeffs[0])
            raise DomainError("exact division by a non-monomial needs a finite order; truncate first")
        n = int(order)
        b0 = den.coeffs[0]
        b = den.coeffs
        q: list[Fraction] = []
        for i in range(n):
            acc = num.coeffs[i] if i < len(num.coeffs) else Fraction(0)
            for j in range(1, min(i, len(b) - 1) + 1):
                if b[j]:
                    acc -= b[j] * q[i - j]
            q.append(acc / b0)
        return self._like(q, order)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            out = RationalSeries.one(self.var)
            base = self
            e = exponent
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        return self.power(exponent)

    def power(self, exponent) -> "RationalSeries":
        """Real power of a series whose constant term is one."""
        a = _frac(exponent)
        if self.order == INF:
            raise DomainError("non-integer power of an exact polynomial needs a finite order")
        if self[0] != 1:
            raise DomainError("fractional powers need a unit constant term equal to 1")
        n = int(self.order)
        g = self.coeffs
        f = [Fraction(1)]
        for m in range(1, n):
            acc = Fraction(0)
            for k in range(1, min(m, len(g) - 1) + 1):
                if g[k]:
                    acc += (a * k - (m - k)) * g[k] * f[m - k]
            f.append(acc / m)
        return self._like(f, self.order)

    # calculus ---------------------------------------------------------
    def derivative(self) -> "RationalSeries":
        out = [i * c for i, c in enumerate(self.coeffs)][1:]
        order = self.order if self.is_exact else max(self.order - 1, 0)
        return self._like(out, None if order == INF else order)

    def integral(self) -> "RationalSeries":
        out = [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        return self._like(out, None if self.is_exact else self.order + 1)

    def log(self) -> "RationalSeries":
        if self[0] != 1:
            raise DomainError("log needs a constant term equal to 1")
        return (self.derivative() / self).integral()

    def exp(self) -> "RationalSeries":
        if self.order == INF:
            raise DomainError("exp of an exact polynomial needs a finite order")
        if self[0] != 0:
            raise DomainError("exp needs a vanishing constant term")
        n = int(self.order)
        f = [Fraction(1)]
        d = [i * c for i, c in enumerate(self.coeffs)]
        for m in range(1, n):
            acc = Fraction(0)
            for k in range(1, min(m, len(d) - 1) + 1):
                if d[k]:
                    acc += d[k] * f[m - k]
            f.append(acc / m)
        return self._like(f, self.order)

    # evaluation and comparison ---------------------------------------
    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, Fraction) else _to_number(c, x))
        return acc

    def first_mismatch(self, other, order: int | None = None) -> int | None:
        """Index of the first differing coefficient within the common order."""
        other = self._coerce(other)
        n = min(self.order, other.order)
        if order is not None:
            n = min(n, order)
        if n == INF:
            n = max(len(self.coeffs), len(other.coeffs))
        for i in range(int(n)):
            if self[i] != other[i]:
                return i
        return None

    def __eq__(self, other):
        if not isinstance(other, (RationalSeries, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return self.order == other.order and self.first_mismatch(other) is None

    __hash__ = None

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            terms.append(f"{c}" if not mono else (f"{c}*{mono}" if c != 1 else mono))
        body = " + ".join(terms) or "0"
        if self.order != INF:
            body += f" + O({self.var}^{self.order})"
        return f"RationalSeries({body})"


def _to_number(c: Fraction, like):
    try:
        import mpmath
        if isinstance(like, (mpmath.mpf, mpmath.mpc)):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


def series_determinant(matrix: Sequence[Sequence[RationalSeries]]) -> RationalSeries:
    """Determinant by Gaussian elimination with unit pivots.

    Each pivot is chosen among the remaining rows to have a nonzero constant
    term, so every elimination step is an honest power-series division.
    """
    det, _ = _eliminate(matrix, rhs=None)
    return det


def series_solve(matrix: Sequence[Sequence[RationalSeries]], rhs: Sequence[RationalSeries]):
    """Return ``(det, x)`` with ``matrix @ x = rhs`` over truncated series."""
    return _eliminate(matrix, rhs)


def _eliminate(matrix, rhs):
    n = len(matrix)
    if n == 0:
        var = "t"
        return RationalSeries.one(var), []
    A = [list(row) for row in matrix]
    var = A[0][0].var
    b = list(rhs) if rhs is not None else None
    det = RationalSeries.one(var)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col].order > 0 and A[r][col][0] != 0), None)
        if pivot is None:
            raise DomainError("no unit pivot available; matrix is not invertible over power series")
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            if b is not None:
                b[col], b[pivot] = b[pivot], b[col]
            det = -det
        p = A[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if A[r][col].is_zero():
                continue
            factor = A[r][col] * inv
            for c in range(col + 1, n):
                A[r][c] = A[r][c] - factor * A[col][c]
            if b is not None:
                b[r] = b[r] - factor * b[col]
    if b is None:
        return det, None
    x = [None] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc = acc - A[r][c] * x[c]
        x[r] = acc / A[r][r]
    return det, x
