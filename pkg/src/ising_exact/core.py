"""Coupling and temperature parametrisation of the square lattice model.

Everything is expressed through the reduced couplings ``K = E / T`` with the
Boltzmann constant set to one.  The algebraic variables used across the
package are

* ``s_v = sinh(2 K_v)`` and ``s_h = sinh(2 K_h)``,
* the modulus ``k = 1 / (s_v s_h)``,
* the branch variable ``t`` (``k**2`` below the critical temperature and
  ``(s_v s_h)**2`` above it, so ``0 <= t <= 1`` on both sides),
* for the isotropic lattice, ``tau = (1/s - s) / 2`` and
  ``w = 1 / (2 (s + 1/s))``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import DomainError


class Branch(enum.Enum):
    BELOW_TC = "below"
    ABOVE_TC = "above"
    AT_TC = "critical"


def _sinh(x: float) -> float:
    # saturate instead of raising deep in the ordered phase
    return math.sinh(x) if x < 710.0 else math.inf


@dataclass(frozen=True)
class CouplingPoint:
    """Immutable coupling/temperature state with derived variables.

    Use :func:`critical_point` to obtain a point flagged as critical; any
    other construction is classified strictly above or below.
    """

    Ev: float
    Eh: float
    T: float
    _critical: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.T > 0):
            raise DomainError(f"temperature must be positive, got {self.T}")
        if self.Ev < 0 or self.Eh < 0:
            raise DomainError("couplings must be non-negative (ferromagnetic)")

    @classmethod
    def isotropic(cls, s: float, E: float = 1.0) -> "CouplingPoint":
        """Isotropic point with ``sinh(2E/T) = s``."""
        if not (s > 0):
            raise DomainError("s must be positive")
        if s == 1.0:
            return critical_point(E, E)
        return cls(E, E, 2.0 * E / math.asinh(s))

    @property
    def Kv(self) -> float:
        return self.Ev / self.T

    @property
    def Kh(self) -> float:
        return self.Eh / self.T

    @property
    def s_v(self) -> float:
        return _sinh(2.0 * self.Kv)

    @property
    def s_h(self) -> float:
        return _sinh(2.0 * self.Kh)

    @property
    def product(self) -> float:
        if self._critical:
            return 1.0
        return self.s_v * self.s_h

    @property
    def is_isotropic(self) -> bool:
        return self.Ev == self.Eh

    @property
    def branch(self) -> Branch:
        if self._critical:
            return Branch.AT_TC
        return Branch.BELOW_TC if self.product > 1.0 else Branch.ABOVE_TC

    @property
    def k(self) -> float:
        p = self.product
        return math.inf if p == 0.0 else 1.0 / p

    @property
    def t(self) -> float:
        p = self.product
        if self.branch is Branch.AT_TC:
            return 1.0
        if self.branch is Branch.BELOW_TC:
            return 1.0 / (p * p)
        return p * p

    @property
    def s(self) -> float:
        if not self.is_isotropic:
            raise DomainError("s, tau and w are defined for the isotropic lattice only")
        return 1.0 if self._critical else self.s_v

    @property
    def tau(self) -> float:
        s = self.s
        return 0.5 * (1.0 / s - s)

    @property
    def w(self) -> float:
        s = self.s
        return 0.5 / (s + 1.0 / s)

    def dual(self) -> "CouplingPoint":
        """Kramers-Wannier dual couplings at the same temperature.

        The dual couplings satisfy ``sinh(2 Kv*) = 1/s_h`` and
        ``sinh(2 Kh*) = 1/s_v``, so the roles of the two axes swap.
        """
        if self.s_v == 0.0 or self.s_h == 0.0:
            raise DomainError("dual of a decoupled lattice is infinitely coupled")
        if self._critical:
            return self
        Ev = 0.5 * self.T * math.asinh(1.0 / self.s_h)
        Eh = 0.5 * self.T * math.asinh(1.0 / self.s_v)
        return CouplingPoint(Ev, Eh, self.T)

    def as_dict(self) -> dict:
        out = {"Ev": self.Ev, "Eh": self.Eh, "T": self.T, "branch": self.branch.value,
               "s_v": self.s_v, "s_h": self.s_h, "k": self.k, "t": self.t}
        if self.is_isotropic:
            out.update(s=self.s, tau=self.tau, w=self.w)
        return out


def critical_temperature(Ev: float, Eh: float) -> float:
    """Temperature solving ``sinh(2Ev/T) sinh(2Eh/T) = 1``."""
    if not (Ev > 0 and Eh > 0):
        raise DomainError("critical temperature needs two positive couplings")
    if Ev == Eh:
        return 2.0 * Ev / math.asinh(1.0)

    def log_product(T):
        return math.log(math.sinh(2.0 * Ev / T)) + math.log(math.sinh(2.0 * Eh / T))

    lo = 2.0 * min(Ev, Eh) / math.asinh(1.0)
    hi = 2.0 * max(Ev, Eh) / math.asinh(1.0)
    return brentq(log_product, lo, hi, xtol=1e-16, rtol=4 * 2.0**-52, maxiter=200)


def critical_point(Ev: float = 1.0, Eh: float | None = None) -> CouplingPoint:
    """The critical point of the given couplings, flagged as such."""
    Eh = Ev if Eh is None else Eh
    return CouplingPoint(Ev, Eh, critical_temperature(Ev, Eh), _critical=True)


def derive_variables(Ev: float, Eh: float, T: float) -> CouplingPoint:
    if T == 0:
        raise DomainError("T = 0 is a pole of the algebraic variables")
    return CouplingPoint(Ev, Eh, T)
