"""Multiprecision settings.

The decimal digit count used by every high precision routine defaults to 50
and can be raised with the ``ISING_EXACT_PRECISION`` environment variable.
"""
from __future__ import annotations

import contextlib
import os

import mpmath

DEFAULT_DIGITS = 50


def working_digits() -> int:
    raw = os.environ.get("ISING_EXACT_PRECISION")
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError:
        return DEFAULT_DIGITS
    return max(digits, DEFAULT_DIGITS)


@contextlib.contextmanager
def high_precision(digits: int | None = None):
    """Run a block with at least the working digits; never lowers the current precision."""
    with mpmath.workdps(max(digits or 0, working_digits(), mpmath.mp.dps)):
        yield
