"""Gamma-family primitives.

Everything here works on real arguments.  Gamma ratios are formed in log
space with explicit sign tracking, and ``1/Gamma`` at a pole is taken to be 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError

NEG_INF = float("-inf")

# exact integer products are used below this many factors
_SMALL_PRODUCT = 128


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def log_gamma_signed(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign Gamma(x))``.

    At the poles ``x = 0, -1, -2, ...`` the result is ``(-inf, 0)``.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"log_gamma_signed needs a finite argument, got {x!r}")
    if _is_nonpositive_integer(x):
        return NEG_INF, 0
    lg = math.lgamma(x)
    if x > 0:
        return lg, 1
    return lg, (-1 if math.floor(x) % 2 else 1)


def reciprocal_gamma(x: float) -> float:
    """``1/Gamma(x)``, exactly 0 at the poles of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    if abs(x) <= 170.0:
        return 1.0 / math.gamma(x)
    lg, sgn = log_gamma_signed(x)
    if -lg > 709.0:
        # |1/Gamma| beyond the float range (large negative x)
        return sgn * math.inf
    return sgn * math.exp(-lg)


def rising_factorial(m: int, q: float) -> float:
    """``m^(overline q) = Gamma(m+q)/Gamma(m)`` for an integer ``m >= 0``.

    ``m = 0`` follows the reciprocal-gamma convention: the value is 1 for
    ``q = 0`` and 0 otherwise.  A negative integer ``q`` with ``m = 0`` is a
    pole-over-pole ratio and is rejected.
    """
    m = int(m)
    q = float(q)
    if m < 0:
        raise DomainError(f"rising_factorial needs m >= 0, got {m}")
    if m == 0:
        if q == 0:
            return 1.0
        if _is_nonpositive_integer(q):
            raise DomainError(f"rising_factorial(0, {q}) is a pole-over-pole ratio")
        return 0.0
    if _is_nonpositive_integer(m + q):
        raise DomainError(f"rising_factorial({m}, {q}): Gamma(m+q) has a pole")
    if q == math.floor(q) and 0 <= q < _SMALL_PRODUCT:
        out = 1.0
        for i in range(int(q)):
            out *= m + i
        return out
    lg_num, s_num = log_gamma_signed(m + q)
    return s_num * math.exp(lg_num - math.lgamma(m))


def binom_general(p: float, q: int) -> float:
    """Generalized binomial coefficient ``Gamma(p+1)/(Gamma(q+1)Gamma(p-q+1))``.

    For integer ``q`` the coefficient is the polynomial ``p(p-1)...(p-q+1)/q!``,
    so it is finite for every real ``p``.  Small ``q`` uses that product
    directly; large ``q`` goes through signed log-gamma, using the reflection
    ``(-1)^q Gamma(q-p)/(Gamma(q+1)Gamma(-p))`` when ``p`` is a negative integer.
    """
    p = float(p)
    if int(q) != q or q < 0:
        raise DomainError(f"binom_general needs an integer q >= 0, got {q!r}")
    q = int(q)
    if q < _SMALL_PRODUCT:
        out = 1.0
        for i in range(1, q + 1):
            out = out * (p - i + 1) / i
        return out
    if p == math.floor(p):
        if p >= 0:
            if q > p:
                return 0.0
            return math.exp(math.lgamma(p + 1) - math.lgamma(q + 1) - math.lgamma(p - q + 1))
        sign = -1.0 if q % 2 else 1.0
        return sign * math.exp(math.lgamma(q - p) - math.lgamma(q + 1) - math.lgamma(-p))
    lg1, s1 = log_gamma_signed(p + 1)
    lg2, s2 = log_gamma_signed(p - q + 1)
    return s1 * s2 * math.exp(lg1 - math.lgamma(q + 1) - lg2)


@dataclass(frozen=True)
class CoefficientTable:
    """Kernel ``c_j = Gamma(j+alpha)/(Gamma(alpha)Gamma(j+1))`` for ``j = 0..J``."""

    alpha: float
    c: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return self.c.shape[0] - 1

    def __len__(self) -> int:
        return self.c.shape[0]

    def partial_sums(self) -> np.ndarray:
        """``S[m] = sum_{j<m} c_j`` for ``m = 0..J+1``."""
        return np.concatenate(([0.0], np.cumsum(self.c)))


@lru_cache(maxsize=64)
def _table(alpha: float, J: int) -> CoefficientTable:
    c = np.asarray(_kernels.coefficients(alpha, J), dtype=np.float64)
    c.setflags(write=False)
    return CoefficientTable(alpha, c)


def sum_coefficients(alpha: float, J: int) -> CoefficientTable:
    """Coefficients of the order-``alpha`` fractional sum, by recurrence.

    Tables are cached per ``(alpha, J)`` and their arrays are read-only.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"order must be positive, got {alpha!r}")
    if J < 0:
        raise DomainError(f"J must be >= 0, got {J}")
    return _table(alpha, int(J))
