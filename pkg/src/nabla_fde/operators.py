"""Nabla calculus on finite sampled sequences.

A :class:`SampledSignal` lives on the integer grid ``d, d+1, ..., a+K``.  Points
``d..a`` are history, points ``a+1..a+K`` are the future.  Every operator here
is a causal finite sum and returns a signal on ``a+1..a+K`` (or a shorter
history), never extrapolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DomainError, InsufficientHistoryError
from .special import binom_general, sum_coefficients


@dataclass(frozen=True)
class SampledSignal:
    """Real samples on ``history_start..origin+K`` with unit spacing."""

    origin: int
    history_start: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        a, d = int(self.origin), int(self.history_start)
        if d > a + 1:
            raise DomainError(f"history_start {d} lies after origin+1 = {a + 1}")
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if v.shape[0] < a + 2 - d:
            raise DomainError("a signal needs at least one sample after its origin")
        v.setflags(write=False)
        object.__setattr__(self, "origin", a)
        object.__setattr__(self, "history_start", d)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_future(cls, a: int, future, history=()) -> SampledSignal:
        """Build from samples at ``a+1..a+K``, optionally preceded by history
        samples ending at ``a``."""
        hist = np.asarray(history, dtype=np.float64).reshape(-1)
        fut = np.asarray(future, dtype=np.float64).reshape(-1)
        return cls(a, a + 1 - hist.shape[0], np.concatenate((hist, fut)))

    @classmethod
    def from_function(
        cls, fn: Callable[[int], float], a: int, K: int, history: int = 0
    ) -> SampledSignal:
        """Sample ``fn`` on ``a+1-history..a+K``."""
        d = a + 1 - history
        return cls(a, d, np.array([fn(k) for k in range(d, a + K + 1)], dtype=np.float64))

    @property
    def horizon(self) -> int:
        return self.history_start + self.values.shape[0] - 1 - self.origin

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.history_start, self.origin + self.horizon + 1)

    @property
    def future(self) -> np.ndarray:
        return self.values[self.origin + 1 - self.history_start :]

    @property
    def history(self) -> np.ndarray:
        return self.values[: self.origin + 1 - self.history_start]

    def at(self, k: int) -> float:
        if k < self.history_start:
            raise InsufficientHistoryError(k, self.history_start)
        if k > self.origin + self.horizon:
            raise IndexError(f"grid point {k} is past the horizon {self.origin + self.horizon}")
        return float(self.values[k - self.history_start])

    def truncated(self, K: int) -> SampledSignal:
        """The same signal cut at horizon ``K``."""
        if not 1 <= K <= self.horizon:
            raise DomainError(f"horizon {K} outside 1..{self.horizon}")
        return SampledSignal(self.origin, self.history_start, self.values[: self.origin + K + 1 - self.history_start])


def backward_diff(f: SampledSignal, n: int) -> SampledSignal:
    """``n``-th backward difference ``sum_j (-1)^j C(n,j) f(k-j)``.

    The result starts at ``history_start + n``, which must still reach
    ``a+1``.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"difference order must be >= 0, got {n}")
    a, d = f.origin, f.history_start
    if d > a + 1 - n:
        raise InsufficientHistoryError(a + 1 - n, d)
    if n == 0:
        return f
    v = f.values
    L = v.shape[0] - n
    out = np.zeros(L)
    for j in range(n + 1):
        w = (-1.0) ** j * binom_general(n, j)
        out += w * v[n - j : n - j + L]
    return SampledSignal(a, d + n, out)


def frac_sum(f: SampledSignal, alpha: float) -> SampledSignal:
    """Order-``alpha`` nabla fractional sum, on ``a+1..a+K``."""
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"fractional-sum order must be positive, got {alpha!r}")
    x = f.future
    c = sum_coefficients(alpha, x.shape[0] - 1).c
    return SampledSignal(f.origin, f.origin + 1, _kernels.causal_convolve(c, x))


def caputo_order(alpha: float) -> int:
    """``n = ceil(alpha)``; an integer order is its own ``n``."""
    return max(1, math.ceil(alpha))


def caputo_diff(f: SampledSignal, alpha: float) -> SampledSignal:
    """Caputo difference: the order ``n - alpha`` sum of ``backward_diff(f, n)``.

    For integer ``alpha`` the order-0 sum is the identity, so the result is
    ``backward_diff(f, alpha)`` restricted to ``a+1..a+K``.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"Caputo order must be positive, got {alpha!r}")
    n = caputo_order(alpha)
    g = backward_diff(f, n)
    if n == alpha:
        return SampledSignal(g.origin, g.origin + 1, g.future)
    return frac_sum(g, n - alpha)
