"""Time-domain solution of the scalar system

    Caputo difference of order alpha of y  =  lambda*y(k) + u(k),   k >= a+1,
    nabla^kappa y(a) = b_kappa,  kappa = 0..n-1,  n = ceil(alpha),  lambda != 1.

Two independent routes:

* :func:`solve_recursive` marches the equivalent sum equation

      (1 - lambda) y(k) = y0(k) + lambda * sum_{j>=1} c_j y(k-j) + (nabla^{-alpha} u)(k)

  with ``y0(a+m) = sum_kappa b_kappa * m^(overline kappa)/kappa!``.  It is exact up
  to rounding for every ``lambda != 1`` and serves as the reference oracle.
* :func:`solve_explicit` sums Mittag-Leffler functions:
  ``y = sum_kappa b_kappa F_{alpha,kappa+1} + F_{alpha,alpha} * u`` (causal convolution).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, ResponseOverflow
from .mittag_leffler import DEFAULT_TOL, ml_sequence
from .operators import SampledSignal, caputo_diff, caputo_order, frac_sum
from .special import binom_general, rising_factorial, sum_coefficients

# responses beyond this magnitude are reported as overflow
OVERFLOW_LIMIT = 1e290


@dataclass(frozen=True)
class SystemSpec:
    alpha: float
    lam: float
    a: int = 0
    b: tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite, got {self.lam!r}")
        if self.lam == 1:
            raise DomainError("lambda must not equal 1")
        b = tuple(float(x) for x in self.b)
        if len(b) != self.n:
            raise DomainError(
                f"alpha = {self.alpha} needs {self.n} initial condition(s) b_0..b_{self.n - 1}, got {len(b)}"
            )
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", int(self.a))

    @property
    def n(self) -> int:
        return caputo_order(self.alpha)


@dataclass(frozen=True)
class InputSignal:
    """Forcing ``u`` on ``a+1..a+K``: either identically zero or a table."""

    kind: str = "zero"
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "table"):
            raise DomainError(f"unknown input kind {self.kind!r}")
        if self.kind == "table":
            v = np.array(self.values, dtype=np.float64).reshape(-1)
            v.setflags(write=False)
            object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls) -> InputSignal:
        return cls("zero")

    @classmethod
    def table(cls, values) -> InputSignal:
        return cls("table", values)

    @classmethod
    def step(cls, K: int, amplitude: float = 1.0) -> InputSignal:
        return cls("table", np.full(K, float(amplitude)))

    @classmethod
    def impulse(cls, K: int, amplitude: float = 1.0) -> InputSignal:
        v = np.zeros(K)
        v[0] = amplitude
        return cls("table", v)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or not np.any(self.values)

    def samples(self, K: int) -> np.ndarray:
        """``u(a+1..a+K)``; a table must hold at least ``K`` samples."""
        if self.kind == "zero":
            return np.zeros(K)
        if self.values.shape[0] < K:
            raise DomainError(f"input table has {self.values.shape[0]} samples, horizon is {K}")
        return self.values[:K]

    def check_horizon(self, K: int) -> None:
        if self.kind == "table" and self.values.shape[0] != K:
            raise DomainError(f"input table has {self.values.shape[0]} samples, horizon is {K}")


@dataclass(frozen=True)
class Response:
    """``y(a+1..a+K)`` plus provenance.

    ``overflow`` is set when a recursive solve stopped early because ``|y|``
    left the float range; ``y`` then holds the samples computed before that.
    """

    a: int
    y: np.ndarray = field(repr=False)
    method: str
    max_series_truncation: float | None = None
    overflow: bool = False

    @property
    def K(self) -> int:
        return self.y.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.a + 1, self.a + self.K + 1)

    def as_signal(self, spec: SystemSpec) -> SampledSignal:
        """The response with its initial-condition history attached."""
        return SampledSignal.from_future(self.a, self.y, history=initial_history(spec))


def initial_history(spec: SystemSpec) -> np.ndarray:
    """``y(a-n+1..a)`` (oldest first) satisfying ``nabla^kappa y(a) = b_kappa``.

    Forward substitution on the unit-triangular system
    ``sum_i (-1)^i C(kappa, i) y(a-i) = b_kappa``.
    """
    back = []  # back[i] = y(a - i)
    for kappa, bk in enumerate(spec.b):
        acc = sum((-1) ** i * binom_general(kappa, i) * back[i] for i in range(kappa))
        back.append((-1) ** kappa * (bk - acc) + 0.0)
    return np.array(back[::-1])


def _taylor_part(spec: SystemSpec, K: int) -> np.ndarray:
    y0 = np.zeros(K)
    for kappa, bk in enumerate(spec.b):
        if bk:
            inv_fact = 1.0 / math.factorial(kappa)
            y0 += bk * inv_fact * np.array([rising_factorial(m, kappa) for m in range(1, K + 1)])
    return y0


def _check_K(K: int) -> int:
    if int(K) != K or K < 1:
        raise DomainError(f"horizon must be a positive integer, got {K!r}")
    return int(K)


def solve_recursive(
    spec: SystemSpec,
    u: InputSignal | None = None,
    K: int = 100,
    *,
    allow_overflow: bool = False,
    backend: str | None = None,
) -> Response:
    """March the sum equation for ``k = a+1..a+K``.

    With ``allow_overflow`` a response that leaves the float range is cut
    short and flagged instead of raising :class:`ResponseOverflow`.
    """
    K = _check_K(K)
    u = u or InputSignal.zero()
    u.check_horizon(K)
    kern = _kernels.get_kernels(backend) if backend else _kernels
    rhs = _taylor_part(spec, K)
    if not u.is_zero:
        rhs = rhs + frac_sum(SampledSignal.from_future(spec.a, u.samples(K)), spec.alpha).future
    c = sum_coefficients(spec.alpha, K - 1).c
    # a finite limit, so an inf sample also stops the march
    limit = OVERFLOW_LIMIT if allow_overflow else sys.float_info.max
    y, stop = kern.volterra_march(c, rhs, spec.lam, 1.0 / (1.0 - spec.lam), limit)
    if stop < K:
        if not allow_overflow:
            raise ResponseOverflow(f"response leaves the float range at k = a+{stop + 1}")
        return Response(spec.a, y[:stop].copy(), "recursive", None, True)
    return Response(spec.a, y, "recursive")


def solve_explicit(
    spec: SystemSpec,
    u: InputSignal | None = None,
    K: int = 100,
    tol: float = DEFAULT_TOL,
    *,
    backend: str | None = None,
) -> Response:
    """Sum of Mittag-Leffler modes plus the convolution of ``F_{alpha,alpha}`` with ``u``.

    Needs ``|lambda| < 1`` unless ``alpha`` is an integer (closed forms);
    otherwise :class:`SeriesNotConvergent` propagates.
    """
    K = _check_K(K)
    u = u or InputSignal.zero()
    u.check_horizon(K)
    y = np.zeros(K)
    trunc = 0.0
    for kappa, bk in enumerate(spec.b):
        if bk:
            g = ml_sequence(spec.alpha, kappa + 1.0, spec.lam, K, tol, backend=backend)
            y += bk * g.values[1:]
            trunc = max(trunc, g.truncation_bound)
    if not u.is_zero:
        g = ml_sequence(spec.alpha, spec.alpha, spec.lam, K, tol, backend=backend)
        kern = _kernels.get_kernels(backend) if backend else _kernels
        y += kern.causal_convolve(np.ascontiguousarray(g.values[1:]), u.samples(K))
        trunc = max(trunc, g.truncation_bound)
    return Response(spec.a, y, "explicit", trunc)


def residual(spec: SystemSpec, u: InputSignal | None, r: Response) -> float:
    """``max_k |Caputo(y)(k) - lambda*y(k) - u(k)|`` over the response horizon."""
    if r.K < 1:
        raise DomainError("response horizon too short")
    u = u or InputSignal.zero()
    d = caputo_diff(r.as_signal(spec), spec.alpha).future
    return float(np.max(np.abs(d - spec.lam * r.y - u.samples(r.K))))


def difference_bound(spec: SystemSpec, K: int, eps: float) -> np.ndarray:
    """Bound on ``|y - ybar|`` at ``a+1..a+K`` for any two candidates whose
    residuals are at most ``eps``.

    The difference ``e`` has zero initial conditions and satisfies
    ``(1-lambda) e = lambda sum_{j>=1} c_j e(k-j) + nabla^{-alpha} r``, so
    ``G(m) = (eps S_m + |lambda| sum_j c_j G(m-j)) / |1-lambda|`` dominates it,
    with ``S_m = sum_{j<m} c_j``.
    """
    K = _check_K(K)
    c = sum_coefficients(spec.alpha, K).c
    S = np.cumsum(c)[:K] * eps
    G, _ = _kernels.volterra_march(c, S, abs(spec.lam), 1.0 / abs(1.0 - spec.lam), math.inf)
    return G
