"""Truncated N-transform (nabla discrete Laplace transform)

    F(s) = sum_{k>=1} (1-s)^(k-1) f(a+k)

together with initial/final value extraction, the difference rule as a
checkable identity, and the closed-form transform of a zero-input response.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError
from .operators import SampledSignal, backward_diff, caputo_order


class HorizonWarning(RuntimeWarning):
    """The signal is too short for the requested transform probe."""


def _horner(x: np.ndarray, w: complex) -> complex:
    # sum_i w^i x[i]; at w == 0 this is x[0] exactly
    acc = 0j
    for v in x[::-1]:
        acc = acc * w + v
    return acc


def n_transform_partial(f: SampledSignal, s: complex, K: int | None = None) -> complex:
    """``sum_{k=1}^{K} (1-s)^(k-1) f(a+k)``; ``K`` defaults to the full horizon."""
    K = f.horizon if K is None else int(K)
    if not 1 <= K <= f.horizon:
        raise DomainError(f"K = {K} outside 1..{f.horizon}")
    return _horner(f.future[:K], 1.0 - complex(s))


def initial_value(f: SampledSignal, kappa: int) -> float:
    """``f(a+kappa)`` recovered from the transform.

    Subtracting the first ``kappa-1`` terms and dividing by ``(1-s)^(kappa-1)``
    leaves the power series ``sum_{k>=kappa} (1-s)^(k-kappa) f(a+k)``, whose
    value at ``s = 1`` is its constant coefficient.
    """
    kappa = int(kappa)
    if not 1 <= kappa <= f.horizon:
        raise DomainError(f"kappa = {kappa} outside 1..{f.horizon}")
    remainder = f.future[kappa - 1 :]
    return float(_horner(remainder, 0j).real)


def final_value_estimate(f: SampledSignal, s_probe: float) -> float:
    """``s * F(s)`` at a small positive probe ``s``.

    Warns with :class:`HorizonWarning` when ``K*s < 10``: the truncated tail
    ``(1-s)^K`` is then not negligible.
    """
    s = float(s_probe)
    if not 0 < s < 1:
        raise DomainError(f"s_probe must lie in (0, 1), got {s_probe!r}")
    if f.horizon * s < 10:
        warnings.warn(
            f"horizon {f.horizon} is short for s_probe = {s}: K*s = {f.horizon * s:.3g} < 10",
            HorizonWarning,
            stacklevel=2,
        )
    return s * n_transform_partial(f, s).real


def diff_rule_residual(f: SampledSignal, s: complex, n: int) -> complex:
    """``N{nabla^n f} - [s^n F(s) - sum_{j<n} s^(n-j-1) (nabla^j f)(a)]``.

    Both transforms are truncated at the signal horizon ``K``; the residual is
    then a pure tail effect of size ``O(|1-s|^K)``.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    s = complex(s)
    a = f.origin
    lhs = n_transform_partial(backward_diff(f, n), s)
    F = n_transform_partial(f, s)
    corr = sum(s ** (n - j - 1) * backward_diff(f, j).at(a) for j in range(n))
    return lhs - (s**n * F - corr)


@dataclass(frozen=True)
class ResponseTransform:
    """``Y(s) = sum_kappa b_kappa s^(alpha-kappa-1) / (s^alpha - lambda)``."""

    alpha: float
    lam: float
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if self.lam == 1:
            raise DomainError("lambda must not equal 1")
        b = tuple(float(x) for x in self.b)
        n = caputo_order(self.alpha)
        if len(b) != n:
            raise DomainError(f"alpha = {self.alpha} needs {n} coefficients, got {len(b)}")
        object.__setattr__(self, "b", b)

    @classmethod
    def from_spec(cls, spec) -> ResponseTransform:
        return cls(spec.alpha, spec.lam, spec.b)


def response_transform_eval(rt: ResponseTransform, s: complex) -> complex:
    """Evaluate ``Y(s)`` on the principal branch of ``s^alpha``."""
    s = complex(s)
    if s == 0:
        raise DomainError("s must be nonzero")
    sa = s**rt.alpha
    den = sa - rt.lam
    if abs(den) <= 1e-14 * max(1.0, abs(rt.lam)):
        raise PoleError(f"s = {s} is a pole: s^alpha = {sa} equals lambda = {rt.lam}")
    num = sum(bk * s ** (rt.alpha - kappa - 1) for kappa, bk in enumerate(rt.b))
    return num / den
