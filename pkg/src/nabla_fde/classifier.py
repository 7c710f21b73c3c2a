"""Zero-input behaviour from pole geometry.

The transform of the zero-input response has its main pole where
``s^alpha = lambda`` on the principal sheet.  The response converges exactly
when every such pole lies outside the circle ``|s - 1| = 1``.  That single
test covers the positive-``lambda`` threshold ``2^alpha`` and the negative-
``lambda`` critical radius ``2^alpha cos^alpha(pi/alpha)`` for ``alpha > 2``.

:func:`empirical_classify` is the independent check: it reads convergence,
monotonicity and overshoot off a long solved trajectory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NoPoleError
from .operators import caputo_order
from .solver import Response

DEFAULT_BOUNDARY_TOL = 1e-9
# "exactly on the circle": a few ulps of slack for the root computation
_EXACT = 8 * np.finfo(np.float64).eps


class Verdict(str, Enum):
    DIVERGENT = "Divergent"
    CONVERGENT = "Convergent"
    MONOTONE_CONVERGENT = "MonotoneConvergent"
    CONVERGENT_POSSIBLE_OVERSHOOT = "ConvergentPossibleOvershoot"
    CONSTANT = "Constant"
    POLYNOMIAL_DIVERGENT = "PolynomialDivergent"
    OSCILLATING = "Oscillating"
    ON_BOUNDARY = "OnBoundary"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value

    @property
    def converges(self) -> bool:
        return self in _CONVERGENT


_CONVERGENT = frozenset(
    {Verdict.CONVERGENT, Verdict.MONOTONE_CONVERGENT, Verdict.CONVERGENT_POSSIBLE_OVERSHOOT}
)


class PoleRegion(str, Enum):
    INSIDE = "InsideCircle"
    OUTSIDE = "OutsideCircle"
    ON = "OnCircle"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BehaviorClass:
    verdict: Verdict
    pole: complex
    pole_region: PoleRegion

    @property
    def converges(self) -> bool:
        return self.verdict.converges


@dataclass(frozen=True)
class EmpiricalVerdict:
    verdict: Verdict
    overshoot: bool
    overshoot_magnitude: float


def principal_pole(alpha: float, lam: float) -> complex:
    """``lambda^(1/alpha)``; for ``lambda < 0`` the root ``|lambda|^(1/alpha) e^(-i pi/alpha)``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if lam == 0:
        raise NoPoleError("lambda = 0: the transfer function has no finite nonzero pole")
    r = abs(lam) ** (1.0 / alpha)
    if lam > 0:
        return complex(r, 0.0)
    return r * cmath.exp(-1j * math.pi / alpha)


def region_test(s: complex, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> PoleRegion:
    d = abs(complex(s) - 1.0)
    if d > 1.0 + boundary_tol:
        return PoleRegion.OUTSIDE
    if d < 1.0 - boundary_tol:
        return PoleRegion.INSIDE
    return PoleRegion.ON


def has_principal_pole(alpha: float, lam: float) -> bool:
    """Whether ``s^alpha = lambda`` has a root on the principal sheet.

    For ``lambda < 0`` that needs ``arg s^alpha = pi``, which the sheet
    ``|arg s| < pi`` only reaches when ``alpha >= 1``.
    """
    return lam > 0 or (lam < 0 and alpha >= 1)


def critical_radius(alpha: float) -> float:
    """``2^alpha cos^alpha(pi/alpha)``, the ``|lambda|`` threshold for ``lambda < 0``, ``alpha > 2``."""
    if not alpha > 2:
        raise DomainError(f"critical radius needs alpha > 2, got {alpha!r}")
    return math.exp(alpha * (math.log(2.0) + math.log(math.cos(math.pi / alpha))))


def _default_b(alpha: float) -> tuple[float, ...]:
    return (1.0,) + (0.0,) * (caputo_order(alpha) - 1)


def classify_zero_input(
    alpha: float,
    lam: float,
    b=None,
    boundary_tol: float = DEFAULT_BOUNDARY_TOL,
) -> BehaviorClass:
    """Analytic verdict for ``u = 0``.

    * ``lambda = 0``: ``Constant`` when ``b_kappa = 0`` for ``kappa >= 1``, else
      ``PolynomialDivergent``.
    * otherwise the main-sheet pole decides: outside the circle converges,
      inside diverges.  Within ``boundary_tol`` of the circle the verdict is
      ``Oscillating`` if the pole is on it to rounding, else ``OnBoundary``.
    * convergent verdicts are refined for ``lambda < 0``: monotone for
      ``alpha <= 1``, possible overshoot for ``1 < alpha <= 2``.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if lam == 1:
        raise DomainError("lambda must not equal 1")
    b = _default_b(alpha) if b is None else tuple(float(x) for x in b)
    n = caputo_order(alpha)
    if len(b) != n:
        raise DomainError(f"alpha = {alpha} needs {n} initial condition(s), got {len(b)}")

    if lam == 0:
        verdict = Verdict.CONSTANT if not any(b[1:]) else Verdict.POLYNOMIAL_DIVERGENT
        return BehaviorClass(verdict, 0j, PoleRegion.ON)

    pole = principal_pole(alpha, lam)
    if not has_principal_pole(alpha, lam):
        # no main pole at all, so none inside the circle
        return BehaviorClass(Verdict.MONOTONE_CONVERGENT, pole, PoleRegion.OUTSIDE)

    region = region_test(pole, boundary_tol)
    if region is PoleRegion.ON:
        on_exactly = abs(abs(pole - 1.0) - 1.0) <= _EXACT * max(1.0, abs(pole))
        return BehaviorClass(Verdict.OSCILLATING if on_exactly else Verdict.ON_BOUNDARY, pole, region)
    if region is PoleRegion.INSIDE:
        return BehaviorClass(Verdict.DIVERGENT, pole, region)
    if lam < 0 and alpha <= 1:
        verdict = Verdict.MONOTONE_CONVERGENT
    elif lam < 0 and alpha <= 2:
        verdict = Verdict.CONVERGENT_POSSIBLE_OVERSHOOT
    else:
        verdict = Verdict.CONVERGENT
    return BehaviorClass(verdict, pole, region)


def overshoot_magnitude(y) -> float:
    """Largest excursion of ``y`` to the side opposite its first nonzero sample."""
    y = np.asarray(y, dtype=np.float64)
    nz = np.flatnonzero(y)
    if nz.size == 0:
        return 0.0
    s0 = math.copysign(1.0, y[nz[0]])
    return float(max(0.0, np.max(-s0 * y)))


def empirical_classify(
    r: Response,
    tol_zero: float = 0.9,
    tol_mono: float = 1e-12,
    min_horizon: int = 500,
) -> EmpiricalVerdict:
    """Read the behaviour off a solved trajectory.

    * ``Divergent``: the solve overflowed, or the tail (last 10%) peak exceeds
      10x the early (first 10%) peak.
    * convergent: the tail peak is below ``tol_zero`` times the overall peak.
      It is ``MonotoneConvergent`` when successive differences keep one sign
      (up to ``tol_mono`` relative to the peak) and there is no overshoot,
      ``ConvergentPossibleOvershoot`` when ``y`` crosses to the other side of
      ``y(a+1)``, else ``Convergent``.
    * otherwise ``Inconclusive``.

    A trajectory that is identically zero is convergent with no overshoot.
    """
    y = np.asarray(r.y, dtype=np.float64)
    if r.overflow:
        return EmpiricalVerdict(Verdict.DIVERGENT, False, 0.0)
    if y.shape[0] < min_horizon:
        raise DomainError(f"empirical classification needs K >= {min_horizon}, got {y.shape[0]}")
    ay = np.abs(y)
    peak = float(ay.max())
    if peak == 0:
        return EmpiricalVerdict(Verdict.CONVERGENT, False, 0.0)
    w = max(1, y.shape[0] // 10)
    early, tail = float(ay[:w].max()), float(ay[-w:].max())
    if not math.isfinite(tail) or tail > 10 * early:
        return EmpiricalVerdict(Verdict.DIVERGENT, False, 0.0)
    if not tail < tol_zero * peak:
        return EmpiricalVerdict(Verdict.INCONCLUSIVE, False, 0.0)

    mag = overshoot_magnitude(y)
    overshoot = mag > tol_mono * peak
    if overshoot:
        return EmpiricalVerdict(Verdict.CONVERGENT_POSSIBLE_OVERSHOOT, True, mag)
    dy = np.diff(y)
    slack = tol_mono * peak
    if np.all(dy <= slack) or np.all(dy >= -slack):
        return EmpiricalVerdict(Verdict.MONOTONE_CONVERGENT, False, 0.0)
    return EmpiricalVerdict(Verdict.CONVERGENT, False, 0.0)
