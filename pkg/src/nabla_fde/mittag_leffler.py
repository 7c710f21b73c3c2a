"""Discrete Mittag-Leffler function

    F_{alpha,beta}(lambda, k, a) = sum_j lambda^j (k-a)^(overline q_j) / Gamma(q_j + 1),
    q_j = j*alpha + beta - 1.

Evaluation paths, reported in ``MLResult.path``:

``boundary``
    ``k - a <= 1``: finite closed values valid for every ``lambda != 1``.
``zero-lambda``
    only the ``j = 0`` term survives.
``closed``
    integer ``alpha`` and integer ``1 <= beta <= alpha``: a finite sum over the
    ``alpha``-th roots of ``lambda`` (for ``alpha = 1`` this is ``(1-lambda)^-(k-a)``).
``series`` / ``series-mpfr``
    the power series, truncated once two consecutive terms fall below
    ``tol*(1+|partial|)``.  For ``lambda < 0`` the terms alternate and can be
    many orders of magnitude larger than the sum; when a running error bound
    says float64 cannot deliver ``tol``, the sum is redone in gmpy2 ``mpfr``
    with enough bits to absorb the cancellation.
``recursive``
    the function is also the unique solution of ``F = g + lambda*nabla^{-alpha} F``
    with ``g(k) = (k-a)^(overline beta-1)/Gamma(beta)``.  Marching that equation is
    exact up to rounding and works for every ``lambda != 1``.

The series only converges for ``|lambda| < 1``; outside that disc ``auto``
raises :class:`SeriesNotConvergent` unless a closed form applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from scipy.special import gammaln

from . import _kernels
from .errors import DomainError, NonConvergedAtCap, ResponseOverflow, SeriesNotConvergent
from .special import reciprocal_gamma, rising_factorial, sum_coefficients

DEFAULT_TOL = 1e-12
TERM_CAP = 100_000
METHODS = ("auto", "series", "recursive", "closed")

_EPS = np.finfo(np.float64).eps
_CHUNK = 512
# float64 terms above exp(_LOG_HUGE) cannot be summed to any useful accuracy
_LOG_HUGE = 600.0


@dataclass(frozen=True)
class MLQuery:
    alpha: float
    beta: float
    lam: float
    a: int
    k: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite, got {self.lam!r}")
        if int(self.k) != self.k or int(self.a) != self.a:
            raise DomainError("a and k must be integers")
        if self.k < self.a:
            raise DomainError(f"k = {self.k} lies before a = {self.a}")

    @property
    def m(self) -> int:
        return int(self.k - self.a)


@dataclass(frozen=True)
class MLResult:
    value: float
    terms_used: int
    truncation_bound: float
    path: str


@dataclass(frozen=True)
class MLGrid:
    """``values[m] = F(a+m)`` for ``m = 0..K``."""

    values: np.ndarray = field(repr=False)
    terms_used: int
    truncation_bound: float
    path: str


# {{{ closed forms


def ml_alpha1_closed(lam: float, k: int, a: int) -> float:
    """``F_{1,1}(lambda, k, a) = (1-lambda)^-(k-a)``."""
    if lam == 1:
        raise DomainError("lambda must not equal 1")
    if k < a:
        raise DomainError(f"k = {k} lies before a = {a}")
    return (1.0 - lam) ** (-(k - a))


def _integer_closed_applies(alpha: float, beta: float, lam: float) -> bool:
    return (
        alpha == math.floor(alpha)
        and beta == math.floor(beta)
        and 1 <= beta <= alpha
        and lam != 0
        and lam != 1
    )


def _roots(lam: float, n: int) -> np.ndarray:
    base = complex(lam) ** (1.0 / n)
    return base * np.exp(2j * np.pi * np.arange(n) / n)


def ml_integer_closed(n: int, beta: int, lam: float, m) -> np.ndarray | float:
    """``F_{n,beta}(lambda, a+m, a) = (1/n) sum_i rho_i^(1-beta) (1-rho_i)^(-m)``
    over the ``n``-th roots ``rho_i`` of ``lambda``, for integers ``1 <= beta <= n``.

    ``m`` may be an integer or an integer array.
    """
    if not _integer_closed_applies(float(n), float(beta), lam):
        raise DomainError(
            f"closed form needs integer alpha, integer 1 <= beta <= alpha and lambda not in {{0, 1}}"
            f" (got alpha={n}, beta={beta}, lambda={lam})"
        )
    n = int(n)
    if n == 1:
        return (1.0 - lam) ** (-np.asarray(m, dtype=np.float64)) if np.ndim(m) else (1.0 - lam) ** (-int(m))
    rho = _roots(lam, n)
    mm = np.asarray(m, dtype=np.float64)
    vals = (rho[:, None] ** (1 - int(beta))) * (1.0 - rho[:, None]) ** (-mm.reshape(1, -1))
    out = vals.sum(axis=0).real / n
    return out.reshape(mm.shape) if np.ndim(m) else float(out[0])


def ml_boundary_values(alpha: float, lam: float) -> tuple[float, float, float]:
    """``F_{alpha,2}(lambda, k, a)`` at ``k = a, a+1, a+2``.

    At ``k = a+2`` every rising factorial equals ``j*alpha + 2``, so the sum is
    ``2/(1-lambda) + alpha*lambda/(1-lambda)^2``.
    """
    if lam == 1:
        raise DomainError("lambda must not equal 1")
    r = 1.0 / (1.0 - lam)
    return 0.0, r, 2.0 * r + alpha * lam * r * r


def ml_transform_point(alpha: float, beta: float, lam: float, s: complex) -> complex:
    """N-transform of ``F_{alpha,beta}``: ``s^(alpha-beta)/(s^alpha - lambda)``.

    Principal branch; valid only for ``|lambda| < |s|^alpha``.
    """
    s = complex(s)
    if s == 0:
        raise DomainError("s must be nonzero")
    sa = s**alpha
    if not abs(lam) < abs(sa):
        raise DomainError(f"|lambda| = {abs(lam)} is not below |s|^alpha = {abs(sa)}")
    return s ** (alpha - beta) / (sa - lam)


# }}}

# {{{ series


def _value_at_origin(alpha: float, beta: float, lam: float) -> float:
    # only a term with q_j == 0 survives at m = 0
    jstar = (1.0 - beta) / alpha
    if jstar >= 0 and jstar == math.floor(jstar):
        return lam ** int(jstar)
    return 0.0


def _log_terms(alpha: float, beta: float, log_abs_lam: float, m: int, j0: int, j1: int):
    j = np.arange(j0, j1, dtype=np.float64)
    q = j * alpha + beta - 1.0
    lg_mq = gammaln(m + q)
    lg_m = math.lgamma(m)
    lg_q1 = gammaln(q + 1.0)
    jl = j * log_abs_lam
    lt = jl + lg_mq - lg_m - lg_q1
    lmag = np.abs(jl) + np.abs(lg_mq) + abs(lg_m) + np.abs(lg_q1)
    return lt, lmag


def _truncation_index(alpha, beta, lam, m, tol):
    """First ``J`` past the peak with terms ``J`` and ``J+1`` below ``tol``.

    Returns ``(J, log_terms[0..J], log_magnitudes[0..J])``.  Since every term with
    ``q_j > 0`` grows with ``m``, the index found at ``m`` bounds all smaller ``m``.
    """
    lla = math.log(abs(lam))
    thr = math.log(tol)
    lts, lms = [], []
    j0 = 0
    while j0 < TERM_CAP + 2:
        lt, lm = _log_terms(alpha, beta, lla, m, j0, j0 + _CHUNK)
        lts.append(lt)
        lms.append(lm)
        allt = np.concatenate(lts)
        small = allt < thr
        falling = np.empty_like(small)
        falling[:-1] = allt[1:] <= allt[:-1]
        falling[-1] = False
        hit = np.flatnonzero(small[:-1] & small[1:] & falling[:-1])
        if hit.size:
            J = int(hit[0])
            if J > TERM_CAP:
                break
            return J, allt[: J + 1], np.concatenate(lms)[: J + 1]
        j0 += _CHUNK
    raise NonConvergedAtCap(
        f"Mittag-Leffler series (alpha={alpha}, beta={beta}, lambda={lam}, m={m}) "
        f"still above tolerance after {TERM_CAP} terms"
    )


def _mpfr_bits(max_log_term: float, tol: float, J: int) -> int:
    digits = max(0.0, max_log_term / math.log(10)) - math.log10(tol) + math.log10(J + 1) + 10
    return max(64, int(math.ceil(digits * math.log2(10))) + 8)


def _series_point_mpfr(alpha, beta, lam, m, J, bits) -> float:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        lam_f = gmpy2.mpfr(lam)
        a_f = gmpy2.mpfr(alpha)
        b_f = gmpy2.mpfr(beta)
        lg_m = gmpy2.lgamma(gmpy2.mpfr(m))[0]
        total = gmpy2.mpfr(0)
        lam_j = gmpy2.mpfr(1)
        for j in range(J):
            q = j * a_f + b_f - 1
            # m + q > 0 and q + 1 > 0, so both Gammas are positive
            t = gmpy2.exp(gmpy2.lgamma(m + q)[0] - lg_m - gmpy2.lgamma(q + 1)[0])
            total += lam_j * t
            lam_j *= lam_f
        return float(total)


def _series_point(q: MLQuery, tol: float) -> MLResult:
    alpha, beta, lam, m = q.alpha, q.beta, q.lam, q.m
    J, lt, lm = _truncation_index(alpha, beta, lam, m, tol)
    bound = float(np.exp(lt[J]))
    peak = float(lt[:J].max())
    if peak > _LOG_HUGE:
        bits = _mpfr_bits(peak, tol, J)
        return MLResult(_series_point_mpfr(alpha, beta, lam, m, J, bits), J, bound, "series-mpfr")
    with np.errstate(under="ignore"):
        mag = np.exp(lt[:J])
    signs = np.where((np.arange(J) % 2 == 1) & (lam < 0), -1.0, 1.0)
    value = math.fsum(signs * mag)
    err = 4 * _EPS * float(np.sum(mag * (1.0 + lm[:J])))
    if err <= tol * (1 + abs(value)):
        return MLResult(value, J, bound, "series")
    bits = _mpfr_bits(peak, tol, J)
    return MLResult(_series_point_mpfr(alpha, beta, lam, m, J, bits), J, bound, "series-mpfr")


def _series_grid_mpfr(alpha, beta, lam, K, J, bits) -> np.ndarray:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        lam_f = gmpy2.mpfr(lam)
        q = np.array([j * gmpy2.mpfr(alpha) + gmpy2.mpfr(beta) - 1 for j in range(J)], dtype=object)
        lam_pow = [gmpy2.mpfr(1)]
        for _ in range(1, J):
            lam_pow.append(lam_pow[-1] * lam_f)
        # U_j(m) = (m-1)! T_j(m): U_j(1) = lambda^j, U_j(m+1) = U_j(m) (m + q_j)
        U = np.array(lam_pow, dtype=object)
        fact = gmpy2.mpfr(1)
        out = np.zeros(K + 1)
        for m in range(1, K + 1):
            if m > 1:
                U = U * (q + (m - 1))
                fact *= m - 1
            out[m] = float(gmpy2.fsum(U) / fact)
        return out


def _series_grid(alpha, beta, lam, K, tol, kern) -> MLGrid:
    J, lt, _ = _truncation_index(alpha, beta, lam, K, tol)
    bound = float(np.exp(lt[J]))
    peak = float(lt[:J].max())
    if peak > _LOG_HUGE:
        bits = _mpfr_bits(peak, tol, J)
        return MLGrid(_series_grid_mpfr(alpha, beta, lam, K, J, bits), J, bound, "series-mpfr")
    S, A, E = kern.ml_log_grid(alpha, beta, math.log(abs(lam)), lam < 0, K, J)
    err = 4 * _EPS * (A + E)
    ok = err[1:] <= tol * (1 + np.abs(S[1:]))
    if bool(np.all(ok)):
        values, path = np.array(S), "series"
    else:
        bits = _mpfr_bits(peak, tol, J)
        values, path = _series_grid_mpfr(alpha, beta, lam, K, J, bits), "series-mpfr"
    return MLGrid(values, J, bound, path)


# }}}

# {{{ recursion


def _recursive_grid(alpha, beta, lam, K, kern) -> np.ndarray:
    if lam == 1:
        raise DomainError("lambda must not equal 1")
    rg = reciprocal_gamma(beta)
    g = np.array([rising_factorial(m, beta - 1.0) * rg for m in range(1, K + 1)])
    c = sum_coefficients(alpha, max(K - 1, 0)).c
    y, stop = kern.volterra_march(c, g, lam, 1.0 / (1.0 - lam), math.inf)
    if stop < K:
        raise ResponseOverflow(
            f"F_{{{alpha},{beta}}}({lam}) leaves the float range at k - a = {stop + 1}"
        )
    out = np.empty(K + 1)
    out[0] = _value_at_origin(alpha, beta, lam)
    out[1:] = y
    return out


# }}}


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def ml_eval(q: MLQuery, tol: float = DEFAULT_TOL, method: str = "auto") -> MLResult:
    """Evaluate one value ``F_{alpha,beta}(lambda, k, a)``."""
    _check_method(method)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    alpha, beta, lam, m = q.alpha, q.beta, q.lam, q.m

    if method == "recursive":
        if m == 0:
            return MLResult(_value_at_origin(alpha, beta, lam), 0, 0.0, "boundary")
        vals = _recursive_grid(alpha, beta, lam, m, _kernels)
        return MLResult(float(vals[m]), m, 0.0, "recursive")

    if method == "closed":
        if alpha == 1 and beta == 1:
            return MLResult(ml_alpha1_closed(lam, q.k, q.a), 0, 0.0, "closed")
        return MLResult(ml_integer_closed(int(alpha), int(beta), lam, m), 0, 0.0, "closed")

    if m == 0:
        return MLResult(_value_at_origin(alpha, beta, lam), 1, 0.0, "boundary")
    if lam == 0:
        return MLResult(rising_factorial(m, beta - 1.0) * reciprocal_gamma(beta), 1, 0.0, "zero-lambda")
    if m == 1:
        if lam == 1:
            raise DomainError("lambda must not equal 1")
        return MLResult(1.0 / (1.0 - lam), 0, 0.0, "boundary")
    if method == "auto" and alpha == 1 and beta == 1 and lam != 1:
        return MLResult(ml_alpha1_closed(lam, q.k, q.a), 0, 0.0, "closed")
    if method == "auto" and _integer_closed_applies(alpha, beta, lam):
        return MLResult(ml_integer_closed(int(alpha), int(beta), lam, m), 0, 0.0, "closed")
    if abs(lam) >= 1:
        raise SeriesNotConvergent(
            f"the series diverges for |lambda| = {abs(lam)} >= 1; use the recursive solver"
        )
    return _series_point(q, tol)


def ml_sequence(
    alpha: float,
    beta: float,
    lam: float,
    K: int,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
    *,
    backend: str | None = None,
) -> MLGrid:
    """``F_{alpha,beta}(lambda, a+m, a)`` for ``m = 0..K`` in one pass.

    The values do not depend on ``a``.  ``backend`` picks the kernel flavour
    (default: the one selected at import).
    """
    _check_method(method)
    MLQuery(alpha, beta, lam, 0, K)
    kern = _kernels.get_kernels(backend) if backend else _kernels
    alpha, beta, lam = float(alpha), float(beta), float(lam)

    if method == "recursive":
        return MLGrid(_recursive_grid(alpha, beta, lam, K, kern), K, 0.0, "recursive")

    closed_ok = _integer_closed_applies(alpha, beta, lam)
    if method == "closed" or (method == "auto" and closed_ok):
        if not closed_ok:
            raise DomainError(f"no closed form for alpha={alpha}, beta={beta}, lambda={lam}")
        vals = np.asarray(ml_integer_closed(int(alpha), int(beta), lam, np.arange(K + 1)))
        vals[0] = _value_at_origin(alpha, beta, lam)
        return MLGrid(vals, 0, 0.0, "closed")

    if lam == 0:
        vals = np.array([_value_at_origin(alpha, beta, 0.0)] + [
            rising_factorial(m, beta - 1.0) * reciprocal_gamma(beta) for m in range(1, K + 1)
        ])
        return MLGrid(vals, 1, 0.0, "zero-lambda")
    if abs(lam) >= 1:
        raise SeriesNotConvergent(
            f"the series diverges for |lambda| = {abs(lam)} >= 1; use method='recursive'"
        )
    if K == 0:
        return MLGrid(np.array([_value_at_origin(alpha, beta, lam)]), 1, 0.0, "boundary")
    grid = _series_grid(alpha, beta, lam, K, tol, kern)
    vals = grid.values
    vals[0] = _value_at_origin(alpha, beta, lam)
    vals[1] = 1.0 / (1.0 - lam)
    return grid
