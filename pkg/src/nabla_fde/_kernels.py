"""Hot numeric loops, in two interchangeable flavours.

Every kernel exists as a pure-numpy function and, when numba is importable, as
an ``@njit`` compiled function with the same signature.  ``causal_convolve`` is
the exception: ``np.convolve`` is already compiled and faster, so both
flavours share it.  The module-level names
(``causal_convolve``, ``volterra_march``, ...) are bound to one flavour at import
time according to the ``NABLA_FDE_BACKEND`` environment variable:

``auto`` (default)
    numba when it imports, numpy otherwise.
``numba``
    numba; falls back to numpy with a warning if numba is missing.
``numpy``
    pure numpy, never touches numba.

Both flavours are always reachable through :func:`get_kernels`, which is what
the cross-backend tests and ``benchmarks/bench_kernels.py`` use.

The two flavours agree to rounding, not bit-for-bit: numpy's ``dot``
accumulates in a different order than the scalar loops.
"""

from __future__ import annotations

import math
import os
import warnings
from types import SimpleNamespace

import numpy as np
from scipy.special import gammaln

ENV_VAR = "NABLA_FDE_BACKEND"

# {{{ numpy flavour


def _coefficients_np(alpha: float, J: int) -> np.ndarray:
    # scalar loop on purpose: multiply-then-divide keeps integer orders exact
    # and matches the compiled kernel bit for bit
    c = [1.0] * (J + 1)
    prev = 1.0
    for j in range(1, J + 1):
        prev = prev * (j - 1.0 + alpha) / j
        c[j] = prev
    return np.array(c)


def _causal_convolve_np(h: np.ndarray, x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    if n == 0:
        return np.zeros(0)
    return np.convolve(h[:n], x)[:n]


def _volterra_march_np(c, rhs, gain, scale, limit):
    K = rhs.shape[0]
    y = np.zeros(K)
    for i in range(K):
        acc = np.dot(c[1 : i + 1], y[i - 1 :: -1]) if i else 0.0
        v = scale * (rhs[i] + gain * acc)
        if not abs(v) <= limit:
            return y, i
        y[i] = v
    return y, K


def _ml_log_grid_np(alpha, beta, log_abs_lam, negative, M, J):
    S = np.zeros(M + 1)
    A = np.zeros(M + 1)
    E = np.zeros(M + 1)
    j = np.arange(J, dtype=np.float64)
    q = j * alpha + beta - 1.0
    lg_q1 = gammaln(q + 1.0)
    jl = j * log_abs_lam
    sign = np.where((np.arange(J) % 2 == 1) & negative, -1.0, 1.0)

    # bounded memory: at most ~4M table entries per chunk
    chunk = max(1, 4_000_000 // max(J, 1))
    for m0 in range(1, M + 1, chunk):
        m = np.arange(m0, min(M + 1, m0 + chunk), dtype=np.float64)[:, None]
        lg_mq = gammaln(m + q)
        lg_m = gammaln(m)
        with np.errstate(under="ignore"):
            t = np.exp(jl + lg_mq - lg_m - lg_q1)
        at = np.abs(t)
        rows = slice(m0, m0 + m.shape[0])
        S[rows] = np.sum(sign * t, axis=1)
        A[rows] = np.sum(at, axis=1)
        E[rows] = np.sum(
            at * (np.abs(lg_mq) + np.abs(lg_m) + np.abs(lg_q1) + np.abs(jl)), axis=1
        )
    return S, A, E


# }}}

# {{{ numba flavour


def _build_numba():
    from numba import njit

    @njit(cache=True)
    def coefficients(alpha, J):
        c = np.ones(J + 1)
        for j in range(1, J + 1):
            c[j] = c[j - 1] * (j - 1.0 + alpha) / j
        return c

    @njit(cache=True)
    def volterra_march(c, rhs, gain, scale, limit):
        K = rhs.shape[0]
        y = np.zeros(K)
        for i in range(K):
            acc = 0.0
            for j in range(1, i + 1):
                acc += c[j] * y[i - j]
            v = scale * (rhs[i] + gain * acc)
            if not abs(v) <= limit:
                return y, i
            y[i] = v
        return y, K

    @njit(cache=True)
    def ml_log_grid(alpha, beta, log_abs_lam, negative, M, J):
        S = np.zeros(M + 1)
        A = np.zeros(M + 1)
        E = np.zeros(M + 1)
        lg_q1 = np.empty(J)
        for j in range(J):
            lg_q1[j] = math.lgamma(j * alpha + beta)
        for m in range(1, M + 1):
            lg_m = math.lgamma(m)
            s = 0.0
            comp = 0.0
            a = 0.0
            e = 0.0
            for j in range(J):
                q = j * alpha + beta - 1.0
                lg_mq = math.lgamma(m + q)
                jl = j * log_abs_lam
                t = math.exp(jl + lg_mq - lg_m - lg_q1[j])
                if negative and j % 2 == 1:
                    t = -t
                # Neumaier compensated sum
                u = s + t
                if abs(s) >= abs(t):
                    comp += (s - u) + t
                else:
                    comp += (t - u) + s
                s = u
                at = abs(t)
                a += at
                e += at * (abs(lg_mq) + abs(lg_m) + abs(lg_q1[j]) + abs(jl))
            S[m] = s + comp
            A[m] = a
            E[m] = e
        return S, A, E

    return SimpleNamespace(
        name="numba",
        coefficients=coefficients,
        # np.convolve already runs a compiled loop and beats a jitted one
        causal_convolve=_causal_convolve_np,
        volterra_march=volterra_march,
        ml_log_grid=ml_log_grid,
    )


# }}}

numpy_kernels = SimpleNamespace(
    name="numpy",
    coefficients=_coefficients_np,
    causal_convolve=_causal_convolve_np,
    volterra_march=_volterra_march_np,
    ml_log_grid=_ml_log_grid_np,
)

_numba_kernels: SimpleNamespace | None = None


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def get_kernels(name: str) -> SimpleNamespace:
    """Return the kernel namespace for ``"numpy"`` or ``"numba"``."""
    global _numba_kernels
    if name == "numpy":
        return numpy_kernels
    if name == "numba":
        if _numba_kernels is None:
            _numba_kernels = _build_numba()
        return _numba_kernels
    raise ValueError(f"unknown backend {name!r} (expected 'numpy' or 'numba')")


def _select_backend() -> str:
    want = os.environ.get(ENV_VAR, "auto").strip().lower()
    if want not in {"auto", "numba", "numpy"}:
        raise ValueError(f"{ENV_VAR}={want!r}: expected auto, numba or numpy")
    if want == "numpy":
        return "numpy"
    if numba_available():
        return "numba"
    if want == "numba":
        warnings.warn(
            f"{ENV_VAR}=numba but numba is not importable; using numpy kernels",
            RuntimeWarning,
            stacklevel=2,
        )
    return "numpy"


BACKEND = _select_backend()
_active = get_kernels(BACKEND)

coefficients = _active.coefficients
causal_convolve = _active.causal_convolve
volterra_march = _active.volterra_march
ml_log_grid = _active.ml_log_grid
