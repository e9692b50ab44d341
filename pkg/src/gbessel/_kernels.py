"""Double-precision hot loops.

Every kernel exists twice: a numba ``@njit`` version written as explicit
loops, and a vectorized pure-numpy version.  The numba path is used when
numba imports and ``GBP_DISABLE_NUMBA`` is unset; set the variable to ``1``
to force the numpy path.  Both paths are exported under explicit names so the
test-suite and the benchmark can compare them.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

_DISABLED = os.environ.get("GBP_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not _DISABLED

GL_ORDER = 10
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
MAX_DEPTH = 48
# panel differences below this relative size are rounding noise
NOISE = 64 * np.finfo(np.float64).eps
TWO_PI = 2.0 * math.pi


def _identity(fn=None, **kwargs):
    if fn is None:
        return lambda f: f
    return fn


njit = numba.njit(cache=True) if numba is not None else _identity


# -- Horner evaluation -------------------------------------------------------

@njit
def _nb_horner(coeffs, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    d = coeffs.shape[0]
    for i in range(z.shape[0]):
        acc = 0j
        zi = z[i]
        for k in range(d - 1, -1, -1):
            acc = acc * zi + coeffs[k]
        out[i] = acc
    return out


def _np_horner(coeffs, z):
    acc = np.zeros(z.shape[0], dtype=np.complex128)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


# -- Fourier-series route for the weight ------------------------------------

@njit
def _nb_weight_series(a, b, thetas, nterms):
    out = np.empty(thetas.shape[0])
    for i in range(thetas.shape[0]):
        th = thetas[i]
        term = 1.0
        acc = 0.0
        for j in range(1, nterms + 1):
            term *= -b / (a + j - 1)
            acc += term * math.cos(j * th)
        out[i] = (1.0 + 2.0 * acc) / TWO_PI
    return out


def _np_weight_series(a, b, thetas, nterms):
    j = np.arange(1, nterms + 1)
    coef = np.cumprod(-b / (a + j - 1.0))
    acc = np.cos(np.outer(thetas, j)) @ coef if nterms else np.zeros_like(thetas)
    return (1.0 + 2.0 * acc) / TWO_PI


# -- integral route for the weight: adaptive Gauss-Legendre panels -----------
#
# The panels live in a variable s on [0, 1] that vanishes at the singular
# endpoint u = 1, so that 1 - u is never formed by cancellation.
# a < 2:  s = (1-u)^(a-1) removes the singularity, integrand 2 f(u(s)).
# a >= 2: s = 1 - u, integrand 2(a-1) f(u) s^(a-2), already bounded.

@njit
def _nb_panel(a, b, ct, st, lo, hi, xg, wg):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    acc = 0.0
    for k in range(xg.shape[0]):
        s = mid + half * xg[k]
        if a < 2.0:
            v = s ** (1.0 / (a - 1.0))
            w = 2.0
        else:
            v = s
            w = 2.0 * (a - 1.0) * v ** (a - 2.0)
        u = 1.0 - v
        acc += wg[k] * w * math.exp(-b * u * ct) * math.cos(b * u * st)
    return acc * half


@njit
def _nb_weight_integral(a, b, thetas, tol, xg, wg):
    out = np.empty(thetas.shape[0])
    cap = 2 * MAX_DEPTH + 4
    lo_s = np.empty(cap)
    hi_s = np.empty(cap)
    est_s = np.empty(cap)
    dep_s = np.empty(cap, dtype=np.int64)
    for i in range(thetas.shape[0]):
        ct = math.cos(thetas[i])
        st = math.sin(thetas[i])
        top = 0
        lo_s[0] = 0.0
        hi_s[0] = 1.0
        est_s[0] = _nb_panel(a, b, ct, st, 0.0, 1.0, xg, wg)
        dep_s[0] = 0
        top = 1
        total = 0.0
        while top > 0:
            top -= 1
            lo = lo_s[top]
            hi = hi_s[top]
            whole = est_s[top]
            dep = dep_s[top]
            mid = 0.5 * (lo + hi)
            left = _nb_panel(a, b, ct, st, lo, mid, xg, wg)
            right = _nb_panel(a, b, ct, st, mid, hi, xg, wg)
            err = abs(left + right - whole)
            if err <= tol * (hi - lo) or err <= NOISE * (abs(left) + abs(right)) or dep >= MAX_DEPTH:
                total += left + right
            else:
                lo_s[top] = lo
                hi_s[top] = mid
                est_s[top] = left
                dep_s[top] = dep + 1
                lo_s[top + 1] = mid
                hi_s[top + 1] = hi
                est_s[top + 1] = right
                dep_s[top + 1] = dep + 1
                top += 2
        out[i] = (-1.0 + total) / TWO_PI
    return out


def _np_panel(a, b, ct, st, lo, hi, xg, wg):
    half = 0.5 * (hi - lo)
    s = 0.5 * (hi + lo) + half * xg
    if a < 2.0:
        v = s ** (1.0 / (a - 1.0))
        w = np.full_like(s, 2.0)
    else:
        v = s
        w = 2.0 * (a - 1.0) * v ** (a - 2.0)
    u = 1.0 - v
    # rows: angles, columns: nodes
    vals = np.exp(-b * np.outer(ct, u)) * np.cos(b * np.outer(st, u))
    return (vals * (wg * w)).sum(axis=1) * half


def _np_weight_integral(a, b, thetas, tol, xg, wg):
    # one shared panel tree for all angles; a panel is accepted when the
    # worst angle passes
    ct = np.cos(thetas)
    st = np.sin(thetas)
    total = np.zeros(thetas.shape[0])
    stack = [(0.0, 1.0, _np_panel(a, b, ct, st, 0.0, 1.0, xg, wg), 0)]
    while stack:
        lo, hi, whole, dep = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _np_panel(a, b, ct, st, lo, mid, xg, wg)
        right = _np_panel(a, b, ct, st, mid, hi, xg, wg)
        err = np.abs(left + right - whole)
        if np.all((err <= tol * (hi - lo)) | (err <= NOISE * (np.abs(left) + np.abs(right)))) or dep >= MAX_DEPTH:
            total += left + right
        else:
            stack.append((lo, mid, left, dep + 1))
            stack.append((mid, hi, right, dep + 1))
    return (-1.0 + total) / TWO_PI


# -- 1F1(1; a; w) on an array of arguments ----------------------------------

@njit
def _nb_hyp1f1_one(a, w, tol):
    out = np.empty(w.shape[0], dtype=np.complex128)
    for i in range(w.shape[0]):
        term = 1.0 + 0j
        acc = 1.0 + 0j
        k = 0
        while True:
            term *= w[i] / (a + k)
            acc += term
            k += 1
            if abs(term) <= tol * max(1.0, abs(acc)) and abs(w[i]) < 0.5 * (a + k):
                break
        out[i] = acc
    return out


def _np_hyp1f1_one(a, w, tol):
    term = np.ones(w.shape[0], dtype=np.complex128)
    acc = term.copy()
    wmax = float(np.max(np.abs(w), initial=0.0))
    k = 0
    while True:
        term = term * w / (a + k)
        acc += term
        k += 1
        if np.all(np.abs(term) <= tol * np.maximum(1.0, np.abs(acc))) and wmax < 0.5 * (a + k):
            return acc


# -- largest singular value of a complex-symmetric tridiagonal matrix --------

@njit
def _nb_power_iteration(diag, off, tol, maxiter):
    n = diag.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n)) + 0j
    w = np.empty(n, dtype=np.complex128)
    u = np.empty(n, dtype=np.complex128)
    lam_old = -1.0
    for it in range(maxiter):
        # w = J v
        for i in range(n):
            acc = diag[i] * v[i]
            if i > 0:
                acc += off[i - 1] * v[i - 1]
            if i < n - 1:
                acc += off[i] * v[i + 1]
            w[i] = acc
        lam = 0.0
        for i in range(n):
            lam += w[i].real ** 2 + w[i].imag ** 2
        # u = J^H w = conj(J) w, J being complex symmetric
        for i in range(n):
            acc = diag[i] * w[i]
            if i > 0:
                acc += np.conj(off[i - 1]) * w[i - 1]
            if i < n - 1:
                acc += np.conj(off[i]) * w[i + 1]
            u[i] = acc
        nrm = 0.0
        for i in range(n):
            nrm += u[i].real ** 2 + u[i].imag ** 2
        nrm = math.sqrt(nrm)
        if nrm == 0.0:
            return 0.0, it
        for i in range(n):
            v[i] = u[i] / nrm
        if abs(lam - lam_old) <= tol * lam:
            return math.sqrt(lam), it
        lam_old = lam
    return -1.0, maxiter


def _np_tridiag_mul(diag, off, v):
    w = diag * v
    w[1:] += off * v[:-1]
    w[:-1] += off * v[1:]
    return w


def _np_power_iteration(diag, off, tol, maxiter):
    n = diag.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    lam_old = -1.0
    offc = np.conj(off)
    for it in range(maxiter):
        w = _np_tridiag_mul(diag, off, v)
        lam = float(np.vdot(w, w).real)
        u = _np_tridiag_mul(diag, offc, w)
        nrm = float(np.linalg.norm(u))
        if nrm == 0.0:
            return 0.0, it
        v = u / nrm
        if abs(lam - lam_old) <= tol * lam:
            return math.sqrt(lam), it
        lam_old = lam
    return -1.0, maxiter


# -- dispatch ----------------------------------------------------------------

numpy_impl = {
    "horner": _np_horner,
    "weight_series": _np_weight_series,
    "weight_integral": _np_weight_integral,
    "hyp1f1_one": _np_hyp1f1_one,
    "power_iteration": _np_power_iteration,
}

numba_impl = {
    "horner": _nb_horner,
    "weight_series": _nb_weight_series,
    "weight_integral": _nb_weight_integral,
    "hyp1f1_one": _nb_hyp1f1_one,
    "power_iteration": _nb_power_iteration,
} if numba is not None else {}

_active = numba_impl if USE_NUMBA else numpy_impl


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def horner(coeffs, z):
    return _active["horner"](np.ascontiguousarray(coeffs, dtype=np.complex128),
                             np.ascontiguousarray(z, dtype=np.complex128))


def weight_series(a, b, thetas, nterms):
    return _active["weight_series"](float(a), float(b), np.ascontiguousarray(thetas, dtype=np.float64), int(nterms))


def weight_integral(a, b, thetas, tol):
    return _active["weight_integral"](float(a), float(b), np.ascontiguousarray(thetas, dtype=np.float64),
                                      float(tol), GL_NODES, GL_WEIGHTS)


def hyp1f1_one(a, w, tol=1e-17):
    return _active["hyp1f1_one"](float(a), np.ascontiguousarray(w, dtype=np.complex128), float(tol))


def power_iteration(diag, off, tol, maxiter):
    return _active["power_iteration"](np.ascontiguousarray(diag, dtype=np.complex128),
                                      np.ascontiguousarray(off, dtype=np.complex128),
                                      float(tol), int(maxiter))
