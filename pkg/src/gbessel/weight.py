"""The positive weight p(theta, a, b) on the unit circle and its relatives.

Two independent double-precision routes evaluate p:

* ``weight_integral``: the defining integral
  2 pi p = -1 + 2(a-1) int_0^1 e^{-bu cos t} cos(bu sin t) (1-u)^{a-2} du,
  by adaptive Gauss-Legendre panels after removing the endpoint singularity;
* ``weight_series``: the Fourier series
  2 pi p = 1 + 2 sum_{j>=1} (-b)^j / (a)_j cos(j t), truncated by a tail bound.

``weight_highprec`` evaluates the integral in MPFR arithmetic with a
Gauss-Jacobi rule for the (1-u)^{a-2} factor; it feeds the big-float
orthogonality checks.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from scipy.special import roots_jacobi

from . import _kernels
from .params import BesselParams, ConvergenceError, ParameterError
from .precision import big, big_complex, working_precision

TWO_PI = 2.0 * math.pi


def _check(params: BesselParams) -> tuple[float, float]:
    params.require_weight_regime()
    return float(params.a), float(params.b)


def _as_angles(theta):
    arr = np.asarray(theta, dtype=np.float64)
    return np.atleast_1d(arr), arr.ndim == 0


def _shape_out(values, scalar):
    return float(values[0]) if scalar else values


def weight_integral(params: BesselParams, theta, tol: float = 1e-13):
    """p(theta) from the defining integral, absolute error <= ``tol``.

    ``theta`` may be a scalar or an array of angles in radians.
    """
    a, b = _check(params)
    if tol <= 0:
        raise ParameterError("tol must be positive")
    th, scalar = _as_angles(theta)
    # the kernel controls the error of the integral, which is 2 pi times that of p
    return _shape_out(_kernels.weight_integral(a, b, th, TWO_PI * tol), scalar)


def series_terms(a: float, b: float, tol: float) -> int:
    """Smallest J with sum_{j>J} |b|^j/(a)_j below pi*tol.

    Once |b| < a+J+1 the terms decay at least geometrically with ratio
    r = |b|/(a+J+1), so the tail is at most t_{J+1} / (1 - r).
    """
    ab = abs(b)
    term = 1.0  # |b|^J / (a)_J
    J = 0
    while True:
        nxt = term * ab / (a + J)  # t_{J+1}
        r = ab / (a + J + 1)
        if r < 1 and nxt / (1 - r) < math.pi * tol:
            return J
        term = nxt
        J += 1


def weight_series(params: BesselParams, theta, tol: float = 1e-13):
    """p(theta) from its Fourier series, truncation error <= ``tol``."""
    a, b = _check(params)
    if tol <= 0:
        raise ParameterError("tol must be positive")
    th, scalar = _as_angles(theta)
    return _shape_out(_kernels.weight_series(a, b, th, series_terms(a, b, tol)), scalar)


@dataclass(frozen=True)
class WeightSample:
    theta: float
    value: float
    route: str


def weight_profile(params: BesselParams, thetas, route: str = "integral", tol: float = 1e-13) -> list[WeightSample]:
    fn = {"integral": weight_integral, "series": weight_series}.get(route)
    if fn is None:
        raise ParameterError(f"unknown route {route!r}")
    th = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    vals = fn(params, th, tol)
    return [WeightSample(float(t), float(v), route) for t, v in zip(th, vals)]


# -- big-float integral route ----------------------------------------------

def _jacobi_eval(n, alpha, x):
    """P_n^{(alpha,0)}(x) and P_{n-1}^{(alpha,0)}(x) by the three-term recurrence."""
    beta = 0
    p0 = gmpy2.mpfr(1)
    p1 = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    if n == 0:
        return p0, gmpy2.mpfr(0)
    for k in range(2, n + 1):
        s = 2 * k + alpha + beta
        c1 = 2 * k * (k + alpha + beta) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + alpha * alpha - beta * beta)
        c3 = 2 * (k + alpha - 1) * (k + beta - 1) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1, p0


@lru_cache(maxsize=64)
def gauss_jacobi_unit(alpha: Fraction, n: int, bits: int) -> tuple[tuple, tuple]:
    """Nodes u_i and weights w_i with sum w_i f(u_i) ~ int_0^1 f(u) (1-u)^alpha du.

    Double-precision nodes from scipy are polished by Newton's method on the
    Jacobi polynomial at ``bits`` precision.
    """
    x0, _ = roots_jacobi(n, float(alpha), 0.0)
    with working_precision(bits + 32):
        al = big(alpha)
        beta = 0
        # 2^{al+1} Gamma(n+al+1) Gamma(n+1) / (Gamma(n+al+1) n!) simplifies to 2^{al+1}
        const = gmpy2.mpfr(2) ** (al + 1)
        eps = gmpy2.mpfr(2) ** (-(bits + 16))
        us, ws = [], []
        for xd in x0:
            x = gmpy2.mpfr(float(xd))
            for _ in range(60):
                pn, pm = _jacobi_eval(n, al, x)
                s = 2 * n + al + beta
                dp = (n * ((al - beta) - s * x) * pn + 2 * (n + al) * (n + beta) * pm) / (s * (1 - x * x))
                dx = pn / dp
                x -= dx
                if abs(dx) < eps:
                    break
            pn, pm = _jacobi_eval(n, al, x)
            s = 2 * n + al + beta
            dp = (n * ((al - beta) - s * x) * pn + 2 * (n + al) * (n + beta) * pm) / (s * (1 - x * x))
            w = const / ((1 - x * x) * dp * dp)
            # map [-1, 1] -> [0, 1]: (1-u)^al du = 2^{-al-1} (1-x)^al dx
            us.append((x + 1) / 2)
            ws.append(w / gmpy2.mpfr(2) ** (al + 1))
    with working_precision(bits):
        return tuple(u + 0 for u in us), tuple(w + 0 for w in ws)


def gauss_jacobi_size(b: Fraction, bits: int) -> int:
    """Node count whose Gauss error bound |b|^{2n} e^{|b|} / (2n)! is below 2^-bits."""
    ab = abs(float(b))
    target = -bits * math.log(2) - 10
    n = 2
    while 2 * n * math.log(ab) + ab - math.lgamma(2 * n + 1) > target:
        n += 1
    return n + 2


def weight_highprec(params: BesselParams, thetas, bits: int | None = None) -> list:
    """p at each angle (MPFR values or anything ``big`` accepts) to ~``bits``."""
    params.require_weight_regime()
    with working_precision(bits) as prec:
        n = gauss_jacobi_size(params.b, prec)
        us, ws = gauss_jacobi_unit(params.a - 2, n, prec)
        a, b = big(params.a), big(params.b)
        scale = 2 * (a - 1)
        twopi = 2 * gmpy2.const_pi()
        out = []
        for t in thetas:
            t = big(t)
            ct, st = gmpy2.cos(t) * b, gmpy2.sin(t) * b
            acc = gmpy2.mpfr(0)
            for u, w in zip(us, ws):
                acc += w * gmpy2.exp(-u * ct) * gmpy2.cos(u * st)
            out.append((-1 + scale * acc) / twopi)
        return out


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()


def weight_table(params: BesselParams, nodes: int, bits: int) -> tuple:
    """p(2 pi k / nodes) for k < nodes at ``bits`` precision.

    Values are memoized by the reduced fraction k/nodes, so doubling the node
    count only evaluates the new midpoints.  Uses p(t) = p(2 pi - t).
    """
    with _TABLES_LOCK:
        memo = _TABLES.setdefault((params, bits), {})
    keys = [Fraction(k, nodes) for k in range(nodes)]
    todo = sorted({k for k in keys if k <= Fraction(1, 2) and k not in memo})
    if todo:
        with working_precision(bits):
            twopi = 2 * gmpy2.const_pi()
            vals = weight_highprec(params, [twopi * k.numerator / k.denominator for k in todo], bits)
        with _TABLES_LOCK:
            memo.update(zip(todo, vals))
    return tuple(memo[k if k <= Fraction(1, 2) else 1 - k] for k in keys)


# -- g, rho and the bridge identity ------------------------------------------

def hyp1f1_one(a, w, bits: int | None = None):
    """1F1(1; a; w) = sum_k w^k / (a)_k in MPFR complex arithmetic."""
    with working_precision(bits) as prec:
        w = big_complex(w)
        # guard bits against cancellation when |w| is large
        guard = int(abs(w) / math.log(2)) + 8
    with working_precision(prec + guard):
        w = big_complex(w)
        a = big(a)
        term = gmpy2.mpc(1)
        acc = gmpy2.mpc(1)
        eps = gmpy2.mpfr(2) ** (-(prec + guard))
        k = 0
        while True:
            term = term * w / (a + k)
            acc += term
            k += 1
            if abs(term) <= eps * max(abs(acc), 1) and abs(w) < (a + k) / 2:
                break
    with working_precision(prec):
        return acc + 0


def g_function(params: BesselParams, z, bits: int | None = None):
    """g(z) = -1/2 + 1F1(1; a; -b z), an entire function of z."""
    params.require_weight_regime()
    with working_precision(bits):
        return hyp1f1_one(params.a, -big(params.b) * big_complex(z)) - gmpy2.mpfr(0.5)


def rho(params: BesselParams, z, method: str = "hyp1f1", bits: int | None = None):
    """The Krall-Frink weight rho(z, a, b).

    ``method="hyp1f1"``: 2 pi i rho = a - 1 - (b/z) 1F1(1; a; -b/z).
    ``method="series"``: (1/(2 pi i)) sum_j Gamma(a)/Gamma(a+j-1) (-b/z)^j.
    """
    params.require_weight_regime()
    with working_precision(bits) as prec:
        z = big_complex(z)
        if z == 0:
            raise ParameterError("rho is undefined at z = 0")
        a, b = big(params.a), big(params.b)
        w = -b / z
        twopii = gmpy2.mpc(0, 2 * gmpy2.const_pi())
        if method == "hyp1f1":
            return (a - 1 + w * hyp1f1_one(params.a, w, prec)) / twopii
        if method == "series":
            # Gamma(a)/Gamma(a+j-1): a-1 at j = 0, then 1/(a)_{j-1}
            acc = a - 1
            term = gmpy2.mpc(1)
            eps = gmpy2.mpfr(2) ** (-prec)
            j = 1
            while True:
                term = term * w if j == 1 else term * w / (a + j - 2)
                acc += term
                if abs(term) <= eps * max(abs(acc), 1) and abs(w) < (a + j) / 2:
                    break
                j += 1
            return acc / twopii
        raise ParameterError(f"unknown method {method!r}")


@lru_cache(maxsize=64)
def rho_table(params: BesselParams, nodes: int, bits: int) -> tuple:
    """rho(e^{2 pi i k / nodes}) for k < nodes at ``bits`` precision."""
    with working_precision(bits):
        twopi = 2 * gmpy2.const_pi()
        out = []
        for k in range(nodes):
            t = twopi * k / nodes
            out.append(rho(params, gmpy2.mpc(gmpy2.cos(t), gmpy2.sin(t)), bits=bits))
        return tuple(out)


def rho_on_circle(params: BesselParams, thetas) -> np.ndarray:
    """rho(e^{i theta}) in double precision for an array of angles."""
    a, b = _check(params)
    th = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    w = -b * np.exp(-1j * th)
    return (a - 1 + w * _kernels.hyp1f1_one(a, w)) / (2j * math.pi)


def bridge_identity_residual(params: BesselParams, theta, tol: float = 1e-14):
    """|2 pi p(t) - RHS(t)| with RHS built from rho on the circle:

    RHS = -1 + (2(a-1)/b) cos t - (2 pi i / b)(e^{it} rho(e^{it}) + e^{-it} rho(e^{-it})).
    """
    a, b = _check(params)
    th, scalar = _as_angles(theta)
    lhs = TWO_PI * weight_integral(params, th, tol)
    e = np.exp(1j * th)
    rp = rho_on_circle(params, th)
    rm = rho_on_circle(params, -th)
    rhs = -1 + (2 * (a - 1) / b) * np.cos(th) - (2j * math.pi / b) * (e * rp + rm / e)
    return _shape_out(np.abs(lhs - rhs), scalar)


# -- positivity ---------------------------------------------------------------

@dataclass(frozen=True)
class PositivityThreshold:
    """Root x0 of 2 cos x = e^x on [0, pi/2] and the elementary bound 1/3."""

    x0: float
    bracket: tuple[float, float]
    residual: float
    one_third: Fraction = Fraction(1, 3)

    def admits(self, b) -> bool:
        return 0 < abs(float(b)) < self.x0


def solve_x0(tol: float = 1e-12) -> PositivityThreshold:
    """Bisection for 2 cos x - e^x, which decreases strictly from 1 to -e^{pi/2}."""
    if tol <= 0:
        raise ParameterError("tol must be positive")
    f = lambda x: 2 * math.cos(x) - math.exp(x)  # noqa: E731
    lo, hi = 0.0, math.pi / 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    x0 = 0.5 * (lo + hi)
    return PositivityThreshold(x0=x0, bracket=(lo, hi), residual=abs(f(x0)))


def positivity_scan(params: BesselParams, grid_size: int = 4096, tol: float = 1e-13) -> float:
    """Minimum of p over theta = 2 pi k / grid_size."""
    if grid_size < 1:
        raise ParameterError("grid_size must be positive")
    th = TWO_PI * np.arange(grid_size) / grid_size
    return float(np.min(weight_integral(params, th, tol)))


def m_ab(params: BesselParams, nodes: int = 16, tol: float = 1e-10, max_nodes: int = 1 << 20) -> float:
    """M_{a,b} = (1/|b|) int_0^{2pi} |rho(e^{i t})| dt by the periodic trapezoid rule,
    doubling the node count until successive values differ by less than ``tol``."""
    a, b = _check(params)
    if nodes < 16:
        raise ParameterError("nodes must be at least 16")
    prev = None
    while nodes <= max_nodes:
        th = TWO_PI * np.arange(nodes) / nodes
        val = TWO_PI * float(np.mean(np.abs(rho_on_circle(params, th)))) / abs(b)
        if prev is not None and abs(val - prev) < tol:
            return val
        prev = val
        nodes *= 2
    raise ConvergenceError("M_{a,b} trapezoid did not settle")
