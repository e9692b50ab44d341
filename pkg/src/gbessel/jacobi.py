"""The complex Jacobi matrix of the normalized recurrence

    x p_n = a_{n-1} p_{n-1} + b_n p_n + a_n p_{n+1},

with purely imaginary a_n and real b_n.  The matrix is complex symmetric but
not Hermitian, so its operator norm is a largest singular value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from . import _kernels
from .core_poly import eval_poly, norm_squared, normalized_coeffs, series_coeffs
from .moments import second_kind_exact
from .params import BesselParams, ConvergenceError, HorizonTooSmallError, ParameterError
from .precision import big, big_complex, working_precision


def _check(params: BesselParams, n: int) -> None:
    params.require_weight_regime()
    if n < 0:
        raise ParameterError("n must be nonnegative")


def jacobi_an_squared(params: BesselParams, n: int) -> Fraction:
    """a_n^2 = -b^2 (n+1)(n+a-1) / ((2n+a)^2 (2n+a+1)(2n+a-1)), exact."""
    _check(params, n)
    a, b = params.a, params.b
    return -b * b * (n + 1) * (n + a - 1) / ((2 * n + a) ** 2 * (2 * n + a + 1) * (2 * n + a - 1))


def jacobi_bn(params: BesselParams, n: int) -> Fraction:
    """b_n = -(a-2) b / ((2n+a)(2n+a-2)); b_0 = -b/a, which covers a = 2."""
    _check(params, n)
    a, b = params.a, params.b
    if n == 0:
        return -b / a
    return -(a - 2) * b / ((2 * n + a) * (2 * n + a - 2))


def jacobi_an(params: BesselParams, n: int) -> complex:
    """a_n = b i / (2n+a) * sqrt((n+1)(n+a-1) / ((2n+a+1)(2n+a-1)))."""
    _check(params, n)
    a, b = params.a, params.b
    r = float(b) / float(2 * n + a) * math.sqrt(float((n + 1) * (n + a - 1) / ((2 * n + a + 1) * (2 * n + a - 1))))
    return complex(0.0, r)


def _an_big(params: BesselParams, n: int):
    a, b = params.a, params.b
    r = big(b) / big(2 * n + a) * gmpy2.sqrt(big((n + 1) * (n + a - 1) / ((2 * n + a + 1) * (2 * n + a - 1))))
    return gmpy2.mpc(0, r)


@dataclass(frozen=True)
class TruncatedJacobi:
    """Leading N x N block: diagonal b_0..b_{N-1}, off-diagonal a_0..a_{N-2}."""

    params: BesselParams
    diag: np.ndarray
    off: np.ndarray

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        n = self.size
        m = np.diag(self.diag.astype(np.complex128))
        if n > 1:
            idx = np.arange(n - 1)
            m[idx, idx + 1] = self.off
            m[idx + 1, idx] = self.off
        return m

    def to_json(self, banded: bool = True) -> dict:
        out = {"params": {"a": str(self.params.a), "b": str(self.params.b)}, "size": self.size}
        if banded:
            out["diag"] = [repr(float(d.real)) for d in self.diag]
            out["off"] = [[repr(float(c.real)), repr(float(c.imag))] for c in self.off]
        else:
            out["dense"] = [[[repr(float(c.real)), repr(float(c.imag))] for c in row] for row in self.dense()]
        return out

    def to_text(self, digits: int = 15) -> str:
        """One row per index: n, b_n, Re a_n, Im a_n (a_n is 0 on the last row)."""
        lines = ["n, b_n, Re a_n, Im a_n"]
        for i in range(self.size):
            a = self.off[i] if i < self.size - 1 else 0j
            lines.append(f"{i}, {self.diag[i].real:.{digits}g}, {a.real:.{digits}g}, {a.imag:.{digits}g}")
        return "\n".join(lines) + "\n"


def build_truncated(params: BesselParams, N: int) -> TruncatedJacobi:
    if N < 1:
        raise ParameterError("the truncation size must be at least 1")
    params.require_weight_regime()
    diag = np.array([float(jacobi_bn(params, n)) for n in range(N)], dtype=np.complex128)
    off = np.array([jacobi_an(params, n) for n in range(N - 1)], dtype=np.complex128)
    return TruncatedJacobi(params, diag, off)


def eigen_relation_residual(params: BesselParams, N: int, x, bits: int | None = None,
                            phase_unit=-1j) -> float:
    """max over rows r < N-1 of |(J p)(r) - x p_r(x)| with p = (p_0(x), ..., p_{N-1}(x)).

    ``phase_unit`` replaces the (-i) of the normalization; anything else than
    -1j is only useful as a negative control.
    """
    if N < 2:
        raise ParameterError("the eigen-relation needs N >= 2")
    params.require_weight_regime()
    with working_precision(bits):
        xx = big_complex(x)
        unit = big_complex(phase_unit)
        p = []
        for n in range(N):
            val = eval_poly(series_coeffs(params, n), xx)
            p.append(big_complex(val) * unit ** n * gmpy2.sqrt(big(norm_squared(params.a, n))))
        worst = gmpy2.mpfr(0)
        for r in range(N - 1):
            lhs = big(jacobi_bn(params, r)) * p[r] + _an_big(params, r) * p[r + 1]
            if r > 0:
                lhs += _an_big(params, r - 1) * p[r - 1]
            worst = max(worst, abs(lhs - xx * p[r]))
        return float(worst)


def _row_sums(params: BesselParams, count: int) -> list[float]:
    out = []
    prev = 0.0
    for n in range(count):
        cur = abs(jacobi_an(params, n))
        out.append(prev + abs(float(jacobi_bn(params, n))) + cur)
        prev = cur
    return out


def _a_majorant(params: BesselParams, n: int) -> float:
    # (n+1)(n+a-1) <= ((2n+a)/2)^2, so |a_n| <= |b| / (2 sqrt((2n+a)^2 - 1))
    m = 2 * n + float(params.a)
    return abs(float(params.b)) / (2 * math.sqrt(m * m - 1))


def _tail_majorant(params: BesselParams, n: int) -> float:
    # decreasing in n >= 1; each term dominates its row-sum counterpart
    a = float(params.a)
    b = abs(float(params.b))
    return _a_majorant(params, n - 1) + abs(a - 2) * b / ((2 * n + a) * (2 * n + a - 2)) + _a_majorant(params, n)


def norm_bound_sup(params: BesselParams, horizon: int | None = None, max_horizon: int = 1 << 20) -> float:
    """sup_n (|a_{n-1}| + |b_n| + |a_n|), which bounds the operator norm.

    The maximum over n < horizon is the supremum once a decreasing majorant of
    the row sums at n = horizon falls below it.  An explicit ``horizon`` that
    is too small raises :class:`HorizonTooSmallError`; without one the
    horizon doubles from 64 up to ``max_horizon``.
    """
    params.require_weight_regime()
    if horizon is not None:
        if horizon < 1:
            raise ParameterError("horizon must be at least 1")
        return _sup_at(params, horizon)
    h = 64
    while True:
        try:
            return _sup_at(params, h)
        except HorizonTooSmallError:
            if 2 * h > max_horizon:
                raise
            h *= 2


def _sup_at(params: BesselParams, horizon: int) -> float:
    best = max(_row_sums(params, horizon))
    tail = _tail_majorant(params, horizon)
    if tail > best:
        raise HorizonTooSmallError(f"tail majorant {tail:.3g} at n={horizon} exceeds the finite maximum {best:.3g}")
    return best


def truncated_norm(params: BesselParams, N: int, tol: float = 1e-12, maxiter: int = 10 ** 4) -> float:
    """Largest singular value of the N x N truncation by power iteration on J^H J."""
    J = build_truncated(params, N)
    sigma, _ = _kernels.power_iteration(J.diag, J.off, tol, maxiter)
    if sigma < 0:
        raise ConvergenceError(f"power iteration did not settle in {maxiter} iterations")
    return float(sigma)


def solve_difference(params: BesselParams, alpha, beta, z, N: int, bits: int | None = None) -> list:
    """u_0..u_N from u_0 = alpha p_0, u_1 = alpha p_1(z) + beta / a_0 and

        a_n u_{n+1} = (z - b_n) u_n - a_{n-1} u_{n-1},  n >= 1.
    """
    if N < 1:
        raise ParameterError("N must be at least 1")
    params.require_weight_regime()
    with working_precision(bits):
        zz = big_complex(z)
        al, be = big_complex(alpha), big_complex(beta)
        u = [al * eval_poly(normalized_coeffs(params, 0), zz),
             al * eval_poly(normalized_coeffs(params, 1), zz) + be / _an_big(params, 0)]
        for n in range(1, N):
            nxt = ((zz - big(jacobi_bn(params, n))) * u[n] - _an_big(params, n - 1) * u[n - 1]) / _an_big(params, n)
            u.append(nxt)
        return u


def general_solution(params: BesselParams, alpha, beta, z, N: int, bits: int | None = None) -> list:
    """alpha p_n(z) + beta q_n(z) for n = 0..N from the polynomial layer."""
    params.require_weight_regime()
    with working_precision(bits):
        zz = big_complex(z)
        al, be = big_complex(alpha), big_complex(beta)
        return [al * eval_poly(normalized_coeffs(params, n), zz) + be * big_complex(eval_poly(second_kind_exact(params, n), zz))
                for n in range(N + 1)]
