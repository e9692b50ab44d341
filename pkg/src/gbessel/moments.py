"""Exact moment functionals and orthogonality without quadrature.

The functional S~ acts on polynomials through its moments
m_n = (-b)^n / (a)_n; the Krall-Frink functional S has moments -b m_n, and the
functional that makes the normalized p_n orthonormal coincides with S~.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core_poly import PolyCoeffs, multiply, norm_squared, poch, series_coeffs
from .params import BesselParams, NonRationalError, ParameterError
from .precision import big_complex, working_precision


class MomentSequence:
    """Lazily extended exact moments m_n = (-b)^n / (a)_n.

    Extension happens under a lock; readers of already computed entries
    never block on each other beyond list indexing.
    """

    def __init__(self, params: BesselParams):
        if not params.real_b:
            raise NonRationalError("exact moments need rational a and b")
        self.params = params
        self._values = [Fraction(1)]
        self._lock = threading.Lock()

    def extend_to(self, n: int) -> None:
        if n < len(self._values):
            return
        with self._lock:
            vals = self._values
            a, b = self.params.a, self.params.b
            while len(vals) <= n:
                k = len(vals) - 1
                # m_{k+1} (a + k) + b m_k = 0
                vals.append(vals[k] * (-b) / (a + k))

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        self.extend_to(n)
        return self._values[n]

    def krall_frink(self, n: int) -> Fraction:
        """m'_n = S(x^n) = -b m_n."""
        return -self.params.b * self[n]


@lru_cache(maxsize=256)
def moment_sequence(params: BesselParams) -> MomentSequence:
    return MomentSequence(params)


def moment(params: BesselParams, n: int) -> Fraction:
    if n < 0:
        raise ParameterError("moment index must be nonnegative")
    return moment_sequence(params.require_real())[n]


def apply_functional(params: BesselParams, poly: PolyCoeffs, bits: int | None = None):
    """S~(w) = sum_j c_j m_j.

    Exact (a ``Fraction``) when the coefficients are rational and the
    polynomial carries no radical/phase scale; otherwise the rational sum is
    multiplied by the scale in MPFR complex arithmetic.
    """
    ms = moment_sequence(params.require_real())
    if not poly.coeffs:
        return Fraction(0)
    ms.extend_to(poly.degree)
    if poly.is_exact:
        total = sum((Fraction(c) * ms[j] for j, c in enumerate(poly.coeffs)), Fraction(0))
        if poly.has_unit_scale:
            return total
        with working_precision(bits):
            return big_complex(total) * poly.scale()
    with working_precision(bits):
        total = sum((big_complex(c) * big_complex(ms[j]) for j, c in enumerate(poly.coeffs)), big_complex(0))
        return total if poly.has_unit_scale else total * poly.scale()


def diag_closed_form(a: Fraction, n: int) -> Fraction:
    """S~(y_n^2) = (-1)^n n! / ((2n+a-1) (a)_{n-1}), with the value 1 at n = 0."""
    if n == 0:
        return Fraction(1)
    return Fraction((-1) ** n * math.factorial(n)) / ((2 * n + a - 1) * poch(a, n - 1))


def printed_cn(params: BesselParams, n: int) -> Fraction:
    """c_n as printed in the Krall-Frink normalization, with denominator
    (n+a-1)[n+a-2]_{n-1}.  Kept only for the discrepancy report: it does not
    agree with the moment functional for n >= 1."""
    a, b = params.a, params.b
    if n == 0:
        return -b
    falling = Fraction(1)
    for i in range(n - 1):
        falling *= n + a - 2 - i
    return Fraction((-1) ** (n + 1) * math.factorial(n)) * b / ((n + a - 1) * falling)


@dataclass(frozen=True)
class NormConstant:
    """Squared norms of y_n.

    ``diag`` is S~(y_n^2); ``cn`` = -b * diag is the Krall-Frink norm S(y_n^2).
    ``printed`` holds the alternative closed form for comparison.
    """

    n: int
    cn: Fraction
    diag: Fraction
    printed: Fraction

    @property
    def printed_matches(self) -> bool:
        return self.printed == self.cn


def _check_exact(params: BesselParams) -> BesselParams:
    params.require_weight_regime()
    return params


def norm_constant(params: BesselParams, n: int) -> NormConstant:
    _check_exact(params)
    if n < 0:
        raise ParameterError("n must be nonnegative")
    y = series_coeffs(params, n)
    diag = apply_functional(params, multiply(y, y))
    closed = diag_closed_form(params.a, n)
    if diag != closed:
        raise ArithmeticError(f"S~(y_{n}^2) = {diag} disagrees with closed form {closed}")
    return NormConstant(n=n, cn=-params.b * diag, diag=diag, printed=printed_cn(params, n))


def _gram(params: BesselParams, N: int) -> list[list[Fraction]]:
    ms = moment_sequence(params)
    ms.extend_to(2 * N)
    ys = [series_coeffs(params, n).coeffs for n in range(N + 1)]
    # h[n][k] = S~(y_n x^k), so S~(y_n y_m) = sum_k c^m_k h[n][k]
    h = [[sum((c * ms[j + k] for j, c in enumerate(y)), Fraction(0)) for k in range(N + 1)] for y in ys]
    g = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]
    for n in range(N + 1):
        for m in range(n, N + 1):
            v = sum((c * h[n][k] for k, c in enumerate(ys[m])), Fraction(0))
            g[n][m] = g[m][n] = v
    return g


def orthogonality_matrix(params: BesselParams, N: int) -> list[list[Fraction]]:
    """Exact Gram matrix S~(y_n y_m), 0 <= n, m <= N."""
    _check_exact(params)
    if N < 0:
        raise ParameterError("N must be nonnegative")
    return _gram(params, N)


def normalized_orthogonality(params: BesselParams, N: int) -> list[list[Fraction]]:
    """Exact Gram matrix of the normalized p_n under the same functional.

    p_n p_m = (-i)^(n+m) sqrt(N_n N_m) y_n y_m.  Off the diagonal the y-Gram
    entry is an exact zero, so the radical never has to be formed; on the
    diagonal the product is (-1)^n N_n S~(y_n^2), a rational.
    """
    g = orthogonality_matrix(params, N)
    out = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]
    for n in range(N + 1):
        for m in range(N + 1):
            if n == m:
                out[n][n] = (-1) ** n * norm_squared(params.a, n) * g[n][n]
            elif g[n][m] != 0:
                raise ArithmeticError(f"S~(y_{n} y_{m}) = {g[n][m]} is not zero")
    return out


@lru_cache(maxsize=4096)
def second_kind_exact(params: BesselParams, n: int) -> PolyCoeffs:
    """q_n(z) = S~_x[(p_n(z) - p_n(x)) / (z - x)] by moment expansion.

    Returns the rational part; the (phase, radicand) pair of p_n is carried
    in the result's scale, so ``eval_poly`` gives the true q_n value.
    """
    _check_exact(params)
    if n < 0:
        raise ParameterError("n must be nonnegative")
    ms = moment_sequence(params)
    c = series_coeffs(params, n).coeffs
    # (z^j - x^j)/(z - x) = sum_{l<j} z^l x^{j-1-l}
    q = tuple(sum((c[j] * ms[j - 1 - l] for j in range(l + 1, n + 1)), Fraction(0)) for l in range(n))
    return PolyCoeffs(q, kind="q", index=n, phase=n % 4, norm_squared=norm_squared(params.a, n))
