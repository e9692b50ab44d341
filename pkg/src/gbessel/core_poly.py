"""Generalized Bessel polynomials y_n(x, a, b) and their normalized form p_n.

Coefficients are exact ``Fraction`` values whenever the parameters are
rational.  A complex ``b`` switches the coefficients to MPFR complex numbers
at the current working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import gmpy2
import numpy as np

from . import _kernels
from .params import BesselParams, DegenerateStepError, ParameterError
from .precision import MPC, MPFR, big, big_complex, working_precision


def poch(x, k: int):
    """Rising factorial (x)_k; works for Fraction, int and MPFR inputs."""
    out = 1
    for i in range(k):
        out = out * (x + i)
    return out


def norm_squared(a: Fraction, n: int) -> Fraction:
    """N_n = (a-1)_n (2n+a-1) / (n! (a-1)), the square of the normalizer of p_n."""
    return poch(a - 1, n) * (2 * n + a - 1) / (math.factorial(n) * (a - 1))


@dataclass(frozen=True)
class PolyCoeffs:
    """A polynomial c_0 + c_1 x + ... stored low order first.

    The value represented is ``(-i)**phase * sqrt(norm_squared) * sum c_j x^j``.
    Keeping the radical and the unit phase outside the coefficients lets
    p_n and q_n live in the exact layer: their ``coeffs`` stay rational.
    """

    coeffs: tuple
    kind: str = "y"
    index: int = 0
    phase: int = 0
    norm_squared: Fraction = Fraction(1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coeffs)

    @property
    def has_unit_scale(self) -> bool:
        return self.phase % 4 == 0 and self.norm_squared == 1

    def scale(self):
        """(-i)**phase * sqrt(norm_squared) at the current precision."""
        root = gmpy2.sqrt(big(self.norm_squared))
        return [mpc_(root, 0), mpc_(0, -root), mpc_(-root, 0), mpc_(0, root)][self.phase % 4]

    def numeric(self) -> list:
        """Coefficients with the scale folded in, as MPFR complex numbers."""
        s = self.scale()
        return [s * big_complex(c) for c in self.coeffs]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "index": self.index,
            "phase": self.phase % 4,
            "norm_squared": _scalar_json(self.norm_squared),
            "coeffs": [_scalar_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolyCoeffs":
        return cls(
            coeffs=tuple(_scalar_from_json(c) for c in obj["coeffs"]),
            kind=obj.get("kind", "y"),
            index=int(obj.get("index", 0)),
            phase=int(obj.get("phase", 0)),
            norm_squared=Fraction(obj.get("norm_squared", "1")),
        )


def mpc_(re, im):
    return gmpy2.mpc(re, im)


def _scalar_json(c):
    if isinstance(c, (Fraction, int)):
        c = Fraction(c)
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, (MPC, complex)):
        return [str(c.real), str(c.imag)]
    return str(c)


def _scalar_from_json(c):
    if isinstance(c, list):
        return gmpy2.mpc(gmpy2.mpfr(c[0]), gmpy2.mpfr(c[1]))
    return Fraction(c)


@dataclass(frozen=True)
class NormFactor:
    n: int
    squared: Fraction
    root: object = field(repr=False)
    phase: int

    @property
    def phase_value(self) -> complex:
        return (-1j) ** (self.phase % 4)


def _parameters_for_coeffs(params: BesselParams):
    if params.real_b:
        return params.a, params.b
    return big(params.a), big_complex(params.b)


def series_coeffs(params: BesselParams, n: int, bits: int | None = None) -> PolyCoeffs:
    """Coefficients of y_n from the terminating 2F0(-n, n+a-1; ; -x/b) series.

    The x^j coefficient is C(n, j) (n+a-1)_j / b^j.

    >>> series_coeffs(BesselParams(2, 2), 2).coeffs
    (Fraction(1, 1), Fraction(3, 1), Fraction(3, 1))
    """
    if n < 0:
        raise ParameterError("n must be nonnegative")
    if params.real_b:
        return _exact_series(params, n)
    with working_precision(bits):
        a, b = _parameters_for_coeffs(params)
        return PolyCoeffs(_ratio_terms(big_complex(1), a, b, n), kind="y", index=n)


def _ratio_terms(c, a, b, n):
    out = [c]
    for j in range(n):
        # ratio of consecutive terms of (-n)_j (n+a-1)_j (-1/b)^j / j!
        c = c * (n - j) * (n + a - 1 + j) / ((j + 1) * b)
        out.append(c)
    return tuple(out)


@lru_cache(maxsize=4096)
def _exact_series(params: BesselParams, n: int) -> PolyCoeffs:
    return PolyCoeffs(_ratio_terms(Fraction(1), params.a, params.b, n), kind="y", index=n)


def _add(p: Sequence, q: Sequence) -> list:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return out


def _scale(p: Sequence, s) -> list:
    return [c * s for c in p]


def _shift(p: Sequence) -> list:
    return [0 * p[0] if p else 0] + list(p)


def multiply(p: PolyCoeffs, q: PolyCoeffs) -> PolyCoeffs:
    """Product polynomial; phases add and radicands multiply."""
    if not p.coeffs or not q.coeffs:
        return PolyCoeffs((), kind="w")
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, x in enumerate(p.coeffs):
        for j, y in enumerate(q.coeffs):
            out[i + j] = out[i + j] + x * y
    return PolyCoeffs(tuple(out), kind="w", index=p.index + q.index,
                      phase=(p.phase + q.phase) % 4,
                      norm_squared=p.norm_squared * q.norm_squared)


def recurrence_coeffs(params: BesselParams, n: int, bits: int | None = None) -> PolyCoeffs:
    """y_n from the three-term recurrence

        (k+a-1)(2k+a-2) y_{k+1}
            = [(2k+a)(2k+a-2) x/b + a-2] (2k+a-1) y_k + k(2k+a) y_{k-1}.

    The k = 0 step has prefactor (a-1)(a-2); when it vanishes (a = 2) y_1 is
    taken from the series instead.  A vanishing prefactor at k >= 1 raises
    :class:`DegenerateStepError`.
    """
    if n < 0:
        raise ParameterError("n must be nonnegative")
    with working_precision(bits):
        return _recurrence(params, n)


def _recurrence(params, n):
    a, b = _parameters_for_coeffs(params)
    one = Fraction(1) if params.real_b else big_complex(1)
    prev, cur = None, [one]
    if n == 0:
        return PolyCoeffs((one,), kind="y", index=0)
    for k in range(n):
        pre = (k + a - 1) * (2 * k + a - 2)
        if pre == 0:
            if k == 0:
                prev, cur = cur, list(series_coeffs(params, 1, bits=gmpy2.get_context().precision).coeffs)
                continue
            raise DegenerateStepError(f"recurrence prefactor vanishes at step k={k}")
        lin = _add(_scale(_shift(cur), (2 * k + a) * (2 * k + a - 2) / b), _scale(cur, a - 2))
        nxt = _scale(lin, 2 * k + a - 1)
        if prev is not None:
            nxt = _add(nxt, _scale(prev, k * (2 * k + a)))
        prev, cur = cur, _scale(nxt, 1 / pre if isinstance(pre, Fraction) else one / pre)
    return PolyCoeffs(tuple(cur), kind="y", index=n)


def normalization(params: BesselParams, n: int, bits: int | None = None) -> NormFactor:
    """The factor (-i)^n sqrt(N_n) turning y_n into p_n."""
    params.require_weight_regime()
    if n < 0:
        raise ParameterError("n must be nonnegative")
    sq = norm_squared(params.a, n)
    with working_precision(bits):
        root = gmpy2.sqrt(big(sq))
    return NormFactor(n=n, squared=sq, root=root, phase=n % 4)


def normalized_coeffs(params: BesselParams, n: int) -> PolyCoeffs:
    """p_n as rational y_n coefficients tagged with phase n and radicand N_n."""
    params.require_weight_regime()
    y = series_coeffs(params, n)
    return PolyCoeffs(y.coeffs, kind="p", index=n, phase=n % 4,
                      norm_squared=norm_squared(params.a, n))


def eval_poly(poly: PolyCoeffs, z, bits: int | None = None):
    """Evaluate by nested multiplication.

    Exact rational input (rational coefficients, unit scale, rational z)
    gives an exact ``Fraction``.  Everything else is evaluated in MPFR
    complex arithmetic at ``bits`` (default working precision).
    """
    if not poly.coeffs:
        return Fraction(0) if poly.is_exact and _is_rational(z) else gmpy2.mpc(0)
    if poly.is_exact and poly.has_unit_scale and _is_rational(z):
        z = Fraction(z)
        acc = Fraction(0)
        for c in reversed(poly.coeffs):
            acc = acc * z + c
        return acc
    with working_precision(bits):
        zz = big_complex(z)
        acc = gmpy2.mpc(0)
        for c in reversed(poly.coeffs):
            acc = acc * zz + big_complex(c)
        if not poly.has_unit_scale:
            acc = acc * poly.scale()
        return acc


def eval_poly_grid(poly: PolyCoeffs, z) -> np.ndarray:
    """Double-precision evaluation on an array of points (hot kernel)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if not poly.coeffs:
        return np.zeros(z.shape, dtype=np.complex128)
    coeffs = np.array([complex(c) for c in poly.coeffs], dtype=np.complex128)
    scale = (-1j) ** (poly.phase % 4) * math.sqrt(poly.norm_squared)
    return scale * _kernels.horner(coeffs, z)


def _is_rational(z) -> bool:
    return isinstance(z, (int, Fraction)) and not isinstance(z, bool)


def log_bound_yn(params: BesselParams, n: int, z) -> float:
    """Natural log of the right-hand side of the |y_n| growth bound."""
    if n < 1:
        raise ParameterError("the growth bound is stated for n >= 1")
    az = abs(complex(z))
    ab = abs(complex(params.b)) if not params.real_b else abs(float(params.b))
    if az <= ab:
        raise ParameterError(f"growth bound requires |z| > |b| (|z|={az}, |b|={ab})")
    a = float(params.a)
    if a <= 1:
        raise ParameterError("growth bound requires a > 1")
    return (n * math.log(az) + math.lgamma(2 * n + a - 1) + 1.0
            - n * math.log(ab) - math.lgamma(n + a - 1))


def _exp_or_inf(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def bound_yn(params: BesselParams, n: int, z) -> float:
    """|z|^n Gamma(2n+a-1) e / (|b|^n Gamma(n+a-1)), an upper bound for |y_n(z)|."""
    return _exp_or_inf(log_bound_yn(params, n, z))


def bound_pn(params: BesselParams, n: int, z) -> float:
    """Upper bound for |p_n(z)|: the y_n bound times sqrt(N_n)."""
    params.require_weight_regime()
    return _exp_or_inf(log_bound_yn(params, n, z) + 0.5 * math.log(norm_squared(params.a, n)))
