"""Periodic quadrature on [0, 2 pi): orthogonality by quadrature, the C-form,
second-kind polynomials by their integral representations, and the growth
bounds for p_n, q_n and general solutions of the difference equation.

The big-float routines sample the weight at theta_k = 2 pi k / N.  Every
integrand here is a trigonometric polynomial times p (or rho), whose Fourier
coefficients decay like |b|^j / (a)_j, so the trapezoid rule is exact up to an
aliasing term that is negligible once N is a few times the degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .core_poly import (
    PolyCoeffs,
    eval_poly,
    log_bound_yn,
    norm_squared,
    normalized_coeffs,
    series_coeffs,
)
from .moments import orthogonality_matrix, second_kind_exact
from .params import BesselParams, ConvergenceError, ParameterError, PrecisionBudgetError
from .precision import big, big_complex, default_bits, working_precision
from .weight import rho_table, solve_x0, weight_integral, weight_table

TWO_PI = 2.0 * math.pi
GUARD_BITS = 40
DEFAULT_CEILING = 1024
CIRCLE_GAP = 1e-6


def trapezoid(fvals):
    """(2 pi / N) sum f(theta_k) for samples on an equispaced grid of [0, 2 pi)."""
    if isinstance(fvals, np.ndarray):
        if fvals.shape[0] < 2:
            raise ParameterError("the trapezoid rule needs at least 2 nodes")
        return TWO_PI * np.mean(fvals, axis=0)
    vals = list(fvals)
    if len(vals) < 2:
        raise ParameterError("the trapezoid rule needs at least 2 nodes")
    acc = vals[0]
    for v in vals[1:]:
        acc = acc + v
    return acc * (2 * gmpy2.const_pi()) / len(vals)


def unit_roots(nodes: int) -> list:
    """e^{2 pi i k / N} at the current precision."""
    twopi = 2 * gmpy2.const_pi()
    out = []
    for k in range(nodes):
        t = twopi * k / nodes
        out.append(gmpy2.mpc(gmpy2.cos(t), gmpy2.sin(t)))
    return out


def _x0() -> float:
    return solve_x0(1e-13).x0


def _require_positive_regime(params: BesselParams) -> None:
    params.require_weight_regime()
    x0 = _x0()
    if not abs(params.b) < x0:
        raise ParameterError(f"|b| = {float(abs(params.b))} is not below x0 = {x0:.6f}; p need not be positive")


def _require_off_circle(z) -> None:
    if abs(abs(complex(z)) - 1.0) < CIRCLE_GAP:
        raise ParameterError("z must stay away from the unit circle (| |z| - 1 | >= 1e-6)")


def required_bits(params: BesselParams, max_n: int) -> int:
    """Guard-banded precision for integrating y_n y_m p with n, m <= max_n.

    On the circle |y_n| is at most the growth bound at |z| = 1, so the
    integrand can be as large as its square; the result is O(1), and all those
    leading bits cancel.
    """
    if max_n < 1:
        return GUARD_BITS
    log2_mag = 2 * log_bound_yn(params, max_n, 1) / math.log(2)
    return int(math.ceil(max(log2_mag, 0.0))) + GUARD_BITS


def _choose_bits(params, max_n, bits, ceiling):
    need = required_bits(params, max_n)
    if need > ceiling:
        raise PrecisionBudgetError(f"degree {max_n} needs about {need} bits, above the ceiling of {ceiling}")
    return max(default_bits() if bits is None else int(bits), need)


@dataclass(frozen=True)
class QuadratureReport:
    n: int
    m: int
    nodes: int
    target: Fraction
    computed: object = field(repr=False)
    residual: float

    def to_json(self) -> dict:
        c = complex(self.computed)
        return {
            "n": self.n,
            "m": self.m,
            "target": f"{self.target.numerator}/{self.target.denominator}",
            "computed": [repr(c.real), repr(c.imag)],
            "residual": self.residual,
        }


@dataclass
class OrthogonalityReport:
    params: BesselParams
    nodes: int
    bits: int
    entries: list
    refinement_delta: float

    @property
    def max_residual(self) -> float:
        return max(e.residual for row in self.entries for e in row)

    def to_json(self) -> dict:
        return {
            "params": {"a": str(self.params.a), "b": str(self.params.b)},
            "nodes": self.nodes,
            "precision_bits": self.bits,
            "refinement_delta": self.refinement_delta,
            "entries": [e.to_json() for row in self.entries for e in row],
        }


def _gram_by_quadrature(params: BesselParams, max_n: int, nodes: int, bits: int):
    pw = weight_table(params, nodes, bits)
    with working_precision(bits):
        xs = unit_roots(nodes)
        polys = [series_coeffs(params, n).coeffs for n in range(max_n + 1)]
        vals = []
        for c in polys:
            cc = [big(q) for q in c]
            row = []
            for x in xs:
                acc = gmpy2.mpc(0)
                for q in reversed(cc):
                    acc = acc * x + q
                row.append(acc)
            vals.append(row)
        weighted = [[v * w for v, w in zip(row, pw)] for row in vals]
        scale = 2 * gmpy2.const_pi() / nodes
        g = [[None] * (max_n + 1) for _ in range(max_n + 1)]
        for n in range(max_n + 1):
            for m in range(n, max_n + 1):
                acc = gmpy2.mpc(0)
                for u, v in zip(weighted[n], vals[m]):
                    acc += u * v
                g[n][m] = g[m][n] = acc * scale
        return g


def verify_orthogonality(params: BesselParams, max_n: int, nodes: int = 1024, bits: int | None = None,
                         ceiling: int = DEFAULT_CEILING, refine_tol: float = 1e-12,
                         max_nodes: int = 1 << 15) -> OrthogonalityReport:
    """Integrate y_n(e^{it}) y_m(e^{it}) p(t) over [0, 2 pi) for n, m <= max_n.

    The node count doubles from ``nodes`` until two successive Gram matrices
    differ by less than ``refine_tol``; each entry is compared with the exact
    rational value of the moment functional.
    """
    _require_positive_regime(params)
    if max_n < 0:
        raise ParameterError("max_n must be nonnegative")
    bits = _choose_bits(params, max_n, bits, ceiling)
    target = orthogonality_matrix(params, max_n)
    prev = _gram_by_quadrature(params, max_n, nodes, bits)
    delta = math.inf
    while True:
        if nodes * 2 > max_nodes:
            raise ConvergenceError(f"no settled quadrature below {max_nodes} nodes")
        nodes *= 2
        cur = _gram_by_quadrature(params, max_n, nodes, bits)
        with working_precision(bits):
            delta = max(float(abs(cur[n][m] - prev[n][m])) for n in range(max_n + 1) for m in range(max_n + 1))
        prev = cur
        if delta < refine_tol:
            break
    with working_precision(bits):
        entries = [[QuadratureReport(n, m, nodes, target[n][m], cur[n][m],
                                     float(abs(cur[n][m] - big(target[n][m]))))
                    for m in range(max_n + 1)] for n in range(max_n + 1)]
    return OrthogonalityReport(params, nodes, bits, entries, delta)


def c_form(f, g, params: BesselParams, nodes: int = 1024, tol: float = 1e-13) -> complex:
    """[f, g]_C = int f(t) g(t) p(t) dt in double precision.

    ``f`` and ``g`` map an array of angles to an array of values; no factor is
    conjugated, which is the point of the C-form.
    """
    th = TWO_PI * np.arange(nodes) / nodes
    fv = np.asarray(f(th), dtype=np.complex128) * np.ones(nodes)
    gv = np.asarray(g(th), dtype=np.complex128) * np.ones(nodes)
    return complex(trapezoid(fv * gv * weight_integral(params, th, tol)))


# -- second-kind polynomials --------------------------------------------------

@dataclass(frozen=True)
class KernelSample:
    n: int
    z: complex
    theta: float
    value: object


def _divided_difference(coeffs, z, x, near: bool):
    """(P(z) - P(x)) / (z - x); synthetic division of P by (x - z) when x ~ z."""
    if not coeffs:
        return gmpy2.mpc(0)
    if near:
        # quotient Q with P(x) - P(z) = (x - z) Q(x): b_{d-1} = c_d, b_{k-1} = c_k + z b_k
        d = len(coeffs) - 1
        q = [None] * d
        acc = gmpy2.mpc(0)
        for k in range(d, 0, -1):
            acc = coeffs[k] + z * acc
            q[k - 1] = acc
        out = gmpy2.mpc(0)
        for c in reversed(q):
            out = out * x + c
        return out
    pz = gmpy2.mpc(0)
    px = gmpy2.mpc(0)
    for c in reversed(coeffs):
        pz = pz * z + c
        px = px * x + c
    return (pz - px) / (z - x)


def kernel(params: BesselParams, n: int, z, theta, bits: int | None = None) -> KernelSample:
    """k_n(z, t) = (p_n(z) - p_n(e^{it})) / (z - e^{it})."""
    params.require_weight_regime()
    with working_precision(bits) as prec:
        coeffs = normalized_coeffs(params, n).numeric()
        zz = big_complex(z)
        t = big(theta)
        x = gmpy2.mpc(gmpy2.cos(t), gmpy2.sin(t))
        near = abs(zz - x) < gmpy2.mpfr(2) ** (-prec // 4)
        value = _divided_difference(coeffs, zz, x, near)
    return KernelSample(n=n, z=complex(z), theta=float(theta), value=value)


def kernel_bound(params: BesselParams, n: int, z) -> float:
    """(|z|^n + 1)/|1 - |z|| * Gamma(2n+a-1)/(|b|^n Gamma(n+a-1)) * sqrt(N_n) * e."""
    r = abs(complex(z))
    _require_off_circle(z)
    logg = log_bound_yn(params, n, z) - n * math.log(r)
    val = logg + 0.5 * math.log(norm_squared(params.a, n)) - math.log(abs(1 - r))
    return (r ** n + 1) * math.exp(val)


def _q_bits(params, n, z, bits):
    if n < 1:
        return default_bits() if bits is None else bits
    r = max(abs(complex(z)), 1.0)
    ab = float(abs(params.b))
    mag = (n * math.log(r) + math.lgamma(2 * n + float(params.a) - 1) - n * math.log(ab)
           - math.lgamma(n + float(params.a) - 1) + 0.5 * math.log(norm_squared(params.a, n)))
    need = int(math.ceil(max(mag, 0) / math.log(2))) + 2 * GUARD_BITS
    return max(default_bits() if bits is None else int(bits), need)


def _check_nodes(n, nodes):
    if nodes < 2 * (n + 1):
        raise ParameterError(f"{nodes} nodes are too few for degree {n}")


def second_kind_quadrature(params: BesselParams, n: int, z, nodes: int = 256, bits: int | None = None):
    """q_n(z) = int_0^{2pi} k_n(z, t) p(t) dt (requires |b| < x0)."""
    _require_positive_regime(params)
    _require_off_circle(z)
    _check_nodes(n, nodes)
    bits = _q_bits(params, n, z, bits)
    pw = weight_table(params, nodes, bits)
    with working_precision(bits):
        coeffs = normalized_coeffs(params, n).numeric()
        zz = big_complex(z)
        vals = [_divided_difference(coeffs, zz, x, False) * w for x, w in zip(unit_roots(nodes), pw)]
        return trapezoid(vals)


def second_kind_rho(params: BesselParams, n: int, z, nodes: int = 256, bits: int | None = None):
    """q_n(z) = -(1/b) contour integral of k_n(z, x) rho(x) dx over |x| = 1,

    parametrized by x = e^{it}, dx = i x dt.  No positivity of p is needed.
    """
    params.require_weight_regime()
    _require_off_circle(z)
    _check_nodes(n, nodes)
    bits = _q_bits(params, n, z, bits)
    with working_precision(bits) as prec:
        coeffs = normalized_coeffs(params, n).numeric()
        zz = big_complex(z)
        ii = gmpy2.mpc(0, 1)
        rt = rho_table(params, nodes, prec)
        vals = [_divided_difference(coeffs, zz, x, False) * r * ii * x for x, r in zip(unit_roots(nodes), rt)]
        return -trapezoid(vals) / big(params.b)


# -- growth bounds --------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool


def _require_bound_region(params: BesselParams, n: int, z) -> None:
    params.require_weight_regime()
    if not 0 < abs(params.b) < Fraction(1, 3):
        raise ParameterError("the second-kind bound is stated for b in (-1/3, 1/3) \\ {0}")
    if n < 1:
        raise ParameterError("the bound is stated for n >= 1")
    if not abs(complex(z)) > abs(float(params.b)):
        raise ParameterError("the bound requires |z| > |b|")
    _require_off_circle(z)


def check_qn_bound(params: BesselParams, n: int, z, rhs_scale: float = 1.0) -> BoundCheck:
    """|q_n(z)| against (|z|^n+1)/|1-|z|| * Gamma-ratio * sqrt(N_n) * e.

    ``rhs_scale`` only exists for negative controls.
    """
    _require_bound_region(params, n, z)
    lhs = float(abs(eval_poly(second_kind_exact(params, n), complex(z))))
    rhs = kernel_bound(params, n, z) * rhs_scale
    return BoundCheck(lhs, rhs, lhs <= rhs)


def check_general_solution_bound(params: BesselParams, alpha, beta, n: int, z,
                                 rhs_scale: float = 1.0) -> BoundCheck:
    """|alpha p_n(z) + beta q_n(z)| against
    (|alpha| |z|^n + |beta| (|z|^n+1)/|1-|z||) * Gamma-ratio * sqrt(N_n) * e."""
    _require_bound_region(params, n, z)
    with working_precision():
        zz = complex(z)
        u = big_complex(alpha) * eval_poly(normalized_coeffs(params, n), zz) \
            + big_complex(beta) * eval_poly(second_kind_exact(params, n), zz)
        lhs = float(abs(u))
    r = abs(zz)
    common = math.exp(log_bound_yn(params, n, zz) - n * math.log(r)
                      + 0.5 * math.log(norm_squared(params.a, n)))
    rhs = (abs(alpha) * r ** n + abs(beta) * (r ** n + 1) / abs(1 - r)) * common * rhs_scale
    return BoundCheck(lhs, rhs, lhs <= rhs)
