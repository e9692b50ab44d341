"""Seeded random suites for the growth bounds of y_n, p_n, q_n and of general
solutions alpha p_n + beta q_n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core_poly import bound_pn, bound_yn, eval_poly, normalized_coeffs, series_coeffs
from .params import BesselParams, ParameterError
from .precision import working_precision
from .quadrature import CIRCLE_GAP, check_general_solution_bound, check_qn_bound


@dataclass(frozen=True)
class BoundSample:
    check: str
    index: int
    n: int
    z: complex
    lhs: float
    rhs: float
    alpha: complex | None = None
    beta: complex | None = None

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass
class SuiteReport:
    name: str
    params: BesselParams
    seed: int
    samples: list = field(default_factory=list)
    rejected: int = 0

    @property
    def violations(self) -> int:
        return sum(not s.holds for s in self.samples)


def _draw_z(rng, bmag: float, zmax: float, avoid_circle: bool):
    """Uniform on the disk |z| <= zmax; points with |z| <= |b| (or too close
    to the unit circle) are rejected before anything is evaluated."""
    rejected = 0
    while True:
        z = complex(*rng.uniform(-zmax, zmax, size=2))
        r = abs(z)
        if r > zmax or r <= bmag or (avoid_circle and abs(r - 1.0) < CIRCLE_GAP):
            rejected += 1
            continue
        return z, rejected


def lemma_suite(params: BesselParams, samples: int = 1000, seed: int = 0, max_n: int = 12,
                zmax: float = 4.0, rhs_scale: float = 1.0, extra=()) -> SuiteReport:
    """|y_n(z)| and |p_n(z)| against their growth bounds at random (n, z).

    ``extra`` appends hand-picked (n, z) pairs; ``rhs_scale`` shrinks the
    right-hand sides for negative controls.
    """
    if max_n < 1:
        raise ParameterError("max_n must be at least 1")
    with_p = params.real_b and params.a > 1
    rng = np.random.default_rng(seed)
    bmag = abs(complex(params.b))
    report = SuiteReport("lemma", params, seed)
    points = []
    for _ in range(samples):
        n = int(rng.integers(1, max_n + 1))
        z, rej = _draw_z(rng, bmag, zmax, False)
        report.rejected += rej
        points.append((n, z))
    points.extend((int(n), complex(z)) for n, z in extra)
    with working_precision():
        for i, (n, z) in enumerate(points):
            y = float(abs(eval_poly(series_coeffs(params, n), z)))
            report.samples.append(BoundSample("y", i, n, z, y, bound_yn(params, n, z) * rhs_scale))
            if with_p:
                p = float(abs(eval_poly(normalized_coeffs(params, n), z)))
                report.samples.append(BoundSample("p", i, n, z, p, bound_pn(params, n, z) * rhs_scale))
    return report


def proposition_suite(params: BesselParams, samples: int = 1000, seed: int = 0, max_n: int = 10,
                      zmax: float = 4.0, rhs_scale: float = 1.0, extra=()) -> SuiteReport:
    """|q_n(z)| and |alpha p_n(z) + beta q_n(z)| against their bounds.

    Requires 0 < |b| < 1/3 and a > 1; alpha, beta are standard complex normal.
    """
    if max_n < 1:
        raise ParameterError("max_n must be at least 1")
    params.require_weight_regime()
    if not 0 < abs(float(params.b)) < 1 / 3:
        raise ParameterError("the second-kind bound suite needs 0 < |b| < 1/3")
    rng = np.random.default_rng(seed)
    bmag = abs(float(params.b))
    report = SuiteReport("proposition", params, seed)
    points = []
    for _ in range(samples):
        n = int(rng.integers(1, max_n + 1))
        z, rej = _draw_z(rng, bmag, zmax, True)
        report.rejected += rej
        al, be = rng.standard_normal(4).view(np.complex128)
        points.append((n, z, complex(al), complex(be)))
    points.extend((int(n), complex(z), complex(al), complex(be)) for n, z, al, be in extra)
    for i, (n, z, al, be) in enumerate(points):
        q = check_qn_bound(params, n, z, rhs_scale)
        report.samples.append(BoundSample("q", i, n, z, q.lhs, q.rhs))
        u = check_general_solution_bound(params, al, be, n, z, rhs_scale)
        report.samples.append(BoundSample("u", i, n, z, u.lhs, u.rhs, al, be))
    return report


def negative_control_points(params: BesselParams, count: int = 4):
    """(n=1, z) pairs with z on the ray of b, where |y_1(z)| = 1 + a|z|/|b|
    exceeds the bound divided by e."""
    direction = 1.0 if float(params.b.real if isinstance(params.b, complex) else params.b) > 0 else -1.0
    bmag = abs(complex(params.b))
    return [(1, direction * bmag * (2.0 + k)) for k in range(count) if abs(bmag * (2.0 + k) - 1) >= 1e-3]
