"""The twelve acceptance criteria, each at its stated tolerance."""

import math
import time
from fractions import Fraction

import numpy as np

from gbessel import weight as weight_mod
from gbessel.bounds import lemma_suite, negative_control_points, proposition_suite
from gbessel.cli import main
from gbessel.core_poly import eval_poly, norm_squared, recurrence_coeffs, series_coeffs
from gbessel.jacobi import norm_bound_sup, truncated_norm
from gbessel.moments import diag_closed_form, norm_constant, orthogonality_matrix
from gbessel.params import BesselParams
from gbessel.moments import second_kind_exact
from gbessel.quadrature import second_kind_quadrature, second_kind_rho, trapezoid, verify_orthogonality
from gbessel.weight import bridge_identity_residual, m_ab, positivity_scan, weight_integral, weight_series

TWO_PI = 2 * math.pi
RATIONAL_GRID = [(a, b) for a in ("3/2", "2", "7/2") for b in ("1/5", "-1/4", "3/10")]
# power iteration reaches the norm to double precision; ordering is checked up to rounding
ROUNDING = 8 * np.finfo(float).eps


def test_c01_x0(acceptance, capsys):
    start = time.perf_counter()
    code = main(["x0"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    x0 = float(out.splitlines()[1].split(",")[0])
    ok = code == 0 and abs(x0 - 0.539785) <= 5e-6 and elapsed < 0.1
    acceptance(1, "x0 reproduction", ok, f"x0={x0:.9f}, |x0-0.539785|={abs(x0 - 0.539785):.2e}, {elapsed * 1e3:.1f} ms")
    assert ok


def test_c02_exact_orthogonality(acceptance):
    start = time.perf_counter()
    ok = True
    mismatched = 0
    for a, b in RATIONAL_GRID:
        p = BesselParams(a, b)
        g = orthogonality_matrix(p, 12)
        for n in range(13):
            for m in range(n + 1, 13):
                ok &= isinstance(g[n][m], Fraction) and g[n][m] == 0
            ok &= g[n][n] == diag_closed_form(p.a, n)
        mismatched += sum(not norm_constant(p, n).printed_matches for n in range(1, 13))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    acceptance(2, "exact orthogonality", ok,
               f"9 parameter pairs, n<m<=12 exact zeros, diagonal closed form exact, {elapsed:.2f} s; "
               f"printed c_k differs from the moment oracle in {mismatched}/108 cases")
    assert ok


def test_c03_normalized_orthonormality(acceptance):
    ok = True
    for a, b in RATIONAL_GRID:
        p = BesselParams(a, b)
        g = orthogonality_matrix(p, 12)
        ok &= all((-1) ** n * norm_squared(p.a, n) * g[n][n] == 1 for n in range(13))
    acceptance(3, "normalized orthonormality", ok, "(-1)^n N_n S(y_n^2) == 1 exactly, n<=12, 9 pairs")
    assert ok


def test_c04_quadrature_exact_agreement(acceptance):
    weight_mod._TABLES.clear()
    start = time.perf_counter()
    worst, nodes = 0.0, []
    for a, b in [("2", "1/5"), ("3/2", "3/10")]:
        rep = verify_orthogonality(BesselParams(a, b), 8, nodes=1024, bits=256)
        worst = max(worst, rep.max_residual)
        nodes.append(rep.nodes)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 30
    acceptance(4, "quadrature vs exact", ok, f"max residual {worst:.2e}, nodes {nodes}, {elapsed:.2f} s at 256 bits")
    assert ok


def test_c05_moment_reproduction(acceptance):
    worst = 0.0
    N = 1024
    th = TWO_PI * np.arange(N) / N
    for a, b in [("2", "0.3"), ("1.5", "-0.25"), ("7/2", "1/5"), ("1.1", "0.5")]:
        p = BesselParams(a, b)
        w = weight_integral(p, th)
        for n in range(13):
            mn = float((-p.b) ** n / math.prod(p.a + i for i in range(n)))
            worst = max(worst, abs(complex(trapezoid(np.exp(1j * n * th) * w)) - mn))
    ok = worst <= 1e-12
    acceptance(5, "moment reproduction", ok, f"max |Fourier coefficient - m_n| = {worst:.2e}, n<=12")
    assert ok


def test_c06_routes_and_positivity(acceptance):
    th = np.linspace(0, TWO_PI, 720)
    worst_route, min_p = 0.0, math.inf
    bs = ["0.53", "-0.53", "0.4", "-0.4", "0.25", "-0.25", "0.1", "-0.1", "0.01", "-0.01"]
    for a in ("1.1", "1.5", "2", "5"):
        for b in bs:
            p = BesselParams(a, b)
            worst_route = max(worst_route, float(np.max(np.abs(weight_integral(p, th) - weight_series(p, th)))))
            min_p = min(min_p, positivity_scan(p, 4096))
    ok = worst_route <= 1e-10 and min_p > 0
    acceptance(6, "weight routes and positivity", ok, f"max route gap {worst_route:.2e} on 720 points, min p {min_p:.4f}")
    assert ok


def test_c07_bridge_identity(acceptance):
    th = np.linspace(0, TWO_PI, 720)
    worst = max(float(np.max(bridge_identity_residual(BesselParams(a, b), th)))
                for a, b in [("2", "0.3"), ("1.5", "-0.25")])
    ok = worst <= 1e-10
    acceptance(7, "bridge identity", ok, f"max residual {worst:.2e}")
    assert ok


def test_c08_recurrence_equivalence(acceptance):
    ok = True
    for a, b in RATIONAL_GRID + [("3", "1/5"), ("1", "-1/4")]:
        p = BesselParams(a, b)
        ok &= all(series_coeffs(p, n).coeffs == recurrence_coeffs(p, n).coeffs for n in range(21))
    acceptance(8, "series vs recurrence", ok, "identical rational coefficients, n<=20")
    assert ok


def test_c09_second_kind_consistency(acceptance):
    p = BesselParams(2, "0.2")
    rng = np.random.default_rng(0)
    zs = []
    while len(zs) < 20:
        z = complex(*rng.uniform(-3, 3, 2))
        if 0.2 < abs(z) <= 3 and abs(abs(z) - 1) >= 1e-6:
            zs.append(z)
    worst = 0.0
    for z in zs:
        for n in range(9):
            e = complex(eval_poly(second_kind_exact(p, n), z))
            q = complex(second_kind_quadrature(p, n, z))
            r = complex(second_kind_rho(p, n, z))
            worst = max(worst, abs(e - q), abs(e - r), abs(q - r))
    ok = worst <= 1e-8
    acceptance(9, "second-kind routes", ok, f"max pairwise gap {worst:.2e}, n<=8, 20 seeded z")
    assert ok


def test_c10_bound_suites(acceptance):
    lines, ok = [], True
    for a, b in [("2", "0.2"), ("3.7", "-0.3")]:
        p = BesselParams(a, b)
        lem = lemma_suite(p, samples=1000, seed=0)
        prop = proposition_suite(p, samples=1000, seed=0)
        neg = lemma_suite(p, samples=1000, seed=0, rhs_scale=1 / math.e, extra=negative_control_points(p))
        ok &= lem.violations == 0 and prop.violations == 0 and neg.violations >= 1
        lines.append(f"({a},{b}): {lem.violations}+{prop.violations} violations, control {neg.violations}")
    acceptance(10, "bound suites", ok, "; ".join(lines))
    assert ok


def test_c11_jacobi_norm_chain(acceptance):
    p = BesselParams(2, "0.25")
    sup = norm_bound_sup(p)
    norms = [truncated_norm(p, N) for N in (10, 50, 100, 200)]
    monotone = all(x <= y * (1 + ROUNDING) for x, y in zip(norms, norms[1:]))
    ok = norms[2] <= sup <= 1 and monotone
    acceptance(11, "Jacobi norm chain", ok, f"|J_100|={norms[2]:.12f} <= sup={sup:.6f} <= 1, monotone={monotone}")
    assert ok


def test_c12_m_constant(acceptance):
    vals = {b: m_ab(BesselParams(2, b)) for b in ("0.1", "0.5", "1")}
    lower = all(v >= 1 / (math.e * float(b)) for b, v in vals.items())
    i0 = math.fsum(0.25 ** k / math.factorial(k) ** 2 for k in range(40))
    gap = abs(vals["1"] - i0)
    ok = lower and gap <= 1e-8
    acceptance(12, "M constant", ok, f"M_(2,b) = {', '.join(f'{v:.6f}' for v in vals.values())}; |M_(2,1) - I0(1)| = {gap:.1e}")
    assert ok
