import math
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gbessel.params import BesselParams, ConvergenceError, ParameterError
from gbessel.precision import working_precision
from gbessel.weight import (
    bridge_identity_residual,
    g_function,
    gauss_jacobi_unit,
    m_ab,
    positivity_scan,
    rho,
    rho_on_circle,
    series_terms,
    solve_x0,
    weight_highprec,
    weight_integral,
    weight_profile,
    weight_series,
    weight_table,
)

TWO_PI = 2 * math.pi


def closed_form_a2(b, theta):
    # a = 2: 2 pi p = -1 + 2 Re[(1 - e^{-w}) / w], w = b e^{i theta}
    w = b * np.exp(1j * np.asarray(theta))
    return (-1 + 2 * ((1 - np.exp(-w)) / w).real) / TWO_PI


def mp_weight(a, b, theta, dps=30):
    # termwise integration of the defining integral:
    # int_0^1 (1-v)^k v^(a-2) dv = B(k+1, a-1)
    with mpmath.workdps(dps):
        a, b, t = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(theta)
        w = -b * mpmath.expjpi(t / mpmath.pi)
        s = mpmath.nsum(lambda k: w ** k / mpmath.factorial(k) * mpmath.beta(k + 1, a - 1), [0, mpmath.inf])
        return (-1 + 2 * (a - 1) * mpmath.re(s)) / (2 * mpmath.pi)


@pytest.mark.parametrize("b,theta,expected", [("0.5", math.pi / 2, 0.1460568341615), ("0.3", 0.0, 0.1158454658)])
def test_examples_a2(b, theta, expected):
    p = BesselParams(2, b)
    assert weight_integral(p, theta) == pytest.approx(expected, abs=1e-10)
    assert weight_integral(p, theta) == pytest.approx(closed_form_a2(float(b), theta), abs=1e-14)


def test_small_b_limit():
    assert TWO_PI * weight_integral(BesselParams(3, "1e-8"), 1.0) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("a,b", [("1.1", "0.53"), ("1.5", "-0.25"), ("2.5", "0.4"), ("5", "-0.5"), ("3.7", "1.7")])
def test_integral_against_mpmath(a, b):
    p = BesselParams(a, b)
    for t in (0.0, 0.7, 2.0, math.pi, 5.1):
        assert weight_integral(p, t) == pytest.approx(float(mp_weight(a, b, t)), abs=1e-13)


@pytest.mark.parametrize("a", ["1.1", "1.5", "2", "5"])
@pytest.mark.parametrize("b", ["0.53", "-0.53", "0.2", "-3"])
def test_routes_agree(a, b):
    p = BesselParams(a, b)
    th = np.linspace(0, TWO_PI, 720)
    assert np.max(np.abs(weight_integral(p, th) - weight_series(p, th))) <= 1e-12


def test_series_terms_tail():
    n = series_terms(2.0, 0.3, 1e-13)
    # first omitted coefficient |b|^{n+1} / (a)_{n+1}, times 2 / (2 pi)
    assert 2 * 0.3 ** (n + 1) / math.factorial(n + 2) / TWO_PI < 1e-13
    assert 2 * 0.3 ** n / math.factorial(n + 1) / TWO_PI > 1e-13 / 10


def test_profile_and_periodicity():
    p = BesselParams("1.5", "-0.1")
    prof = weight_profile(p, np.linspace(0, TWO_PI, 16))
    assert len(prof) == 16
    assert prof[0].value == pytest.approx(prof[-1].value, abs=1e-15)


def test_gauss_jacobi_rule():
    # nodes/weights integrate polynomials exactly against (1-u)^alpha on [0, 1]
    us, ws = gauss_jacobi_unit(Fraction(-1, 2), 12, 200)
    with working_precision(200):
        for k in range(10):
            got = sum(w * u ** k for u, w in zip(us, ws))
            # int_0^1 u^k (1-u)^{-1/2} du = B(k+1, 1/2)
            ref = gmpy2.gamma(k + 1) * gmpy2.gamma(gmpy2.mpfr(0.5)) / gmpy2.gamma(k + gmpy2.mpfr(1.5))
            assert abs(got - ref) < gmpy2.mpfr(2) ** -180


@pytest.mark.parametrize("a,b", [("2", "1/5"), ("3/2", "3/10"), ("7/2", "-1/4")])
def test_highprec_against_series(a, b):
    p = BesselParams(a, b)
    thetas = [0, "0.3", "2.1", "4"]
    got = weight_highprec(p, thetas, bits=200)
    with mpmath.workdps(60):
        A, B = mpmath.mpf(p.a.numerator) / p.a.denominator, mpmath.mpf(p.b.numerator) / p.b.denominator
        for t, g in zip(thetas, got):
            t = mpmath.mpf(t)
            s = mpmath.nsum(lambda j: (-B) ** j / mpmath.rf(A, j) * mpmath.cos(j * t), [1, mpmath.inf])
            ref = (1 + 2 * s) / (2 * mpmath.pi)
            assert abs(mpmath.mpf(str(g)) - ref) < mpmath.mpf(10) ** -55


def test_table_mirrors_and_refines():
    p = BesselParams(2, "1/5")
    t8 = weight_table(p, 8, 128)
    t16 = weight_table(p, 16, 128)
    assert t16[::2] == t8
    assert t8[1] == t8[7]
    assert float(t8[3]) == pytest.approx(weight_integral(p, 3 * TWO_PI / 8), abs=1e-14)


def test_trapezoid_mass_and_moments():
    p = BesselParams(2, "0.3")
    n = 1024
    th = TWO_PI * np.arange(n) / n
    w = weight_integral(p, th)
    assert TWO_PI * w.mean() == pytest.approx(1.0, abs=1e-12)
    for k in range(13):
        mk = (-0.3) ** k / math.prod(2 + i for i in range(k))
        assert TWO_PI * np.mean(np.exp(1j * k * th) * w) == pytest.approx(mk, abs=1e-12)


def test_g_symmetry_value():
    p = BesselParams(2, "0.5")
    s = complex(g_function(p, 1j) + g_function(p, -1j))
    assert s.real == pytest.approx(0.917702154416812, abs=1e-12)
    assert abs(s.imag) < 1e-60


def test_rho_methods_and_value():
    p = BesselParams(2, 2)
    assert complex(rho(p, 1)) == pytest.approx(math.exp(-2) / (2j * math.pi))
    q = BesselParams("7/2", "-1/4")
    for z in (1, 0.6 - 0.8j, 2j, 0.3):
        a = rho(q, z, method="hyp1f1")
        b = rho(q, z, method="series")
        assert abs(a - b) < 1e-70
    with pytest.raises(ParameterError):
        rho(p, 0)
    with pytest.raises(ParameterError):
        rho(p, 1, method="nope")


def test_rho_against_mpmath_hyp1f1():
    p = BesselParams("3/2", "0.4")
    z = 0.3 + 0.9j
    ref = (0.5 - (0.4 / z) * complex(mpmath.hyp1f1(1, 1.5, -0.4 / z))) / (2j * math.pi)
    assert complex(rho(p, z)) == pytest.approx(ref, rel=1e-14)
    th = np.array([0.0, 1.0, 2.5])
    dbl = rho_on_circle(p, th)
    for t, v in zip(th, dbl):
        assert v == pytest.approx(complex(rho(p, complex(math.cos(t), math.sin(t)))), rel=1e-13)


@pytest.mark.parametrize("a,b", [("2", "0.3"), ("1.5", "-0.25"), ("4", "2")])
def test_bridge_identity(a, b):
    th = np.linspace(0, TWO_PI, 720)
    assert np.max(bridge_identity_residual(BesselParams(a, b), th)) <= 1e-12


def test_x0():
    t = solve_x0(1e-12)
    assert t.x0 == pytest.approx(0.539785, abs=5e-6)
    assert t.x0 > 1 / 3
    assert 2 * math.cos(t.x0) == pytest.approx(math.exp(t.x0), abs=1e-11)
    assert t.admits(0.5) and not t.admits(0.6)
    with pytest.raises(ParameterError):
        solve_x0(0)


@pytest.mark.parametrize("a", ["1.1", "1.5", "2", "5"])
@pytest.mark.parametrize("b", ["0.53", "-0.53", "0.3", "-0.1"])
def test_positivity(a, b):
    assert positivity_scan(BesselParams(a, b), 2048) > 0


def test_positivity_fails_for_large_b():
    assert positivity_scan(BesselParams(2, 3), 256) < 0


def test_m_constant():
    with mpmath.workdps(20):
        i0 = float(mpmath.nsum(lambda k: mpmath.mpf(0.25) ** k / mpmath.factorial(k) ** 2, [0, mpmath.inf]))
    assert i0 == pytest.approx(float(mpmath.besseli(0, 1)), rel=1e-15)
    assert m_ab(BesselParams(2, 1)) == pytest.approx(i0, abs=1e-8)
    for b in ("0.1", "0.5", "1"):
        assert m_ab(BesselParams(2, b)) >= 1 / (math.e * float(b))
    assert m_ab(BesselParams(2, "0.05")) > 1
    with pytest.raises(ConvergenceError):
        m_ab(BesselParams(2, 1), tol=0.0, max_nodes=64)


def test_weight_domain():
    with pytest.raises(ParameterError):
        weight_integral(BesselParams(1, "0.3"), 0.0)
    with pytest.raises(ParameterError):
        weight_integral(BesselParams(2, "0.3"), 0.0, tol=0)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(1.05, 6.0), b=st.floats(-0.53, 0.53).filter(lambda b: abs(b) > 1e-3),
       t=st.floats(0, 2 * math.pi))
def test_property_reflection_and_positivity(a, b, t):
    p = BesselParams(repr(a), repr(b))
    v = weight_integral(p, np.array([t, TWO_PI - t, t + TWO_PI]))
    assert v[0] == pytest.approx(v[1], abs=1e-13)
    assert v[0] == pytest.approx(v[2], abs=1e-13)
    assert v[0] > 0
