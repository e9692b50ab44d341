import json
import math
from fractions import Fraction

import numpy as np
import pytest

from gbessel.core_poly import eval_poly, norm_squared, normalized_coeffs, series_coeffs
from gbessel.jacobi import (
    build_truncated,
    eigen_relation_residual,
    general_solution,
    jacobi_an,
    jacobi_an_squared,
    jacobi_bn,
    norm_bound_sup,
    solve_difference,
    truncated_norm,
)
from gbessel.params import BesselParams, ConvergenceError, HorizonTooSmallError, ParameterError

P = BesselParams(2, "0.2")
ROUNDING = 8 * np.finfo(float).eps
GRID = [(a, b) for a in ("3/2", "2", "7/2", "5") for b in ("1/5", "-1/4", "3/10")]


def test_coefficient_examples():
    assert jacobi_an(P, 0) == pytest.approx(0.057735026918962574j)
    assert jacobi_bn(P, 0) == Fraction(-1, 10)
    assert jacobi_bn(BesselParams(3, "0.2"), 0) == Fraction(-1, 15)
    assert jacobi_bn(P, 1) == 0


@pytest.mark.parametrize("a,b", GRID)
def test_an_invariants(a, b):
    p = BesselParams(a, b)
    for n in range(30):
        an = jacobi_an(p, n)
        assert an.real == 0 and an != 0
        assert an * an == pytest.approx(float(jacobi_an_squared(p, n)), rel=1e-14)
        assert abs(an) <= abs(float(p.b)) / (2 * n + float(p.a))
        assert abs(float(jacobi_bn(p, n))) <= abs(float(p.b)) * 2 / float(p.a)


def test_homogeneity_in_b():
    for n in range(10):
        for lam in (Fraction(3), Fraction(-1, 7)):
            q = BesselParams(P.a, lam * P.b)
            assert jacobi_bn(q, n) == lam * jacobi_bn(P, n)
            assert jacobi_an_squared(q, n) == lam * lam * jacobi_an_squared(P, n)


def test_a2_limit():
    near = BesselParams(Fraction(2) + Fraction(1, 10 ** 8), "0.2")
    assert float(jacobi_bn(near, 0)) == pytest.approx(-0.1, abs=1e-6)


@pytest.mark.parametrize("a,b", GRID)
def test_normalized_recurrence_exactly(a, b):
    # x y_n = -C_n y_{n-1} + b_n y_n + A_n y_{n+1} with
    # A_n^2 = -a_n^2 N_{n+1}/N_n and C_n^2 = -a_{n-1}^2 N_{n-1}/N_n, both rational
    p = BesselParams(a, b)
    for n in range(16):
        A2 = -jacobi_an_squared(p, n) * norm_squared(p.a, n + 1) / norm_squared(p.a, n)
        yn, yn1 = series_coeffs(p, n).coeffs, series_coeffs(p, n + 1).coeffs
        # leading coefficients fix A_n
        A = yn[-1] / yn1[-1]
        assert A * A == A2 and A * p.b > 0
        rhs = [A * c for c in yn1]
        for i, c in enumerate(yn):
            rhs[i] += jacobi_bn(p, n) * c
        if n > 0:
            C2 = -jacobi_an_squared(p, n - 1) * norm_squared(p.a, n - 1) / norm_squared(p.a, n)
            # C from the constant term: all y_k(0) = 1
            C = rhs[0]
            assert C * C == C2
            for i, c in enumerate(series_coeffs(p, n - 1).coeffs):
                rhs[i] -= C * c
        else:
            assert rhs[0] == 0
        assert rhs == [Fraction(0)] + list(yn)


@pytest.mark.parametrize("a,b", GRID)
def test_normalized_recurrence_float(a, b):
    p = BesselParams(a, b)
    x = 0.37 - 0.81j
    vals = [complex(eval_poly(normalized_coeffs(p, n), x)) for n in range(17)]
    for n in range(1, 16):
        lhs = x * vals[n]
        rhs = jacobi_an(p, n - 1) * vals[n - 1] + float(jacobi_bn(p, n)) * vals[n] + jacobi_an(p, n) * vals[n + 1]
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(jacobi_an(p, n) * vals[n + 1]))


def test_truncated_matrix():
    assert build_truncated(P, 1).dense().tolist() == [[-0.1 + 0j]]
    m = build_truncated(P, 2).dense()
    np.testing.assert_allclose(m, [[-0.1, 0.057735026918962574j], [0.057735026918962574j, 0]])
    J = build_truncated(BesselParams("7/2", "-1/4"), 3).dense()
    assert np.array_equal(J, J.T)
    assert not np.allclose(J, J.conj().T)
    for i in range(3):
        assert J[i, i] == float(jacobi_bn(BesselParams("7/2", "-1/4"), i))
    with pytest.raises(ParameterError):
        build_truncated(P, 0)


def test_exports():
    J = build_truncated(P, 4)
    txt = J.to_text()
    assert txt.splitlines()[0] == "n, b_n, Re a_n, Im a_n"
    assert len(txt.splitlines()) == 5
    band = json.loads(json.dumps(J.to_json()))
    assert len(band["diag"]) == 4 and len(band["off"]) == 3
    dense = J.to_json(banded=False)["dense"]
    assert float(dense[0][1][1]) == pytest.approx(0.057735026918962574)


def test_eigen_relation():
    assert eigen_relation_residual(BesselParams(3, "0.25"), 6, 0.7 + 0.2j) <= 1e-12
    assert eigen_relation_residual(P, 2, 1.234) <= 1e-60
    # the wrong phase convention breaks row 0
    assert eigen_relation_residual(P, 2, 1.234, phase_unit=1j) > 0.1
    with pytest.raises(ParameterError):
        eigen_relation_residual(P, 1, 0.5)


def test_row_zero_fixes_p1():
    x = 0.4 - 0.3j
    p1 = (x - float(jacobi_bn(P, 0))) / jacobi_an(P, 0)
    assert p1 == pytest.approx(complex(eval_poly(normalized_coeffs(P, 1), x)))


def test_norm_bound_sup():
    assert norm_bound_sup(P, 50) == pytest.approx(0.1 + 0.057735026918962574)
    s = norm_bound_sup(BesselParams(2, "0.25"))
    assert s == pytest.approx(1.25 * 0.157735026918962574)
    assert s <= 1
    for lam in (3, 7):
        assert norm_bound_sup(BesselParams(2, lam * Fraction(1, 5))) == pytest.approx(lam * norm_bound_sup(P))


def test_norm_bound_horizon():
    p = BesselParams(40, "0.2")
    with pytest.raises(HorizonTooSmallError):
        norm_bound_sup(p, 3)
    assert norm_bound_sup(p) == norm_bound_sup(p, 64)
    # slowly rising rows need a long horizon; the default search finds it
    big = BesselParams(1000, "0.2")
    with pytest.raises(HorizonTooSmallError):
        norm_bound_sup(big, 64)
    assert norm_bound_sup(big) > 0
    with pytest.raises(ParameterError):
        norm_bound_sup(P, 0)


def test_truncated_norm():
    assert truncated_norm(P, 1) == pytest.approx(0.1)
    np.testing.assert_allclose(truncated_norm(P, 12), np.linalg.norm(build_truncated(P, 12).dense(), 2), rtol=1e-10)
    n50, n100 = truncated_norm(P, 50), truncated_norm(P, 100)
    # both equal the limit to double precision; order holds up to rounding
    assert n50 <= n100 * (1 + ROUNDING)
    assert n100 <= norm_bound_sup(P) + 1e-10
    with pytest.raises(ConvergenceError):
        truncated_norm(P, 50, tol=0.0, maxiter=5)


@pytest.mark.parametrize("a,b", [("2", "0.25"), ("3/2", "-0.3"), ("5", "0.5")])
def test_norm_chain_up_to_200(a, b):
    p = BesselParams(a, b)
    bound = norm_bound_sup(p)
    for N in (1, 10, 50, 100, 200):
        assert truncated_norm(p, N) <= bound + 1e-10


def test_solve_difference():
    z = 2
    u = solve_difference(P, 1, 0, z, 6)
    for n, v in enumerate(u):
        assert complex(v) == pytest.approx(complex(eval_poly(normalized_coeffs(P, n), z)))
    q = solve_difference(P, 0, 1, z, 6)
    assert q[0] == 0
    assert complex(q[1]) == pytest.approx(1 / jacobi_an(P, 0))
    u = solve_difference(P, 1, 1, z, 8)
    v = general_solution(P, 1, 1, z, 8)
    for x, y in zip(u, v):
        assert abs(complex(x) - complex(y)) <= 1e-10 * abs(complex(y))
    with pytest.raises(ParameterError):
        solve_difference(P, 1, 0, z, 0)
