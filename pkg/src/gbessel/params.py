"""Parameter handling and the exception hierarchy shared by every module."""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, complex]


class ParameterError(ValueError):
    """A parameter or argument lies outside the domain of an operation."""


class NonRationalError(ParameterError):
    """The exact layer was handed a parameter that is not rational."""


class DegenerateStepError(ArithmeticError):
    """A recurrence prefactor vanished and no bypass applies."""


class PrecisionBudgetError(RuntimeError):
    """The working precision needed for a verification exceeds the ceiling."""


class HorizonTooSmallError(RuntimeError):
    """The supremum search horizon does not yet cover the decreasing tail."""


class ConvergenceError(RuntimeError):
    """An iterative procedure did not converge within its budget."""


def to_rational(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Strings may be fractions (``"7/2"``) or decimals (``"0.3"`` -> 3/10).
    Floats are read through their shortest repr, so ``0.3`` becomes 3/10
    rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParameterError(f"not a number: {value!r}")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, numbers.Real):
        f = float(value)
        if f != f or f in (float("inf"), float("-inf")):
            raise ParameterError(f"non-finite value {value!r}")
        return Fraction(repr(f))
    raise NonRationalError(f"{value!r} is not a real rational value")


def _coerce_b(value):
    if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
        c = complex(value)
        if c.imag == 0.0:
            return to_rational(c.real)
        return c
    if isinstance(value, str) and value.strip().endswith(("i", "j")):
        c = complex(value.strip().replace("i", "j"))
        return to_rational(c.real) if c.imag == 0 else c
    return to_rational(value)


@dataclass(frozen=True)
class BesselParams:
    """The pair (a, b) of the generalized Bessel polynomials y_n(x, a, b).

    ``a`` is always stored as an exact rational.  ``b`` is an exact rational
    unless a genuinely complex value was supplied, which only the polynomial
    construction, evaluation and growth bound accept.
    """

    a: Fraction
    b: Union[Fraction, complex]

    def __init__(self, a, b):
        a = to_rational(a)
        b = _coerce_b(b)
        if b == 0:
            raise ParameterError("b must be nonzero")
        if a.denominator == 1 and a <= 0:
            raise ParameterError("a must not be zero or a negative integer")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def real_b(self) -> bool:
        return isinstance(self.b, Fraction)

    def require_real(self) -> "BesselParams":
        if not self.real_b:
            raise ParameterError("this operation requires real b")
        return self

    def require_weight_regime(self) -> "BesselParams":
        """Check a > 1 and real b, the standing assumptions of the weight theory."""
        self.require_real()
        if self.a <= 1:
            raise ParameterError(f"a must exceed 1 (got a={self.a})")
        return self

    def __str__(self) -> str:
        return f"a={self.a}, b={self.b}"
