"""Big-float working precision (MPFR through gmpy2)."""

from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq

DEFAULT_BITS = 256
_override: list[int] = []


def default_bits() -> int:
    """Default precision: innermost :func:`default_precision` block, then the
    ``GBP_PRECISION_BITS`` environment variable, then 256."""
    if _override:
        return _override[-1]
    raw = os.environ.get("GBP_PRECISION_BITS")
    if raw:
        bits = int(raw)
        if bits < 53:
            raise ValueError("GBP_PRECISION_BITS must be at least 53")
        return bits
    return DEFAULT_BITS


@contextmanager
def working_precision(bits: int | None = None):
    """Run the block with MPFR precision ``bits`` (default: :func:`default_bits`)."""
    bits = default_bits() if bits is None else int(bits)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield bits


@contextmanager
def default_precision(bits: int | None):
    """Change what :func:`default_bits` returns inside the block (None: no change)."""
    if bits is None:
        yield default_bits()
        return
    if int(bits) < 53:
        raise ValueError("precision must be at least 53 bits")
    _override.append(int(bits))
    try:
        yield int(bits)
    finally:
        _override.pop()


def current_bits() -> int:
    return gmpy2.get_context().precision


def big(x):
    """Convert an exact or float scalar to mpfr/mpc at the current precision."""
    if isinstance(x, Fraction):
        return mpfr(mpq(x.numerator, x.denominator))
    if isinstance(x, int):
        return mpfr(x)
    if isinstance(x, complex):
        return mpc(x)
    if isinstance(x, str):
        s = x.strip().replace("i", "j")
        return mpc(complex(s)) if "j" in s else mpfr(s)
    if isinstance(x, (type(mpfr(0)), type(mpc(0)))):
        # re-round to the current precision
        return x + 0
    return mpfr(x)


def big_complex(x):
    v = big(x)
    return v if isinstance(v, type(mpc(0))) else mpc(v)


def pi():
    return gmpy2.const_pi()


MPFR = type(mpfr(0))
MPC = type(mpc(0))
