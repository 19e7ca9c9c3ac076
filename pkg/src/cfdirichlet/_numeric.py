"""Exact integer helpers and certified floors shared by the other modules."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import gmpy2
import mpmath
from mpmath.libmp import to_int
from mpmath.ctx_iv import MPIntervalContext

# A private interval context so precision changes never leak into callers'
# global mpmath state.
_iv = MPIntervalContext()

LOG10_2 = math.log10(2.0)


class PrecisionError(ArithmeticError):
    """A floor could not be certified at the configured precision."""


def to_fraction(value) -> Fraction:
    """Coerce int, Fraction, decimal string or float to an exact Fraction.

    Floats are taken through ``repr`` so ``0.6`` means 6/10 rather than its
    binary neighbour.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def iroot_floor(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0, k >= 1."""
    if x < 0 or k < 1:
        raise ValueError("iroot_floor needs x >= 0 and k >= 1")
    return int(gmpy2.iroot(gmpy2.mpz(x), k)[0])


def floor_rational_power(base: int, exponent: Fraction) -> int:
    """floor(base ** exponent) exactly, for base >= 1 and exponent >= 0 rational."""
    if base < 1:
        raise ValueError("base must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    p, q = exponent.numerator, exponent.denominator
    return iroot_floor(base**p, q)


def decimal_digits(x: int) -> int:
    """Number of decimal digits of |x| (1 for zero), exact."""
    x = abs(x)
    if x == 0:
        return 1
    return len(gmpy2.mpz(x).digits(10))


def estimated_decimal_digits(log_x: float) -> float:
    return log_x / math.log(10.0)


def log_int(x: int) -> float:
    """Natural log of a positive arbitrary-size integer.

    ``math.log`` splits big ints into mantissa and exponent itself, so the
    result carries double-precision relative error regardless of size.
    """
    if x <= 0:
        raise ValueError("log of non-positive integer")
    return math.log(x)


def log_add(a: float, b: float) -> float:
    """log(exp(a) + exp(b)) without overflow."""
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def int_to_str(x: int) -> str:
    # gmpy2 is not subject to the interpreter's int->str digit limit
    return gmpy2.mpz(x).digits(10)


def str_to_int(s: str) -> int:
    return int(gmpy2.mpz(s.strip()))


def fraction_to_str(x: Fraction) -> str:
    if x.denominator == 1:
        return int_to_str(x.numerator)
    return f"{int_to_str(x.numerator)}/{int_to_str(x.denominator)}"


def certified_floor(
    make_interval: Callable[[MPIntervalContext], object],
    bits_hint: int,
    max_bits: int = 1 << 20,
) -> int:
    """Floor of a real given by an interval-arithmetic expression.

    ``make_interval(ctx)`` must evaluate the quantity in the interval context
    ``ctx``. Precision starts at ``bits_hint + 64`` and doubles until both
    interval endpoints share a floor, or raises PrecisionError past
    ``max_bits``.
    """
    prec = max(bits_hint, 0) + 64
    while prec <= max_bits:
        _iv.prec = prec
        x = make_interval(_iv)
        # floor the exact binary endpoints; mpmath.floor would round at mp.prec
        a, b = x._mpi_
        lo = to_int(a, "f")
        hi = to_int(b, "f")
        if lo == hi:
            return lo
        prec *= 2
    raise PrecisionError(f"floor not certified within {max_bits} bits")


def floor_exp(n: int, factor: int = 1) -> int:
    """floor(factor * e**n), certified."""
    bits = int(n * 1.4427) + factor.bit_length() + 8
    return certified_floor(lambda c: factor * c.exp(c.mpf(n)), bits)
