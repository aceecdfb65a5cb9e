"""Dual scalar regime: exact rationals with a big-float escape hatch.

Every real quantity in the library is either a ``fractions.Fraction``
(exact, used whenever the computation is square-root-free and all inputs
are rational) or an ``mpmath.mpf`` evaluated under an explicit working
precision in bits.  Mixed arithmetic promotes to the float side at the
active working precision, so float computations must run inside
``with working_precision(bits):``.
"""
from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

# exact tables legitimately carry integers with thousands of digits; lift the
# interpreter's conversion cap well above anything the library produces
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(max(sys.get_int_max_str_digits(), 2_000_000))

Scalar = Union[Fraction, mpmath.mpf]

DEFAULT_PRECISION = 256


class DomainError(ValueError):
    """A parameter or argument lies outside its stated domain."""


class InvariantViolation(RuntimeError):
    """A structural invariant failed; indicates corrupted data or a bug."""


def working_precision(bits: int):
    """Context manager setting the binary working precision for floats."""
    if bits < 1:
        raise DomainError(f"precision must be positive, got {bits}")
    return mp.workprec(bits)


def ensure_precision(bits: int):
    """Like working_precision but never lowers an already-higher ambient
    precision (library internals use this so callers can demand more)."""
    return mp.workprec(max(mp.prec, bits))


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_scalar(text: str, prec: int = DEFAULT_PRECISION) -> Scalar:
    """Parse "p/q" or an integer as an exact rational; decimals force float mode."""
    text = text.strip()
    if _RATIONAL_RE.match(text):
        frac = Fraction(text)
        if "/" in text and frac.denominator == 0:  # unreachable, Fraction raises
            raise DomainError(f"zero denominator in {text!r}")
        return frac
    try:
        with working_precision(prec):
            return mpmath.mpf(text)
    except Exception as exc:
        raise DomainError(f"cannot parse scalar {text!r}") from exc


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def coerce(x) -> Scalar:
    """Normalize ints to Fraction so that true division never produces a
    machine float; mpf and Fraction pass through, binary floats are rejected
    (callers must choose exact or explicit-precision input)."""
    if isinstance(x, bool):
        raise DomainError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, mpmath.mpf)):
        return x
    if isinstance(x, float):
        raise DomainError(
            f"machine float {x!r} rejected; pass a Fraction, an mpf, or a string"
        )
    raise DomainError(f"not a scalar: {x!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise DomainError(f"not an exact rational: {x!r}")


def to_mpf(x, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Convert a scalar to an mpf rounded at ``prec`` bits."""
    with working_precision(prec):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def sqrt_scalar(x, prec: int = DEFAULT_PRECISION) -> Scalar:
    """Square root; stays exact when x is a rational perfect square.

    Any inexact root switches the value (and everything computed from it)
    to float mode at ``prec`` bits.
    """
    if is_exact(x):
        f = to_fraction(x)
        if f < 0:
            raise DomainError(f"sqrt of negative scalar {f}")
        rn = math.isqrt(f.numerator)
        rd = math.isqrt(f.denominator)
        if rn * rn == f.numerator and rd * rd == f.denominator:
            return Fraction(rn, rd)
        with working_precision(prec):
            return mpmath.sqrt(mpmath.mpf(f.numerator)) / mpmath.sqrt(mpmath.mpf(f.denominator))
    with working_precision(prec):
        return mpmath.sqrt(x)


def scalar_str(x, max_rational_digits: int = 80) -> str:
    """Stable textual form: "p/q" for rationals, round-trip decimal for floats.

    Rationals whose components exceed ``max_rational_digits`` digits are
    rendered as a 50-digit decimal instead; the exact value has already
    done its job upstream and a thousands-digit string helps nobody.
    """
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        nd = (x.numerator.bit_length() + x.denominator.bit_length()) * 0.302
        if nd > max_rational_digits:
            with working_precision(192):
                return mpmath.nstr(
                    mpmath.mpf(x.numerator) / x.denominator, 50, strip_zeros=True
                )
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, mpmath.mpf):
        # One digit beyond the mantissa's decimal resolution round-trips.
        digits = int(mp.prec * 0.30103) + 2
        return mpmath.nstr(x, digits, strip_zeros=True)
    return str(x)


def scalar_float(x) -> float:
    """Lossy float view, for display and coarse comparisons only."""
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)


def sum_tolerance(prec: int) -> mpmath.mpf:
    """Residual threshold for sum-to-one checks in float mode: 2^-(prec-10)."""
    with working_precision(prec):
        return mpmath.mpf(2) ** (-(prec - 10))


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def mpf_to_fraction(m: mpmath.mpf) -> Fraction:
    """Exact rational value of a finite mpf (every mpf is dyadic)."""
    if not mpmath.isfinite(m):
        raise DomainError(f"cannot convert non-finite {m} to a fraction")
    p, q = mpmath.libmp.to_rational(m._mpf_)
    return Fraction(int(p), int(q))


def scalar_cmp(x, y) -> int:
    """Exact three-way comparison that is safe across the Fraction/mpf
    boundary (direct ordering between the two types raises TypeError)."""
    xe, ye = is_exact(x), is_exact(y)
    if xe != ye:
        if not xe:
            x = mpf_to_fraction(x)
        if not ye:
            y = mpf_to_fraction(y)
    return sign(x - y)
