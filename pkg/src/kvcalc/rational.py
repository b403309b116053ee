"""Exact rational scalars.

All coefficients in the package are ``gmpy2.mpq`` values. Anything accepted by
``mpq`` (ints, ``Fraction``, ``"p/q"`` strings) can be passed where a scalar is
expected.
"""

from fractions import Fraction

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def as_q(x):
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not allowed")
    if type(x) is type(ONE):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def fmt_q(x):
    """Format as ``"p/q"`` with ``q >= 1``."""
    x = as_q(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s):
    if isinstance(s, int):
        return mpq(s)
    s = str(s).strip()
    if "/" in s:
        p, q = s.split("/")
        return mpq(int(p), int(q))
    return mpq(int(s))


def factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out
