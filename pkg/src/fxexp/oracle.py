"""High-precision reference for e**-a, used by LUT construction and error sweeps.

The reference is an exact-rational Taylor sum: partial sums of
sum((-a)**k / k!) are computed with Fraction arithmetic, so the only error
is the truncated tail.  The tail is driven below 2**-120 in absolute terms,
which for arguments in [0, 16] keeps the relative error under 2**-96.
"""

from __future__ import annotations

from fractions import Fraction

_TAIL_BOUND = Fraction(1, 1 << 120)


def oracle_exp_neg(a) -> Fraction:
    """e**-a as an exact rational with absolute error < 2**-120.

    ``a`` must be non-negative; ints, floats and Fractions are accepted
    (floats are converted exactly, so the caller controls what is evaluated).
    """
    a = Fraction(a)
    if a < 0:
        raise ValueError("oracle domain is a >= 0")
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term *= -a / k
        total += term
        # Alternating series: once terms decrease (k > a), the first omitted
        # term bounds the tail.
        if k > a and -_TAIL_BOUND < term < _TAIL_BOUND:
            break
    return total
