"""Unsigned fixed-point values and the bit-level primitives of the datapath.

All quantities in this package are magnitudes: a value is ``raw * 2**-frac_bits``
with ``raw`` an unsigned integer of at most ``int_bits + frac_bits`` bits.
Widths travel with each value so that datapaths with per-term word lengths
can be modeled without a global word size.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction


class RoundingMode(enum.Enum):
    TRUNCATE = "truncate"
    ROUND_NEAREST_EVEN = "round_nearest_even"


class FixedPointOverflowError(ValueError):
    """Raised when a value does not fit the requested format."""


@dataclass(frozen=True)
class FixedUQ:
    """Unsigned fixed-point number: value = raw * 2**-frac_bits."""

    raw: int
    int_bits: int
    frac_bits: int

    def __post_init__(self):
        if self.int_bits < 0 or self.frac_bits < 0 or self.int_bits + self.frac_bits < 1:
            raise ValueError(f"bad format u{self.int_bits}.{self.frac_bits}")
        if self.raw < 0 or self.raw >= 1 << (self.int_bits + self.frac_bits):
            raise FixedPointOverflowError(
                f"raw {self.raw} out of range for u{self.int_bits}.{self.frac_bits}"
            )

    @property
    def value(self) -> Fraction:
        """Exact represented value."""
        return Fraction(self.raw, 1 << self.frac_bits)

    def __float__(self) -> float:
        return self.raw / (1 << self.frac_bits)

    def __str__(self) -> str:
        return f"u{self.int_bits}.{self.frac_bits}(raw=0x{self.raw:x}, value={float(self)})"


def quantize(x, int_bits: int, frac_bits: int,
             mode: RoundingMode = RoundingMode.ROUND_NEAREST_EVEN) -> FixedUQ:
    """Quantize a non-negative exact real to the given format.

    ``x`` may be an int, float or Fraction; floats are converted exactly.
    Raises FixedPointOverflowError if the rounded value needs more than
    ``int_bits`` integer bits.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("only non-negative values are representable")
    scaled = x * (1 << frac_bits)
    if mode is RoundingMode.TRUNCATE:
        raw = scaled.numerator // scaled.denominator
    elif mode is RoundingMode.ROUND_NEAREST_EVEN:
        raw = _round_half_even(scaled)
    else:
        raise ValueError(f"unknown rounding mode {mode!r}")
    if raw >= 1 << (int_bits + frac_bits):
        raise FixedPointOverflowError(
            f"{float(x)} does not fit u{int_bits}.{frac_bits} after rounding"
        )
    return FixedUQ(raw, int_bits, frac_bits)


def _round_half_even(x: Fraction) -> int:
    floor = x.numerator // x.denominator
    rem = x - floor
    if rem > Fraction(1, 2):
        return floor + 1
    if rem < Fraction(1, 2):
        return floor
    return floor + (floor & 1)


def mul_trunc(a: FixedUQ, b: FixedUQ, out_frac: int) -> FixedUQ:
    """Exact double-width product, then fractional bits below 2**-out_frac dropped.

    Models a hardware multiplier whose output precision is ``out_frac``
    fractional bits. Integer width grows to fit, so this never overflows.
    """
    prod_frac = a.frac_bits + b.frac_bits
    prod_raw = a.raw * b.raw
    if out_frac >= prod_frac:
        raw = prod_raw << (out_frac - prod_frac)
    else:
        raw = prod_raw >> (prod_frac - out_frac)
    return FixedUQ(raw, a.int_bits + b.int_bits, out_frac)


def shr(a: FixedUQ, k: int) -> FixedUQ:
    """Right shift within a's width; bits shifted off the bottom are lost."""
    if k < 0:
        raise ValueError("shift count must be non-negative")
    return FixedUQ(a.raw >> k, a.int_bits, a.frac_bits)


def ones_complement(a: FixedUQ) -> FixedUQ:
    """Bitwise not of a pure fraction: models 1 - a with error exactly 2**-W."""
    if a.int_bits != 0:
        raise ValueError("ones_complement operates on pure fractions (int_bits = 0)")
    w = a.frac_bits
    return FixedUQ(((1 << w) - 1) - a.raw, 0, w)


def one_minus(a: FixedUQ) -> FixedUQ:
    """Exact 1 - a for a pure-fraction (or <= 1) operand; result is u1.W."""
    w = a.frac_bits
    if a.value > 1:
        raise ValueError("one_minus requires a <= 1")
    return FixedUQ((1 << w) - a.raw, 1, w)
