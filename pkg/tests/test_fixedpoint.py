from fractions import Fraction

import pytest

from fxexp import (
    FixedPointOverflowError,
    FixedUQ,
    RoundingMode,
    mul_trunc,
    one_minus,
    ones_complement,
    quantize,
    shr,
)


def test_value_and_float():
    a = FixedUQ(0x5, 1, 3)
    assert a.value == Fraction(5, 8)
    assert float(a) == 0.625


def test_raw_range_enforced():
    with pytest.raises(FixedPointOverflowError):
        FixedUQ(1 << 4, 1, 3)
    with pytest.raises(FixedPointOverflowError):
        FixedUQ(-1, 1, 3)
    with pytest.raises(ValueError):
        FixedUQ(0, 0, 0)


def test_quantize_truncate():
    q = quantize(Fraction(7, 16), 1, 3, RoundingMode.TRUNCATE)
    assert q.raw == 3  # 0.4375 -> 0.375


def test_quantize_round_nearest_even():
    # ties to even raw
    assert quantize(Fraction(1, 16), 1, 3).raw == 0
    assert quantize(Fraction(3, 16), 1, 3).raw == 2
    # plain nearest
    assert quantize(0.40625, 1, 3).raw == 3
    assert quantize(1.0, 1, 3).raw == 8


def test_quantize_rejects_negative_and_overflow():
    with pytest.raises(ValueError):
        quantize(-0.5, 1, 3)
    with pytest.raises(FixedPointOverflowError):
        quantize(2.0, 1, 3)


def test_mul_trunc_drops_low_bits():
    a = FixedUQ(0b111, 0, 3)    # 0.875
    b = FixedUQ(0b101, 0, 3)    # 0.625
    # exact product 35/64; truncated to 3 fraction bits -> 4/8
    assert mul_trunc(a, b, 3).raw == 4
    # widening keeps it exact
    assert mul_trunc(a, b, 6).value == Fraction(35, 64)


def test_shr():
    a = FixedUQ(0b1011, 0, 4)
    assert shr(a, 2).raw == 0b10
    with pytest.raises(ValueError):
        shr(a, -1)


def test_ones_complement_requires_pure_fraction():
    with pytest.raises(ValueError):
        ones_complement(FixedUQ(1, 1, 3))


def test_one_minus_exact():
    a = FixedUQ(3, 0, 3)
    assert one_minus(a).value == Fraction(5, 8)
    assert one_minus(FixedUQ(0, 0, 3)).value == 1


def test_ones_complement_is_one_minus_less_one_lsb_exhaustive():
    # holds bit-exactly for every operand at every width up to 12
    for w in range(1, 13):
        lsb = Fraction(1, 1 << w)
        for raw in range(1 << w):
            a = FixedUQ(raw, 0, w)
            assert ones_complement(a).value == one_minus(a).value - lsb
