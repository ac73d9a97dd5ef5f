"""Bit-accurate model of the e**-x datapath.

The pipeline: an operand splitter cuts the input into saturation bits, a
16-entry integer LUT index, an 8-entry fraction LUT index and a residual
below 1/8; the residual goes through a shift-add cubic series circuit; the
three partial exponentials are combined by truncating multipliers.

Two arithmetic modes are modeled for the series subtractors: exact
two's-complement (1 - t) and the cheaper one's-complement approximation
(bitwise not, one lsb low).  Term word lengths for the cubic and square
terms are configurable independently of the multiplier precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .fixedpoint import FixedUQ, RoundingMode, mul_trunc, quantize
from .oracle import oracle_exp_neg

ONES_COMPLEMENT = "ones_complement"
TWOS_COMPLEMENT = "twos_complement"
PROPOSED_CUBIC = "proposed_cubic"
PARTZSCH_COEFFS = "partzsch_coeffs"

# Shift amounts realizing the cubic-term coefficient as shift-add:
# proposed: x>>2 + x>>4            = 0.3125 * x
# partzsch: sum(x>>2k, k=1..6)     = 0.333251953125 * x  (= 2 * 0.1666259765625)
_COEFF_SHIFTS = {
    PROPOSED_CUBIC: (2, 4),
    PARTZSCH_COEFFS: (2, 4, 6, 8, 10, 12),
}

# Stored cubic/square terms lie in (3/4, 1], so a W-bit term register keeps
# its leading bit implicit: quantization is round-to-nearest with step
# 2**-(W+1).  The final output truncates the M-P guard bits, as a hardware
# datapath would.  Both choices were fixed by exhaustive sweeps against the
# reference accuracy data.
_TERM_QUANT = RoundingMode.ROUND_NEAREST_EVEN
_FINAL_QUANT = RoundingMode.TRUNCATE


def _term_frac_bits(width: int, mult_precision: int) -> int:
    return min(mult_precision, width + 1)


@dataclass(frozen=True)
class ExpConfig:
    """Datapath configuration.

    out_precision is the fraction-bit count of input and output (P),
    mult_precision the fraction bits kept by datapath multipliers (M),
    lut_precision the fraction bits of LUT entries (L).  cubic_width /
    square_width default to M (fixed word-length datapath).
    """

    out_precision: int = 16
    mult_precision: int = 17
    lut_precision: int = 17
    arithmetic: str = ONES_COMPLEMENT
    series_variant: str = PROPOSED_CUBIC
    cubic_width: Optional[int] = None
    square_width: Optional[int] = None
    allow_reduced_precision: bool = False

    def __post_init__(self):
        p, m, l = self.out_precision, self.mult_precision, self.lut_precision
        if p < 4:
            raise ValueError("out_precision must be at least 4")
        if not self.allow_reduced_precision and (m < p or l < p):
            raise ValueError(
                "mult/lut precision below out_precision requires allow_reduced_precision"
            )
        if self.arithmetic not in (ONES_COMPLEMENT, TWOS_COMPLEMENT):
            raise ValueError(f"unknown arithmetic mode {self.arithmetic!r}")
        if self.series_variant not in _COEFF_SHIFTS:
            raise ValueError(f"unknown series variant {self.series_variant!r}")
        for w in (self.cubic_width, self.square_width):
            if w is not None and not 1 <= w <= m:
                raise ValueError(f"term width {w} outside [1, {m}]")

    @property
    def wc(self) -> int:
        return self.mult_precision if self.cubic_width is None else self.cubic_width

    @property
    def ws(self) -> int:
        return self.mult_precision if self.square_width is None else self.square_width


@dataclass(frozen=True)
class SplitParts:
    """Bit fields produced by the operand splitter."""

    sat: int        # bits above 2**4
    int4: int       # integer LUT index, 0..15
    frac3: int      # fraction LUT index, 0..7
    residual: int   # low P-3 bits, value residual * 2**-P < 2**-3


@dataclass(frozen=True)
class Luts:
    integer_lut: tuple     # entry i = e**-i rounded to L fraction bits
    fraction_lut: tuple    # entry j = e**-(j/8) rounded to L fraction bits


@dataclass
class OpCounter:
    """Counts datapath arithmetic per evaluation (structural instrument)."""

    muls: int = 0
    adds: int = 0


def split_operand(a: FixedUQ, p: int) -> SplitParts:
    """Cut the input into the four splitter fields.  Exact: the fields
    reconstruct the input as sat*16 + int4 + frac3/8 + residual*2**-P."""
    if p < 4:
        raise ValueError("splitter needs out_precision >= 4")
    if a.frac_bits != p:
        raise ValueError(f"input must carry {p} fraction bits, got {a.frac_bits}")
    if a.int_bits < 4:
        raise ValueError("input needs at least 4 integer bits")
    raw = a.raw
    return SplitParts(
        sat=raw >> (p + 4),
        int4=(raw >> p) & 0xF,
        frac3=(raw >> (p - 3)) & 0x7,
        residual=raw & ((1 << (p - 3)) - 1),
    )


def build_luts(cfg: ExpConfig) -> Luts:
    """Quantize e**-i (i = 0..15) and e**-(j/8) (j = 0..7) to L fraction bits."""
    l = cfg.lut_precision
    integer = tuple(
        quantize(oracle_exp_neg(i), 1, l, RoundingMode.ROUND_NEAREST_EVEN)
        for i in range(16)
    )
    fraction = tuple(
        quantize(oracle_exp_neg(Fraction(j, 8)), 1, l, RoundingMode.ROUND_NEAREST_EVEN)
        for j in range(8)
    )
    return Luts(integer_lut=integer, fraction_lut=fraction)


def _sub_one(raw: int, width: int, mode: str) -> int:
    """1 - t at the given fraction width; one's complement is one lsb low."""
    if mode == TWOS_COMPLEMENT:
        return (1 << width) - raw
    return ((1 << width) - 1) - raw


def _requantize(raw: int, frac: int, out_frac: int, mode: RoundingMode) -> int:
    if out_frac >= frac:
        return raw << (out_frac - frac)
    shift = frac - out_frac
    q = raw >> shift
    if mode is RoundingMode.TRUNCATE:
        return q
    rem = raw & ((1 << shift) - 1)
    half = 1 << (shift - 1)
    if rem > half or (rem == half and q & 1):
        return q + 1
    return q


def series_exp(x: FixedUQ, cfg: ExpConfig, counter: Optional[OpCounter] = None) -> FixedUQ:
    """Shift-add cubic series for e**-x on the residual domain x < 1/8.

    Evaluates 1 - x(1 - (x/2)(1 - c*x)) with c realized by the configured
    shift set, subtractors in the configured arithmetic mode, multiplier
    outputs truncated to M fraction bits and the cubic/square terms stored
    at their configured word lengths.
    """
    m = cfg.mult_precision
    if x.int_bits != 0 or x.frac_bits != m:
        raise ValueError(f"series input must be a pure fraction at {m} fraction bits")
    if x.raw >= 1 << (m - 3):
        raise ValueError("series domain is x < 2**-3")
    mode = cfg.arithmetic
    shifts = _COEFF_SHIFTS[cfg.series_variant]
    xr = x.raw

    u = 0
    for k in shifts:
        u += xr >> k
    if counter is not None:
        counter.adds += len(shifts) - 1

    fc = _term_frac_bits(cfg.wc, m)
    fs = _term_frac_bits(cfg.ws, m)
    tc = _requantize(_sub_one(u, m, mode), m, fc, _TERM_QUANT)
    v = ((xr >> 1) * tc) >> fc                       # trunc to M fraction bits
    ts = _requantize(_sub_one(v, m, mode), m, fs, _TERM_QUANT)
    w = (xr * ts) >> fs                              # trunc to M fraction bits
    tl = _sub_one(w, m, mode)
    if counter is not None:
        counter.muls += 2
    return FixedUQ(tl, 1, m)


def exp_neg(a: FixedUQ, cfg: ExpConfig, luts: Luts,
            counter: Optional[OpCounter] = None,
            quantize_output: bool = True) -> FixedUQ:
    """Full pipeline: split, LUT lookups, series, combining multipliers.

    Inputs at or above 16 saturate: the splitter assigns the maximum value
    to the three non-saturation parts, so every such input yields the same
    output, the exponential of the largest representable value below 16.

    With quantize_output=False the internal M-fraction-bit datapath value is
    returned instead of the truncated u1.P output; derived functions consume
    that form.
    """
    p, m = cfg.out_precision, cfg.mult_precision
    parts = split_operand(a, p)
    if parts.sat:
        int4, frac3, resid = 15, 7, (1 << (p - 3)) - 1
    else:
        int4, frac3, resid = parts.int4, parts.frac3, parts.residual

    r = mul_trunc(luts.integer_lut[int4], luts.fraction_lut[frac3], m)
    x = FixedUQ(resid << (m - p), 0, m)
    s = series_exp(x, cfg, counter)
    out = mul_trunc(r, s, m)
    if counter is not None:
        counter.muls += 2
    if not quantize_output:
        return FixedUQ(out.raw, 1, m)
    raw = _requantize(out.raw, m, p, _FINAL_QUANT)
    return FixedUQ(raw, 1, p)


# ---------------------------------------------------------------------------
# Vectorized twin of the scalar datapath, for exhaustive sweeps.  Performs
# the same integer operations on numpy arrays; falls back to object dtype
# (python ints) when intermediate products would overflow int64.
# ---------------------------------------------------------------------------

def _max_inter_bits(cfg: ExpConfig) -> int:
    m, l = cfg.mult_precision, cfg.lut_precision
    return max(2 * l + 2, m + max(cfg.wc, cfg.ws) + 2)


def _requantize_vec(raw, frac: int, out_frac: int, mode: RoundingMode):
    if out_frac >= frac:
        return raw << (out_frac - frac)
    shift = frac - out_frac
    q = raw >> shift
    if mode is RoundingMode.TRUNCATE:
        return q
    rem = raw & ((1 << shift) - 1)
    half = 1 << (shift - 1)
    up = (rem > half) | ((rem == half) & ((q & 1) == 1))
    return q + up


def exp_neg_vec(raws, cfg: ExpConfig, luts: Luts,
                quantize_output: bool = True) -> np.ndarray:
    """exp_neg over an array of input raws (at P fraction bits) -> output raws."""
    p, m, mode = cfg.out_precision, cfg.mult_precision, cfg.arithmetic
    dtype = object if _max_inter_bits(cfg) > 62 else np.int64
    a = np.asarray(raws).astype(dtype)

    sat = (a >> (p + 4)) != 0
    int4 = np.where(sat, 15, (a >> p) & 0xF).astype(np.int64)
    frac3 = np.where(sat, 7, (a >> (p - 3)) & 0x7).astype(np.int64)
    resid = np.where(sat, (1 << (p - 3)) - 1, a & ((1 << (p - 3)) - 1))

    ilut = np.array([e.raw for e in luts.integer_lut], dtype=dtype)
    flut = np.array([e.raw for e in luts.fraction_lut], dtype=dtype)
    r_full = ilut[int4] * flut[frac3]                # 2L fraction bits
    two_l = 2 * cfg.lut_precision
    r = r_full << (m - two_l) if m >= two_l else r_full >> (two_l - m)

    x = resid << (m - p)
    u = x >> _COEFF_SHIFTS[cfg.series_variant][0]
    for k in _COEFF_SHIFTS[cfg.series_variant][1:]:
        u = u + (x >> k)

    one = (1 << m) if mode == TWOS_COMPLEMENT else (1 << m) - 1
    fc = _term_frac_bits(cfg.wc, m)
    fs = _term_frac_bits(cfg.ws, m)
    tc = _requantize_vec(one - u, m, fc, _TERM_QUANT)
    v = ((x >> 1) * tc) >> fc
    ts = _requantize_vec(one - v, m, fs, _TERM_QUANT)
    w = (x * ts) >> fs
    tl = one - w

    out = (r * tl) >> m
    if not quantize_output:
        return out
    return _requantize_vec(out, m, p, _FINAL_QUANT)
