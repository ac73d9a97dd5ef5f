"""Activation and Gaussian functions built on the exponential datapath.

Argument preparation (|x|, 2|x|, (x-mu)**2 / (2*sigma**2)) is exact and
rounded to nearest once when entering the P-bit exponential input format.
The exponential is consumed at its internal M-fraction-bit precision; the
combination (division for sigmoid/tanh, scaling for ELU) is exact on that
value, followed by one final round to nearest at P fraction bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expcore import ExpConfig, Luts, build_luts, exp_neg
from .fixedpoint import FixedUQ, RoundingMode, quantize

_FUNCTIONS = ("sigmoid", "tanh", "gaussian", "elu")

# Input format of the exponential call: u5.P covers [0, 32), so the
# saturation field is exercised for prepared arguments in [16, 32).
_EXP_INT_BITS = 5


@dataclass(frozen=True)
class DerivedSpec:
    function: str
    alpha: float = 1.0      # ELU scale
    mu: float = 0.0         # Gaussian mean
    sigma: float = 1.0      # Gaussian width

    def __post_init__(self):
        if self.function not in _FUNCTIONS:
            raise ValueError(f"unknown function {self.function!r}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class DerivedResult:
    """Magnitude/sign pair; tanh and ELU can be negative."""

    magnitude: FixedUQ
    negative: bool = False

    @property
    def value(self) -> Fraction:
        v = self.magnitude.value
        return -v if self.negative else v

    def __float__(self) -> float:
        return float(self.value)


def _exp_input(t: Fraction, p: int) -> FixedUQ:
    # Arguments at or above 16 all saturate; clamp so the raw fits u5.P.
    limit = Fraction(32) - Fraction(1, 1 << p)
    if t > limit:
        t = limit
    return quantize(t, _EXP_INT_BITS, p, RoundingMode.ROUND_NEAREST_EVEN)


def eval_derived(spec: DerivedSpec, x, cfg: ExpConfig, luts: Luts = None) -> DerivedResult:
    """Evaluate a derived function at a real input x.

    x is taken exactly (floats convert exactly); the result is the
    fixed-point value the datapath-backed implementation produces.
    """
    if luts is None:
        luts = build_luts(cfg)
    p = cfg.out_precision
    x = Fraction(x)
    fn = spec.function

    if fn == "elu" and x >= 0:
        return DerivedResult(quantize(x, _EXP_INT_BITS, p), negative=False)

    if fn == "gaussian":
        t = (x - Fraction(spec.mu)) ** 2 / (2 * Fraction(spec.sigma) ** 2)
    elif fn == "tanh":
        t = 2 * abs(x)
    else:
        t = abs(x)

    e = exp_neg(_exp_input(t, p), cfg, luts, quantize_output=False).value

    if fn == "gaussian":
        return DerivedResult(quantize(e, 1, p), negative=False)
    if fn == "sigmoid":
        y = 1 / (1 + e) if x >= 0 else 1 - 1 / (1 + e)
        return DerivedResult(quantize(y, 1, p), negative=False)
    if fn == "tanh":
        return DerivedResult(quantize((1 - e) / (1 + e), 1, p), negative=x < 0)
    # ELU, x < 0: alpha * (e - 1) <= 0, carried as magnitude alpha * (1 - e)
    alpha = Fraction(spec.alpha)
    mag = abs(alpha) * (1 - e)
    int_bits = max(1, int(mag).bit_length() + 1)
    return DerivedResult(quantize(mag, int_bits, p), negative=alpha >= 0)
