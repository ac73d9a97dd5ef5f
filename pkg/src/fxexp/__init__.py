"""Bit-accurate fixed-point e**-x datapath model and accuracy-analysis harness."""

from .fixedpoint import (
    FixedPointOverflowError,
    FixedUQ,
    RoundingMode,
    mul_trunc,
    one_minus,
    ones_complement,
    quantize,
    shr,
)
from .expcore import (
    ExpConfig,
    Luts,
    ONES_COMPLEMENT,
    OpCounter,
    PARTZSCH_COEFFS,
    PROPOSED_CUBIC,
    SplitParts,
    TWOS_COMPLEMENT,
    build_luts,
    exp_neg,
    exp_neg_vec,
    series_exp,
    split_operand,
)
from .oracle import oracle_exp_neg
from .analysis import (
    CoeffScanReport,
    ErrorReport,
    accuracy_bits,
    coeff_error_scan,
    derived_error_table,
    derived_sweep,
    mult_lut_sweep,
    series_range_error,
    sweep_error,
    term_precision_table,
)
from .derived import DerivedResult, DerivedSpec, eval_derived

__all__ = [
    "FixedPointOverflowError", "FixedUQ", "RoundingMode", "mul_trunc",
    "one_minus", "ones_complement", "quantize", "shr",
    "ExpConfig", "Luts", "ONES_COMPLEMENT", "OpCounter", "PARTZSCH_COEFFS",
    "PROPOSED_CUBIC", "SplitParts", "TWOS_COMPLEMENT", "build_luts",
    "exp_neg", "exp_neg_vec", "series_exp", "split_operand",
    "oracle_exp_neg",
    "CoeffScanReport", "ErrorReport", "accuracy_bits", "coeff_error_scan",
    "derived_error_table", "derived_sweep", "mult_lut_sweep",
    "series_range_error", "sweep_error", "term_precision_table",
    "DerivedResult", "DerivedSpec", "eval_derived",
]
