"""Command-line front end: single-input evaluation and CSV dataset generation.

Subcommands: eval (one input, human-readable), sweep (one configuration,
exhaustive error sweep), coeff, fig1, fig5, table1, table2 (dataset
generators).  CSV goes to --out or stdout.  Exit status 0 on success, 2 on
flag errors.  FXEXP_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from fractions import Fraction

from .analysis import (
    coeff_error_scan,
    derived_error_table,
    mult_lut_sweep,
    series_range_error,
    sweep_error,
    term_precision_table,
    write_coeff_csv,
    write_fig1_csv,
    write_sweep_csv,
    write_table1_csv,
    write_table2_csv,
)
from .expcore import (
    ExpConfig,
    ONES_COMPLEMENT,
    PARTZSCH_COEFFS,
    PROPOSED_CUBIC,
    TWOS_COMPLEMENT,
    build_luts,
    exp_neg,
)
from .fixedpoint import FixedUQ, RoundingMode, quantize
from .oracle import oracle_exp_neg

_MODES = {"ones": ONES_COMPLEMENT, "twos": TWOS_COMPLEMENT}
_VARIANTS = {"proposed": PROPOSED_CUBIC, "partzsch": PARTZSCH_COEFFS}


def _add_config_flags(sub, wc_default=8, ws_default=11):
    sub.add_argument("--p", type=int, default=16, help="output fraction bits")
    sub.add_argument("--m", type=int, default=17, help="multiplier fraction bits")
    sub.add_argument("--l", type=int, default=17, help="LUT fraction bits")
    sub.add_argument("--mode", choices=sorted(_MODES), default="ones")
    sub.add_argument("--variant", choices=sorted(_VARIANTS), default="proposed")
    sub.add_argument("--wc", type=int, default=wc_default, help="cubic term width")
    sub.add_argument("--ws", type=int, default=ws_default, help="square term width")


def _config_from(args) -> ExpConfig:
    return ExpConfig(
        out_precision=args.p,
        mult_precision=args.m,
        lut_precision=args.l,
        arithmetic=_MODES[args.mode],
        series_variant=_VARIANTS[args.variant],
        cubic_width=args.wc,
        square_width=args.ws,
    )


def _parse_span(text: str):
    """'a:b' -> inclusive range, 'a' -> [a].  Raises ValueError on junk."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f


def _parse_input(text: str, p: int) -> FixedUQ:
    """Decimal value or 0x-prefixed raw, to the u*.P input format.

    Decimal inputs are rounded to nearest at P fraction bits; values at or
    above the largest representable clamp (they all saturate anyway).
    """
    if text.lower().startswith("0x"):
        raw = int(text, 16)
        int_bits = max(5, raw.bit_length() - p)
        return FixedUQ(raw, int_bits, p)
    v = Fraction(text)
    if v < 0:
        raise ValueError("input must be nonnegative")
    limit = Fraction(32) - Fraction(1, 1 << p)
    if v > limit:
        v = limit
    return quantize(v, 5, p, RoundingMode.ROUND_NEAREST_EVEN)


def _cmd_eval(args) -> int:
    cfg = _config_from(args)
    a = _parse_input(args.input, cfg.out_precision)
    luts = build_luts(cfg)
    res = exp_neg(a, cfg, luts)
    p = cfg.out_precision
    oracle = oracle_exp_neg(a.value)
    ulps = float(abs(res.value - oracle) * (1 << p))
    print(f"input   {float(a):.17g} (raw 0x{a.raw:x}, u{a.int_bits}.{p})")
    print(f"result  {float(res):.17g} (raw 0x{res.raw:x}, u1.{p})")
    print(f"oracle  {float(oracle):.17g}")
    print(f"error   {ulps:.6g} ulp (1 ulp = 2**-{p})")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _config_from(args)
    rep = sweep_error(cfg)
    with _open_out(args.out) as out:
        write_sweep_csv([(cfg, rep)], out)
    return 0


def _cmd_coeff(args) -> int:
    report = coeff_error_scan(args.p)
    with _open_out(args.out) as out:
        write_coeff_csv(report, args.p, out)
    return 0


def _cmd_fig1(args) -> int:
    range_pows = _parse_span(args.ranges)
    rows = []
    for rp in range_pows:
        for terms in (2, 3, 4):
            rows.append((terms, rp, series_range_error(terms, rp)))
    with _open_out(args.out) as out:
        write_fig1_csv(rows, out)
    return 0


def _cmd_fig5(args) -> int:
    rows = mult_lut_sweep()
    with _open_out(args.out) as out:
        write_sweep_csv(rows, out)
    return 0


def _cmd_table1(args) -> int:
    rows = derived_error_table()
    with _open_out(args.out) as out:
        write_table1_csv(rows, out)
    return 0


def _cmd_table2(args) -> int:
    cells = term_precision_table(
        p=args.p,
        cubic_widths=_parse_span(args.wc),
        square_widths=_parse_span(args.ws),
    )
    with _open_out(args.out) as out:
        write_table2_csv(cells, out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fxexp",
        description="Fixed-point e**-x datapath model: evaluate and analyze.",
    )
    subs = ap.add_subparsers(dest="command", required=True)

    s = subs.add_parser("eval", help="evaluate one input")
    s.add_argument("--input", required=True,
                   help="decimal value, or 0x-prefixed raw at P fraction bits")
    _add_config_flags(s)
    s.set_defaults(fn=_cmd_eval)

    s = subs.add_parser("sweep", help="exhaustive error sweep of one configuration")
    _add_config_flags(s)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(fn=_cmd_sweep)

    s = subs.add_parser("coeff", help="cubic-coefficient approximation error")
    s.add_argument("--p", type=int, default=16)
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_coeff)

    s = subs.add_parser("fig1", help="truncated-series accuracy vs input range")
    s.add_argument("--ranges", default="-8:0",
                   help="range exponents, 'lo:hi' inclusive or a single value")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_fig1)

    s = subs.add_parser("fig5", help="multiplier/LUT/arithmetic accuracy grid")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_fig5)

    s = subs.add_parser("table1", help="derived-function accuracy table")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_table1)

    s = subs.add_parser("table2", help="cubic/square term width accuracy matrix")
    s.add_argument("--p", type=int, default=16)
    s.add_argument("--wc", default="5:16", help="cubic widths, 'lo:hi' or single")
    s.add_argument("--ws", default="10:16", help="square widths, 'lo:hi' or single")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_table2)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OverflowError) as exc:
        print(f"fxexp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
