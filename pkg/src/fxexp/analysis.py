"""Exhaustive error sweeps and generators for the accuracy tables/figures.

Error metrics follow the fixed-point convention used throughout: MAE is the
maximum absolute error over the swept domain, ulps are MAE in units of
2**-P.  Every sweep compares the datapath output both against the exact
exponential and against its round-to-nearest P-bit quantization.

Grid scans run in float64 (measured errors are at least five orders of
magnitude above double rounding noise); reported maxima for the pure
polynomial studies are re-evaluated in exact rational arithmetic at the
candidate worst-case points.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .expcore import (
    ExpConfig,
    Luts,
    ONES_COMPLEMENT,
    TWOS_COMPLEMENT,
    build_luts,
    exp_neg_vec,
)
from .oracle import oracle_exp_neg

_CHUNK = 1 << 18


@dataclass(frozen=True)
class ErrorReport:
    """Worst-case result of a sweep: vs the exact exponential and (where
    meaningful) vs its round-to-nearest P-bit quantization."""

    max_abs_err: float
    max_ulps: float
    argmax_raw: int
    samples: int
    max_abs_err_q: Optional[float] = None
    max_ulps_q: Optional[float] = None


def accuracy_bits(max_abs_err: float) -> int:
    """floor(-log2(MAE)): the number of always-correct fractional bits."""
    if max_abs_err <= 0:
        return 64
    b = int(math.floor(-math.log2(max_abs_err)))
    while max_abs_err > 2.0 ** -b:
        b -= 1
    while max_abs_err <= 2.0 ** -(b + 1):
        b += 1
    return b


def sweep_threads() -> int:
    """Parallelism cap for sweeps, from FXEXP_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("FXEXP_THREADS", "1")))
    except ValueError:
        return 1


# Oracle grids are cached per precision: e**-(k * 2**-P) for k in [0, 16*2**P).
_oracle_grids: dict = {}


def _oracle_grid(p: int) -> np.ndarray:
    grid = _oracle_grids.get(p)
    if grid is None:
        a = np.arange(16 << p, dtype=np.float64) / (1 << p)
        grid = np.exp(-a)
        _oracle_grids[p] = grid
    return grid


def sweep_error(cfg: ExpConfig, luts: Optional[Luts] = None) -> ErrorReport:
    """Exhaustive sweep of exp_neg over every input raw in [0, 16*2**P).

    Saturation is spot-checked (all inputs >= 16 must give the output of the
    largest non-saturating input) but excluded from the error maximum, which
    it cannot affect by construction.
    """
    p = cfg.out_precision
    if luts is None:
        luts = build_luts(cfg)
    n = 16 << p
    scale = float(1 << p)
    oracle = _oracle_grid(p)
    oracle_q = np.rint(oracle * scale) / scale

    spans = [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]

    def scan(span):
        lo, hi = span
        raws = np.arange(lo, hi, dtype=np.int64)
        vals = np.asarray(exp_neg_vec(raws, cfg, luts)).astype(np.float64) / scale
        err = np.abs(vals - oracle[lo:hi])
        err_q = np.abs(vals - oracle_q[lo:hi])
        i = int(np.argmax(err))
        return float(err[i]), lo + i, float(err_q.max())

    threads = sweep_threads()
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, spans))
    else:
        results = [scan(s) for s in spans]

    max_err, argmax = 0.0, 0
    max_err_q = 0.0
    for err, raw, err_q in results:       # in-order reduction: deterministic
        if err > max_err:
            max_err, argmax = err, raw
        max_err_q = max(max_err_q, err_q)

    sat_raws = np.array([n, n + (1 << p), (32 << p) - 1], dtype=np.int64)
    sat_out = np.asarray(exp_neg_vec(sat_raws, cfg, luts))
    edge = np.asarray(exp_neg_vec(np.array([n - 1], dtype=np.int64), cfg, luts))
    if not (sat_out == edge[0]).all():
        raise AssertionError("saturated inputs did not clamp to the domain edge output")

    return ErrorReport(
        max_abs_err=max_err,
        max_ulps=max_err * scale,
        argmax_raw=argmax,
        samples=n,
        max_abs_err_q=max_err_q,
        max_ulps_q=max_err_q * scale,
    )


# ---------------------------------------------------------------------------
# Polynomial studies (no datapath widths involved).
# ---------------------------------------------------------------------------

def _poly_shift_add(x):
    """1 - x(1 - (x/2)(1 - 0.3125x)): the shift-add cubic."""
    c = Fraction(5, 16) if isinstance(x, Fraction) else 0.3125
    return 1 - x * (1 - (x / 2) * (1 - c * x))


def _poly_true_cubic(x):
    """1 - x(1 - (x/2)(1 - x/3)): the cubic with the exact 1/3 coefficient."""
    third = Fraction(1, 3) if isinstance(x, Fraction) else 1.0 / 3.0
    return 1 - x * (1 - (x / 2) * (1 - third * x))


def _taylor_partial(x, terms: int):
    """Truncated alternating Taylor series of e**-x with `terms` terms."""
    if isinstance(x, Fraction):
        total, term = Fraction(1), Fraction(1)
    else:
        total, term = 1.0, 1.0
    for k in range(1, terms):
        term = term * -x / k
        total = total + term
    return total


def _refined_max(poly, grid_step: Fraction, candidates: Iterable[int]):
    """Exact |poly - e**-x| at candidate grid indices; returns (err, index)."""
    best, best_i = Fraction(0), 0
    for i in sorted(set(candidates)):
        x = grid_step * i
        err = abs(poly(x) - oracle_exp_neg(x))
        if err > best:
            best, best_i = err, i
    return best, best_i


@dataclass(frozen=True)
class CoeffScanReport:
    """Worst-case errors of the two cubic-coefficient choices."""

    shift_add: ErrorReport
    true_cubic: ErrorReport


def coeff_error_scan(p: int = 16) -> CoeffScanReport:
    """Max |poly(x) - e**-x| over the residual domain [0, 2**-3) on the
    2**(P-3)-point grid, for the shift-add and the true-1/3 cubic."""
    if p < 4:
        raise ValueError("precision must be at least 4")
    n = 1 << (p - 3)
    step = Fraction(1, 1 << p)
    x = np.arange(n, dtype=np.float64) / (1 << p)
    truth = np.exp(-x)

    reports = []
    for poly in (_poly_shift_add, _poly_true_cubic):
        err = np.abs(poly(x) - truth)
        i = int(np.argmax(err))
        exact, argmax = _refined_max(poly, step, [i, n - 1])
        reports.append(ErrorReport(
            max_abs_err=float(exact),
            max_ulps=float(exact * (1 << p)),
            argmax_raw=argmax,
            samples=n,
        ))
    return CoeffScanReport(shift_add=reports[0], true_cubic=reports[1])


def series_range_error(terms: int, range_pow: int, grid_bits: int = 16) -> ErrorReport:
    """Max truncated-Taylor error over [0, 2**range_pow) on a dense grid.

    terms counts series terms including the constant (2 = linear,
    3 = quadratic, 4 = cubic).  The reported maximum is exact (rational
    re-evaluation at the worst grid point); ulps are left in units of the
    grid's own step and are rarely meaningful here, so max_ulps is NaN.
    """
    if terms not in (2, 3, 4):
        raise ValueError("terms must be 2, 3 or 4")
    if range_pow > 0:
        raise ValueError("range must be at most 2**0")
    n = 1 << grid_bits
    step = Fraction(1, 1 << (grid_bits - range_pow))
    x = np.arange(n, dtype=np.float64) * float(step)
    err = np.abs(_taylor_partial(x, terms) - np.exp(-x))
    i = int(np.argmax(err))
    exact, argmax = _refined_max(lambda q: _taylor_partial(q, terms), step, [i, n - 1])
    return ErrorReport(
        max_abs_err=float(exact),
        max_ulps=float("nan"),
        argmax_raw=argmax,
        samples=n,
    )


# ---------------------------------------------------------------------------
# Dataset generators behind the CLI subcommands.
# ---------------------------------------------------------------------------

def term_precision_table(p: int = 16,
                         cubic_widths: Sequence[int] = tuple(range(5, 17)),
                         square_widths: Sequence[int] = tuple(range(10, 17)),
                         base: Optional[ExpConfig] = None):
    """Accuracy-bits matrix over (cubic width, square width) pairs.

    Returns a list of (wc, ws, bits, report) in row-major order.
    """
    if base is None:
        base = ExpConfig(out_precision=p)
    luts = build_luts(base)
    rows = []
    for wc in cubic_widths:
        for ws in square_widths:
            cfg = replace(base, cubic_width=wc, square_width=ws)
            rep = sweep_error(cfg, luts)
            rows.append((wc, ws, accuracy_bits(rep.max_abs_err), rep))
    return rows


def mult_lut_sweep(p_list: Sequence[int] = (8, 12, 16),
                   m_offsets: Sequence[int] = (0, 1, 2, 3),
                   l_offsets: Sequence[int] = (1, 3),
                   modes: Sequence[str] = (ONES_COMPLEMENT, TWOS_COMPLEMENT)):
    """The `fig5` dataset: sweep error across multiplier precision, LUT
    precision and arithmetic mode for each output precision requirement.

    Returns a list of (cfg, report).
    """
    out = []
    for p in p_list:
        for dl in l_offsets:
            luts_cache: dict = {}
            for dm in m_offsets:
                for mode in modes:
                    cfg = ExpConfig(out_precision=p, mult_precision=p + dm,
                                    lut_precision=p + dl, arithmetic=mode)
                    luts = luts_cache.get(p + dl)
                    if luts is None:
                        luts = build_luts(cfg)
                        luts_cache[p + dl] = luts
                    out.append((cfg, sweep_error(cfg, luts)))
    return out


_DERIVED_FUNCS = ("gaussian", "sigmoid", "tanh")


def derived_sweep(function: str, cfg: ExpConfig, luts: Optional[Luts] = None) -> ErrorReport:
    """Worst-case error of a derived function over the full non-saturating
    domain of the underlying exp_neg call (exp argument in [0, 16)).

    Derived functions consume the M-fraction-bit datapath value; the
    post-exponential combination (division for sigmoid/tanh) is exact,
    followed by one round-to-nearest at P fraction bits.  The error source
    under study is the exponential datapath itself.
    """
    if function not in _DERIVED_FUNCS:
        raise ValueError(f"unknown derived function {function!r}")
    p, m = cfg.out_precision, cfg.mult_precision
    if luts is None:
        luts = build_luts(cfg)
    scale = float(1 << p)
    n = 16 << p
    truth_e = _oracle_grid(p)

    max_err, argmax = 0.0, 0
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        raws = np.arange(lo, hi, dtype=np.int64)
        raw_m = np.asarray(exp_neg_vec(raws, cfg, luts, quantize_output=False))
        e = raw_m.astype(np.float64) / float(1 << m)
        te = truth_e[lo:hi]
        if function == "gaussian":
            out, truth = np.rint(e * scale) / scale, te
        elif function == "sigmoid":
            out = np.rint(scale / (1.0 + e)) / scale
            truth = 1.0 / (1.0 + te)
        else:
            out = np.rint(scale * (1.0 - e) / (1.0 + e)) / scale
            truth = (1.0 - te) / (1.0 + te)
        err = np.abs(out - truth)
        i = int(np.argmax(err))
        if err[i] > max_err:
            max_err, argmax = float(err[i]), lo + i

    return ErrorReport(max_abs_err=max_err, max_ulps=max_err * scale,
                       argmax_raw=argmax, samples=n)


def derived_error_table(cfg17: Optional[ExpConfig] = None,
                        cfg19: Optional[ExpConfig] = None):
    """The `table1` dataset: rows of (function, precision, max_abs_err, ulps)."""
    if cfg17 is None:
        cfg17 = ExpConfig(out_precision=16, mult_precision=17, lut_precision=17)
    if cfg19 is None:
        cfg19 = ExpConfig(out_precision=16, mult_precision=19, lut_precision=19)
    rows = []
    for cfg in (cfg17, cfg19):
        luts = build_luts(cfg)
        for fn in _DERIVED_FUNCS:
            rep = derived_sweep(fn, cfg, luts)
            rows.append((fn, cfg.mult_precision, rep.max_abs_err, rep.max_ulps))
    return rows


# ---------------------------------------------------------------------------
# CSV emission.  One schema per generator; floats carry 10 significant
# digits and a '.' decimal point regardless of locale.
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    return f"{v:.9e}" if isinstance(v, float) else str(v)


_MODE_SHORT = {ONES_COMPLEMENT: "ones", TWOS_COMPLEMENT: "twos"}


def write_sweep_csv(rows, out) -> None:
    """rows: iterable of (cfg, report)."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["p", "m", "l", "mode", "variant", "wc", "ws",
                "max_abs_err", "max_ulps", "argmax_raw", "samples"])
    for cfg, rep in rows:
        w.writerow([cfg.out_precision, cfg.mult_precision, cfg.lut_precision,
                    _MODE_SHORT[cfg.arithmetic], cfg.series_variant,
                    cfg.wc, cfg.ws, _fmt(rep.max_abs_err), _fmt(rep.max_ulps),
                    rep.argmax_raw, rep.samples])


def write_table2_csv(cells, out) -> None:
    """cells: iterable of (wc, ws, bits, report)."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["wc", "ws", "accuracy_bits"])
    for wc, ws, bits, _ in cells:
        w.writerow([wc, ws, bits])


def write_fig1_csv(rows, out) -> None:
    """rows: iterable of (terms, range_pow, report)."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["terms", "range_pow", "max_abs_err", "accuracy_bits"])
    for terms, range_pow, rep in rows:
        w.writerow([terms, range_pow, _fmt(rep.max_abs_err),
                    accuracy_bits(rep.max_abs_err)])


def write_table1_csv(rows, out) -> None:
    """rows: iterable of (function, precision, max_abs_err, ulps)."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["function", "precision", "max_abs_err", "ulps"])
    for fn, prec, err, ulps in rows:
        w.writerow([fn, prec, _fmt(float(err)), _fmt(float(ulps))])


def write_coeff_csv(report: CoeffScanReport, p: int, out) -> None:
    """Coefficient comparison: one row per cubic-coefficient choice."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["poly", "p", "max_abs_err", "argmax_raw", "samples"])
    for name, rep in (("shift_add", report.shift_add),
                      ("true_cubic", report.true_cubic)):
        w.writerow([name, p, _fmt(rep.max_abs_err), rep.argmax_raw, rep.samples])
