import csv
import io
from fractions import Fraction

import pytest

from fxexp import (
    ExpConfig,
    ONES_COMPLEMENT,
    TWOS_COMPLEMENT,
    accuracy_bits,
    build_luts,
    coeff_error_scan,
    oracle_exp_neg,
    series_range_error,
    sweep_error,
    term_precision_table,
)
from fxexp.analysis import (
    sweep_threads,
    write_fig1_csv,
    write_sweep_csv,
    write_table1_csv,
    write_table2_csv,
)


# --- oracle -------------------------------------------------------------------

def test_oracle_basics():
    assert oracle_exp_neg(0) == 1
    assert abs(float(oracle_exp_neg(1)) - 0.36787944117144233) < 1e-16


def test_oracle_ln2_identity():
    # e**-ln2 = 1/2; use a 16-digit rational approximation of ln 2
    x = Fraction(6931471805599453, 10**16)
    assert abs(oracle_exp_neg(x) - Fraction(1, 2)) < Fraction(1, 10**15)


# --- accuracy_bits ------------------------------------------------------------

def test_accuracy_bits_floor():
    assert accuracy_bits(1.5e-5) == 16
    assert accuracy_bits(3.2e-5) == 14
    assert accuracy_bits(0.4) == 1
    assert accuracy_bits(0.0) == 64


def test_accuracy_bits_round_trip():
    for err in (1.5e-5, 9e-8, 0.3, 2.61e-5, 1.01e-5):
        b = accuracy_bits(err)
        assert err <= 2.0 ** -b <= 2 * err


# --- sweep machinery ----------------------------------------------------------

def test_report_consistency():
    cfg = ExpConfig(out_precision=8, mult_precision=9, lut_precision=9)
    rep = sweep_error(cfg)
    assert rep.samples == 16 << 8
    assert rep.max_ulps == pytest.approx(rep.max_abs_err * (1 << 8))
    assert 0 <= rep.argmax_raw < rep.samples
    # the quantized-oracle metric differs by at most the oracle rounding
    assert abs(rep.max_abs_err - rep.max_abs_err_q) <= 2.0 ** -9


def test_sweep_deterministic_across_thread_counts(monkeypatch):
    cfg = ExpConfig(out_precision=16, mult_precision=17, lut_precision=17)
    luts = build_luts(cfg)
    monkeypatch.setenv("FXEXP_THREADS", "1")
    assert sweep_threads() == 1
    one = sweep_error(cfg, luts)
    monkeypatch.setenv("FXEXP_THREADS", "4")
    assert sweep_threads() == 4
    four = sweep_error(cfg, luts)
    assert one == four


def test_sweep_threads_garbage_env(monkeypatch):
    monkeypatch.setenv("FXEXP_THREADS", "many")
    assert sweep_threads() == 1


def test_small_p_sweep_bounds():
    rep = sweep_error(ExpConfig(out_precision=8, mult_precision=9, lut_precision=9))
    assert rep.max_ulps <= 2


# --- polynomial studies -------------------------------------------------------

def test_coeff_scan_values():
    r = coeff_error_scan(16)
    assert r.shift_add.max_abs_err == pytest.approx(1.04e-5, rel=0.05)
    assert r.true_cubic.max_abs_err < r.shift_add.max_abs_err
    # remainder grows monotonically: worst case sits at the top of the domain
    assert r.shift_add.argmax_raw == r.shift_add.samples - 1
    assert r.true_cubic.argmax_raw == r.true_cubic.samples - 1


def test_series_range_error_ordering():
    errs = [series_range_error(t, -8).max_abs_err for t in (2, 3, 4)]
    assert errs[0] > errs[1] > errs[2] > 0


def test_series_range_error_validation():
    with pytest.raises(ValueError):
        series_range_error(5, -8)
    with pytest.raises(ValueError):
        series_range_error(2, 1)


# --- CSV emission -------------------------------------------------------------

def _parse(buf):
    return list(csv.reader(io.StringIO(buf.getvalue())))


def test_sweep_csv_schema():
    cfg = ExpConfig(out_precision=8, mult_precision=9, lut_precision=9,
                    arithmetic=TWOS_COMPLEMENT)
    rep = sweep_error(cfg)
    buf = io.StringIO()
    write_sweep_csv([(cfg, rep)], buf)
    rows = _parse(buf)
    assert rows[0] == ["p", "m", "l", "mode", "variant", "wc", "ws",
                       "max_abs_err", "max_ulps", "argmax_raw", "samples"]
    assert rows[1][:7] == ["8", "9", "9", "twos", "proposed_cubic", "9", "9"]
    err = rows[1][7]
    assert "." in err and "e" in err
    # 9 digits after the decimal point = 10 significant digits
    assert len(err.split(".")[1].split("e")[0]) == 9
    assert float(err) == pytest.approx(rep.max_abs_err)


def test_table2_csv_schema():
    cells = term_precision_table(
        p=8, cubic_widths=[5, 6], square_widths=[6],
        base=ExpConfig(out_precision=8, mult_precision=9, lut_precision=9))
    buf = io.StringIO()
    write_table2_csv(cells, buf)
    rows = _parse(buf)
    assert rows[0] == ["wc", "ws", "accuracy_bits"]
    assert [r[:2] for r in rows[1:]] == [["5", "6"], ["6", "6"]]
    for r in rows[1:]:
        int(r[2])


def test_fig1_csv_schema():
    rep = series_range_error(2, -8)
    buf = io.StringIO()
    write_fig1_csv([(2, -8, rep)], buf)
    rows = _parse(buf)
    assert rows[0] == ["terms", "range_pow", "max_abs_err", "accuracy_bits"]
    assert rows[1][0] == "2" and rows[1][1] == "-8"
    assert int(rows[1][3]) == accuracy_bits(rep.max_abs_err)


def test_table1_csv_schema():
    buf = io.StringIO()
    write_table1_csv([("sigmoid", 17, 2.47e-5, 1.62)], buf)
    rows = _parse(buf)
    assert rows[0] == ["function", "precision", "max_abs_err", "ulps"]
    assert rows[1][0] == "sigmoid"
    assert float(rows[1][2]) == pytest.approx(2.47e-5)
