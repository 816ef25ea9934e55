from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyhex_gf import asymptotics as A
from polyhex_gf import closed_form as cf
from polyhex_gf.errors import NoSignChange, NoStabilization
from polyhex_gf.series import QSeries


def rounded(x: Fraction, places: int = 12) -> str:
    return A.fmt_fraction(A.round_fraction(x, places), places)


# -- exact rounding helpers ---------------------------------------------------


def test_round_half_away_from_zero():
    assert rounded(Fraction(1, 8), 2) == "0.13"
    assert rounded(Fraction(-1, 8), 2) == "-0.13"
    assert A.fmt_fraction(A.floor_fraction(Fraction(2, 3), 3), 3) == "0.666"
    assert A.decimal_str(Fraction(22, 7), 5) == "3.14286"


# -- ratios -------------------------------------------------------------------


def test_constant_sequence_ratios():
    r = A.ratios([1] * 30)
    assert set(r.ratios.values()) == {1}
    assert r.stabilized.value == "1.000000000000"
    assert r.stabilized.window == (1, 29)


def test_short_series_does_not_stabilise():
    coeffs = cf.g_closed(20, 1).int_coeffs()
    with pytest.raises(NoStabilization):
        A.ratios(coeffs)
    loose = A.ratios(coeffs, strict=False)
    assert not loose.stabilized.stabilized


def test_s2c_ratio_window(g320_w1):
    r = A.ratios(g320_w1)
    assert r.stabilized.value == "4.322382971063"
    lo, hi = r.stabilized.window
    assert lo <= 61 and hi == 320
    # the window is maximal: one index earlier rounds differently
    assert rounded(r.ratios[lo - 1]) != r.stabilized.value


def test_klarner_ratio(klarner320):
    r = A.ratios(klarner320)
    assert r.stabilized.value == "3.863130743243"


def test_ratio_table_has_twenty_digits(g320_w1):
    table = A.ratios(g320_w1).table(20)
    assert len(table[100].split(".")[1]) == 20


# -- amplitude ----------------------------------------------------------------


def test_power_of_two_amplitude():
    a = A.amplitude([2**n for n in range(40)], 2)
    assert set(a.values.values()) == {1}


def test_s2c_amplitude(g320_w1):
    a = A.amplitude(g320_w1, A.REFERENCE_MU)
    assert a.stabilized.value == "0.127739087206"
    lo, hi = a.stabilized.window
    assert lo <= 54 and hi == 320


def test_klarner_amplitude_with_twelve_digit_mu(klarner320):
    # with mu cut to 12 decimals the error in mu^n reaches the 12th digit near n = 316
    a = A.amplitude(klarner320, "3.863130743243", strict=False)
    assert all(rounded(a.values[n]) == "0.188419883819" for n in range(23, 316))


def test_klarner_amplitude_with_pole_mu(klarner320):
    den = QSeries.polynomial(320, cf.KLARNER_DEN)
    pole = A.pole_locate(den, ("0.2", "0.3"), tol=mpmath.mpf(2) ** -200)
    with mpmath.workprec(256):
        a = A.amplitude(klarner320, 1 / pole.value)
    assert a.stabilized.value == "0.188419883819"
    assert a.stabilized.window[1] == 320


def test_amplitude_rejects_small_mu():
    with pytest.raises(ValueError):
        A.amplitude([1, 1, 1], 1)


# -- pole -----------------------------------------------------------------------


def test_linear_pole():
    p = A.pole_locate(QSeries.polynomial(5, [1, -2]), ("0.4", "0.6"))
    assert abs(p.value - mpmath.mpf("0.5")) <= p.bound


def test_klarner_pole():
    p = A.pole_locate(QSeries.polynomial(320, cf.KLARNER_DEN), ("0.2", "0.3"))
    assert abs(p.value - mpmath.mpf("0.258857405163")) < mpmath.mpf("1e-11")
    assert p.rounded() == "0.258857405163"


def test_s2c_pole(den320_w1):
    p = A.pole_locate(den320_w1, ("0.2", "0.26"))
    assert abs(p.value - mpmath.mpf("0.231353863527")) < mpmath.mpf("1e-11")
    assert p.bound < mpmath.mpf("1e-11")
    assert p.bisection_width <= mpmath.mpf("1e-13")


def test_pole_matches_inverse_ratio(den320_w1, g320_w1, klarner320):
    for den, coeffs in ((den320_w1, g320_w1), (QSeries.polynomial(320, cf.KLARNER_DEN), klarner320)):
        p = A.pole_locate(den, ("0.2", "0.3") if coeffs is klarner320 else ("0.2", "0.26"))
        last = Fraction(coeffs[-1], coeffs[-2])
        assert abs(A._as_exact(p.value) * last - 1) < Fraction(1, 10**10)


def test_bad_bracket():
    with pytest.raises(NoSignChange):
        A.pole_locate(QSeries.polynomial(5, [1, -2]), ("0.1", "0.3"))


# -- lower bound ----------------------------------------------------------------


def test_lower_bound_square():
    lb = A.lower_bound([0, 1, 4])
    assert lb.value == 2 and lb.n == 2


def test_lower_bound_powers_of_three():
    coeffs = [3**n for n in range(30)]
    lb = A.lower_bound(coeffs, bits=64)
    assert lb.value <= 3
    assert 3 - lb.value < Fraction(1, 2**60)


def test_s2c_lower_bound(g320_w1):
    lb = A.lower_bound(g320_w1)
    assert lb.n == 320
    assert lb.value > Fraction("4.294676")
    assert lb.decimal(6) == "4.294676"


@given(st.integers(1, 10**30), st.integers(1, 40), st.integers(8, 128))
def test_root_floor_is_certified(a, n, bits):
    r = A.nth_root_floor(a, n, bits)
    assert r**n <= a
    assert (r + Fraction(1, 2**bits)) ** n > a
    # doubling the precision never drops below the coarser bound
    assert A.nth_root_floor(a, n, 2 * bits) >= r


@given(st.lists(st.integers(1, 10**12), min_size=2, max_size=25), st.integers(1, 24))
def test_lower_bound_monotone_in_length(tail, k):
    coeffs = [1] + tail
    k = min(k, len(coeffs) - 1)
    assert A.lower_bound(coeffs[: k + 1]).value <= A.lower_bound(coeffs).value


def test_lower_bound_monotone_on_s2c(g320_w1):
    prev = Fraction(0)
    for k in range(10, 321, 31):
        v = A.lower_bound(g320_w1[: k + 1], bits=64).value
        assert v >= prev
        prev = v


# -- report ---------------------------------------------------------------------


def test_report_invariants(g320_w1, den320_w1):
    r = A.build_report("s2c", g320_w1, den320_w1, ("0.2", "0.26"), mu=A.REFERENCE_MU)
    assert r.check() == []
    assert r.pole_growth.startswith("4.3223829710631654554")
    obj = r.to_json_obj()
    assert obj["stabilized_ratio"]["value"] == "4.322382971063"


def test_report_flags_short_series():
    coeffs = cf.g_closed(20, 1).int_coeffs()
    r = A.build_report("s2c", coeffs, None, None, mu=A.REFERENCE_MU)
    assert any("NoStabilization" in n for n in r.notes)


def test_richardson_is_optional(klarner320):
    r = A.build_report("klarner", klarner320, None, None, mu="3.863130743243")
    assert r.extrapolated_growth is None
    r2 = A.build_report("klarner", klarner320, None, None, mu="3.863130743243", extrapolate=True)
    assert r2.extrapolated_growth.startswith("3.86313074324")
