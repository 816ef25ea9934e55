from __future__ import annotations

import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import S2C_W0, S2C_W1
from polyhex_gf import closed_form as cf
from polyhex_gf.closed_form import GREEK_NAMES, GREEK_PARAMS, Family, GreekParams, GreekSet, greek
from polyhex_gf.errors import AssemblyMismatch
from polyhex_gf.series import QSeries

SUBSTITUTION_PAIRS = [
    ("beta", "alpha"), ("gamma", "delta"), ("zeta", "epsilon"),
    ("eta", "theta"), ("kappa", "iota"), ("lambda", "mu"),
]


def test_alpha_low_order_at_w0():
    assert greek(GREEK_PARAMS["alpha"], 3, w=0).int_coeffs() == [0, 1, 1, 1]


def test_beta_low_order():
    assert greek(GREEK_PARAMS["beta"], 3).int_coeffs() == [0, 1, 2, 3]


def test_gamma_lowest_term():
    g = greek(GREEK_PARAMS["gamma"], 6)
    assert g.valuation == 4
    assert str(g.coeff(4)) == "w"


def test_twelve_parameter_tuples():
    got = {n: (p.family.name, p.edge_exponent, p.sign_shift, p.derivative_level)
           for n, p in GREEK_PARAMS.items()}
    assert got == {
        "alpha": ("F0", 1, 0, 0), "beta": ("F0", 2, 0, 0),
        "gamma": ("F1", 3, 0, 0), "delta": ("F1", 4, 1, 0),
        "epsilon": ("F0", 1, 0, 1), "zeta": ("F0", 2, 0, 1),
        "eta": ("F1", 3, 0, 1), "theta": ("F1", 4, 1, 1),
        "iota": ("F0", 1, 0, 2), "kappa": ("F0", 2, 0, 2),
        "lambda": ("F1", 3, 0, 2), "mu": ("F1", 4, 1, 2),
    }


@pytest.mark.parametrize("base, derived", SUBSTITUTION_PAIRS)
def test_substitution_rule_symmetry(base, derived):
    p, d = GREEK_PARAMS[base], GREEK_PARAMS[derived]
    rebuilt = dataclasses.replace(p, edge_exponent=d.edge_exponent, sign_shift=d.sign_shift)
    assert rebuilt == d
    assert greek(rebuilt, 25, None) == greek(d, 25, None)


def test_derived_greek_differ_from_base():
    # guards against the substitution collapsing into a no-op
    for base, derived in SUBSTITUTION_PAIRS:
        assert greek(GREEK_PARAMS[base], 20) != greek(GREEK_PARAMS[derived], 20)


@pytest.mark.parametrize("name", GREEK_NAMES)
@pytest.mark.parametrize("order", [0, 5, 7, 14, 30])
def test_cutoff_is_exact(name, order):
    p = GREEK_PARAMS[name]
    assert greek(p, order, None) == greek(p, order, None, extra_terms=2)


@pytest.mark.parametrize("name", GREEK_NAMES)
def test_w_zero_behaviour(name):
    p = GREEK_PARAMS[name]
    s0 = greek(p, 25, w=0)
    if p.family is Family.F1:
        assert s0.is_zero()
    else:
        assert s0 == cf.greek_term(p, 1, 25, 0)


def test_level_two_terms_have_halves_that_cancel(g_symbolic_30):
    kappa = greek(GREEK_PARAMS["kappa"], 30)
    assert kappa.denominator in (1, 2)
    assert g_symbolic_30.is_integral


def test_greek_params_validation():
    with pytest.raises(ValueError):
        GreekParams(Family.F0, 1, 0, 3)
    with pytest.raises(ValueError):
        GreekParams(Family.F0, 1, 2, 0)


def test_den_constant_term_is_one():
    g = GreekSet.compute(20, None)
    assert cf.assemble_den(g, None).coeff(0, 0) == 1


def test_den_mismatch_is_reported():
    g = GreekSet.compute(10, None)
    label, terms = cf.DEN_BLOCKS[0]
    broken = ((label, terms + ((1, ""),)),) + cf.DEN_BLOCKS[1:]
    with pytest.raises(AssemblyMismatch):
        cf.assemble_den(g, None, broken)


def test_num_starts_with_q_at_w0():
    num, _ = cf.num_den(12, 0)
    assert num.coeff(0, 0) == 0
    assert num.coeff(1, 0) == 1


def test_g_closed_w1_reference_series():
    assert cf.g_closed(12, 1).int_coeffs()[1:] == S2C_W1


def test_g_closed_w0_reference_series():
    assert cf.g_closed(12, 0).int_coeffs()[1:] == S2C_W0


def test_two_component_column_at_area_four(g_symbolic_30):
    assert g_symbolic_30.coeff(4, 1) == 2
    assert str(g_symbolic_30.coeff(4)) == "42 + 2*w"


def test_symbolic_specialises_to_numeric(g_symbolic_30):
    for v in (0, 1, Fraction(1, 3), -2):
        assert g_symbolic_30.w_specialize(v) == cf.g_closed(30, v, check=v >= 0 and v == int(v))


def test_coefficients_nonnegative_integer_polynomials(g_symbolic_30):
    mat, den = g_symbolic_30.numerator_matrix()
    assert den == 1
    assert all(v >= 0 for row in mat.tolist() for v in row)


def test_w_degree_is_measured(g_symbolic_30):
    degs = cf.symbolic_w_degree_bound(g_symbolic_30)
    assert degs[:4] == [-1, 0, 0, 0]
    # m non-adjacent two-run columns need 2m cells plus m-1 separating cells
    assert all(0 <= d <= (n + 1) // 3 for n, d in enumerate(degs) if n)


def test_klarner_examples():
    k = cf.klarner(12)
    assert k.int_coeffs()[:7] == [0, 1, 3, 11, 42, 162, 626]


@given(st.integers(1, 80))
def test_klarner_equals_w0(order):
    assert cf.klarner(order) == cf.g_closed(order, 0)


def test_integrality_check_catches_fraction():
    bad = QSeries.from_coeffs(3, [0, 1, Fraction(1, 2), 0])
    with pytest.raises(AssemblyMismatch):
        cf.check_integral(bad)
    with pytest.raises(AssemblyMismatch):
        cf.check_integral(QSeries.from_coeffs(2, [0, -1, 0]))


def test_flipped_num_term_changes_g():
    broken = cf.flip_term(cf.NUM_BLOCKS, 1, 0)
    assert broken != cf.NUM_BLOCKS
    assert cf.g_closed(12, 1, check=False, num_blocks=broken) != cf.g_closed(12, 1)


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        cf.g_closed(0)
    with pytest.raises(ValueError):
        cf.klarner(0)
