from __future__ import annotations

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from polyhex_gf import closed_form as cf
from polyhex_gf.series import QSeries, WPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# Reference coefficient lists, n = 1..12.
S2C_W1 = [1, 3, 11, 44, 186, 806, 3518, 15349, 66797, 289960, 1256274, 5435860]
S2C_W0 = [1, 3, 11, 42, 162, 626, 2419, 9346, 36106, 139483, 538841, 2081612]
ALL_POLYHEX = [1, 3, 11, 44, 186, 814, 3652, 16689]

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def qseries(draw, max_order: int = 8, max_wdeg: int = 2, order: int | None = None,
            unit: bool = False) -> QSeries:
    """Random series; ``unit=True`` forces a nonzero w-free constant term."""
    n = draw(st.integers(0, max_order)) if order is None else order
    wdeg = draw(st.integers(0, max_wdeg))
    coeffs: list = [WPoly(tuple(draw(small_fracs) for _ in range(wdeg + 1))) for _ in range(n + 1)]
    if unit:
        coeffs[0] = draw(small_fracs.filter(bool))
    return QSeries.from_coeffs(n, coeffs)


@pytest.fixture(scope="session")
def g320_w1() -> list[int]:
    return cf.g_closed(320, 1).int_coeffs()


@pytest.fixture(scope="session")
def den320_w1() -> QSeries:
    return cf.num_den(320, 1)[1]


@pytest.fixture(scope="session")
def klarner320() -> list[int]:
    return cf.klarner(320).int_coeffs()


@pytest.fixture(scope="session")
def g_symbolic_30() -> QSeries:
    return cf.g_closed(30, None)



# criterion number -> (title, passed, seconds); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, secs = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {num:>2}. {title}  ({secs:.2f}s)")
