"""Ratio analysis, amplitude, pole location and a certified lower bound on the growth constant.

Ratios and amplitudes are computed as exact rationals and rounded exactly, so
a reported 12-decimal value is never an artefact of floating point. The pole
is found by bisection on the truncated denominator with mpmath, and the lower
bound uses exact integer n-th roots (floor), so it can only under-report.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import gmpy2
import mpmath

from .errors import NoSignChange, NoStabilization
from .series import QSeries

DEFAULT_PREC = int(os.environ.get("POLYHEX_GF_PREC", "256"))
MIN_WINDOW = 10

REFERENCE_MU = "4.3223829710631654554"


def round_fraction(x: Fraction, places: int) -> Fraction:
    """Round half away from zero to ``places`` decimals, exactly."""
    scale = 10**places
    num = abs(x) * scale
    q, r = divmod(num.numerator, num.denominator)
    if 2 * r >= num.denominator:
        q += 1
    return Fraction(-q if x < 0 else q, scale)


def floor_fraction(x: Fraction, places: int) -> Fraction:
    scale = 10**places
    return Fraction(math.floor(x * scale), scale)


def fmt_fraction(x: Fraction, places: int) -> str:
    """Exact decimal rendering of a rational that is a multiple of 10**-places."""
    scale = 10**places
    n = x * scale
    if n.denominator != 1:
        n = round_fraction(x, places) * scale
    v = int(n)
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, frac = divmod(v, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def decimal_str(x: Fraction, digits: int = 20) -> str:
    """``x`` rounded to ``digits`` decimal places."""
    return fmt_fraction(round_fraction(x, digits), digits)


def _as_exact(mu: Any) -> Fraction:
    if isinstance(mu, Fraction):
        return mu
    if isinstance(mu, int):
        return Fraction(mu)
    if isinstance(mu, str):
        return Fraction(mu)
    if isinstance(mu, mpmath.mpf):
        man, exp = mpmath.mpf(mu).man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    raise TypeError(f"cannot treat {type(mu).__name__} as an exact number")


@dataclass
class Stabilized:
    value: str | None  # 12-decimal string, or None when no window qualifies
    n_lo: int | None
    n_hi: int | None
    stabilized: bool

    @property
    def window(self) -> tuple[int, int] | None:
        if self.n_lo is None:
            return None
        return (self.n_lo, self.n_hi)


def _trailing_window(values: dict[int, Fraction], places: int) -> tuple[Fraction, int, int]:
    ns = sorted(values)
    hi = ns[-1]
    target = round_fraction(values[hi], places)
    lo = hi
    for n in reversed(ns[:-1]):
        if n != lo - 1 or round_fraction(values[n], places) != target:
            break
        lo = n
    return target, lo, hi


def stabilize(values: dict[int, Fraction], places: int = 12, min_window: int = MIN_WINDOW,
              strict: bool = True) -> Stabilized:
    """Maximal trailing window of indices sharing one ``places``-decimal rounding."""
    if not values:
        if strict:
            raise NoStabilization("no values")
        return Stabilized(None, None, None, False)
    target, lo, hi = _trailing_window(values, places)
    ok = hi - lo + 1 >= min_window
    if not ok and strict:
        raise NoStabilization(
            f"longest trailing window [{lo}, {hi}] is shorter than {min_window}"
        )
    return Stabilized(fmt_fraction(target, places), lo, hi, ok)


@dataclass
class RatioResult:
    ratios: dict[int, Fraction]
    stabilized: Stabilized

    def table(self, digits: int = 20) -> dict[int, str]:
        return {n: decimal_str(r, digits) for n, r in self.ratios.items()}


def ratios(coeffs: Sequence[int], places: int = 12, strict: bool = True) -> RatioResult:
    """``a_n / a_{n-1}`` for every n with a nonzero predecessor; ``coeffs[n] = a_n``."""
    table = {
        n: Fraction(coeffs[n], coeffs[n - 1])
        for n in range(1, len(coeffs))
        if coeffs[n - 1] != 0
    }
    return RatioResult(table, stabilize(table, places, strict=strict))


@dataclass
class AmplitudeResult:
    values: dict[int, Fraction]
    stabilized: Stabilized

    def table(self, digits: int = 20) -> dict[int, str]:
        return {n: decimal_str(v, digits) for n, v in self.values.items()}


def amplitude(coeffs: Sequence[int], mu: Any, places: int = 12, strict: bool = True) -> AmplitudeResult:
    """``a_n / mu^n`` as exact rationals (``mu`` as a decimal string, Fraction or mpf)."""
    m = _as_exact(mu)
    if m <= 1:
        raise ValueError("mu must exceed 1")
    vals = {}
    power = Fraction(1)
    for n in range(len(coeffs)):
        if n:
            power *= m
        if coeffs[n]:
            vals[n] = coeffs[n] / power
    return AmplitudeResult(vals, stabilize(vals, places, strict=strict))


@dataclass
class PoleResult:
    value: mpmath.mpf
    bound: mpmath.mpf
    bisection_width: mpmath.mpf
    tail_bound: mpmath.mpf
    steps: int

    def rounded(self, places: int = 12) -> str:
        return fmt_fraction(round_fraction(_as_exact(self.value), places), places)


def _horner(coeffs: list[int], den: int, x: mpmath.mpf) -> mpmath.mpf:
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc / den


def _derivative_abs(den: QSeries, x: mpmath.mpf) -> mpmath.mpf:
    coeffs = den.coeff_list(0)
    acc = mpmath.mpf(0)
    for n in range(len(coeffs) - 1, 0, -1):
        acc = acc * x + n * mpmath.mpf(coeffs[n].numerator) / coeffs[n].denominator
    return abs(acc)


def pole_locate(den: QSeries, bracket: tuple[Any, Any], tol: Any = "1e-13",
                prec: int = DEFAULT_PREC, radius: Any | None = None) -> PoleResult:
    """Root of the truncated denominator in ``bracket`` by bisection.

    The reported bound adds the bisection half-width to the shift a perturbation
    of size ``tail_bound`` can cause, ``tail / |den'(root)|`` (doubled for slack).
    """
    with mpmath.workprec(prec):
        lo, hi = mpmath.mpf(bracket[0]), mpmath.mpf(bracket[1])
        tol = mpmath.mpf(tol)
        flo, tlo = den.float_eval(lo, prec, radius)
        fhi, thi = den.float_eval(hi, prec, radius)
        if flo * fhi >= 0:
            raise NoSignChange(f"den has no sign change on [{bracket[0]}, {bracket[1]}]")
        if abs(flo) <= tlo or abs(fhi) <= thi:
            raise NoSignChange("truncation tail is too large to trust the bracket signs")
        mat, d = den.numerator_matrix()
        ints = [int(v) for v in mat[:, 0].tolist()]
        steps = 0
        while hi - lo > tol:
            mid = (lo + hi) / 2
            fm = _horner(ints, d, mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
            steps += 1
        root = (lo + hi) / 2
        _, tail = den.float_eval(root, prec, radius)
        deriv = _derivative_abs(den, root)
        width = hi - lo
        shift = 2 * tail / deriv if deriv else mpmath.inf
        return PoleResult(+root, width / 2 + shift, width, tail, steps)


@dataclass
class LowerBound:
    value: Fraction  # certified: value <= a_n^(1/n) for the maximising n
    n: int
    bits: int

    def decimal(self, places: int = 6) -> str:
        return fmt_fraction(floor_fraction(self.value, places), places)


def nth_root_floor(a: int, n: int, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that does not exceed a**(1/n)."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    r, _ = gmpy2.iroot(gmpy2.mpz(a) << (bits * n), n)
    return Fraction(int(r), 1 << bits)


def lower_bound(coeffs: Sequence[int], bits: int = DEFAULT_PREC) -> LowerBound:
    """``max_n floor(a_n^(1/n))`` with every root rounded down; ``coeffs[n] = a_n``."""
    best: LowerBound | None = None
    for n in range(1, len(coeffs)):
        if coeffs[n] <= 0:
            continue
        v = nth_root_floor(coeffs[n], n, bits)
        if best is None or v > best.value:
            best = LowerBound(v, n, bits)
    if best is None:
        raise ValueError("no positive coefficient")
    return best


def richardson(ratios_: dict[int, Fraction]) -> Fraction:
    """Linear extrapolation ``n r_n - (n-1) r_{n-1}`` at the last index (optional, not the default)."""
    n = max(ratios_)
    return n * ratios_[n] - (n - 1) * ratios_[n - 1]


@dataclass
class AsymptoticsReport:
    model: str
    order: int
    ratio_table: dict[int, str]
    stabilized_ratio: Stabilized
    growth_estimate: str
    amplitude_mu: str
    amplitude_table: dict[int, str]
    amplitude: Stabilized
    pole_q: str | None
    pole_error_bound: str | None
    pole_growth: str | None
    lower_bound: str
    lower_bound_n: int
    lower_bound_exact: str
    precision_bits: int
    extrapolated_growth: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_json_obj(self) -> dict[str, Any]:
        out = asdict(self)
        out["ratio_table"] = {str(k): v for k, v in self.ratio_table.items()}
        out["amplitude_table"] = {str(k): v for k, v in self.amplitude_table.items()}
        return out

    def check(self) -> list[str]:
        """Internal consistency: lower bound below the estimate, pole times growth near 1."""
        problems = []
        if Fraction(self.lower_bound_exact) > Fraction(self.growth_estimate):
            problems.append("lower bound exceeds growth estimate")
        if self.pole_q is not None:
            prod = Fraction(self.pole_q) * Fraction(self.growth_estimate)
            if abs(prod - 1) > Fraction(1, 10**9):
                problems.append(f"pole * growth = {decimal_str(prod, 15)}")
        return problems


def build_report(
    model: str,
    coeffs: Sequence[int],
    den: QSeries | None,
    bracket: tuple[Any, Any] | None,
    mu: Any | None = None,
    prec: int = DEFAULT_PREC,
    extrapolate: bool = False,
    digits: int = 20,
) -> AsymptoticsReport:
    """Everything the CLI prints for one model.

    ``mu`` is the growth constant used to normalise the amplitude; when omitted
    it is taken from the located pole (``1/pole``).
    """
    notes: list[str] = []
    rr = ratios(coeffs, strict=False)
    if not rr.stabilized.stabilized:
        notes.append("NoStabilization: ratio window shorter than %d" % MIN_WINDOW)
    n_hi = max(rr.ratios)
    growth = rr.ratios[n_hi]

    pole = None
    if den is not None and bracket is not None:
        # tight enough that 1/pole can normalise a_n at n ~ 320 to 12 decimals
        pole = pole_locate(den, bracket, tol=mpmath.mpf(2) ** (-(prec - 32)), prec=prec)
    with mpmath.workprec(prec):
        pole_growth = (1 / pole.value) if pole is not None else None
        amp_mu = _as_exact(mu) if mu is not None else (
            _as_exact(pole_growth) if pole_growth is not None else growth
        )
        amp = amplitude(coeffs, amp_mu, strict=False)
        if not amp.stabilized.stabilized:
            notes.append("NoStabilization: amplitude window shorter than %d" % MIN_WINDOW)
        lb = lower_bound(coeffs, bits=prec)
        return AsymptoticsReport(
            model=model,
            order=len(coeffs) - 1,
            ratio_table=rr.table(digits),
            stabilized_ratio=rr.stabilized,
            growth_estimate=decimal_str(growth, digits),
            amplitude_mu=mu if isinstance(mu, str) else decimal_str(amp_mu, digits),
            amplitude_table=amp.table(digits),
            amplitude=amp.stabilized,
            pole_q=mpmath.nstr(pole.value, digits, strip_zeros=False) if pole else None,
            pole_error_bound=mpmath.nstr(pole.bound, 5) if pole else None,
            pole_growth=mpmath.nstr(pole_growth, digits, strip_zeros=False) if pole else None,
            lower_bound=lb.decimal(6),
            lower_bound_n=lb.n,
            lower_bound_exact=decimal_str(floor_fraction(lb.value, digits), digits),
            precision_bits=prec,
            extrapolated_growth=decimal_str(richardson(rr.ratios), digits) if extrapolate else None,
            notes=notes,
        )
