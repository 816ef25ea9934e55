"""Closed-form area generating function G(q, w) as NUM / DEN of twelve q-series.

Each of the twelve auxiliary series is a sum over ``i >= 1`` of one shared
term shape, parameterised by :class:`GreekParams`:

* family F0: ``(-3)^(i-1+s) q^(i^2+2i-2) w^(i-1) / [(1-q)^(2i-2) P_i (1-q^i)^c]``
* family F1: ``(-3)^(i-1+s) q^(i^2+3i)   w^i     / [(1-q)^(2i)   P_i (1-q^i)^c]``

with ``P_i = prod_{k<i} (1-q^k)^4``. Derivative level 1 multiplies each term by
its logarithmic t-derivative ``D_i`` at t=1, level 2 by half the normalised
second derivative. These are exactly the t=1 moments of the kernel sums used by
:mod:`polyhex_gf.temperley`, which is how the two routes are tied together.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from .errors import AssemblyMismatch
from .series import QSeries, _as_fraction

WMode = Union[None, int, Fraction]  # None means symbolic w


class Family(enum.Enum):
    F0 = 0
    F1 = 1


@dataclass(frozen=True)
class GreekParams:
    family: Family
    edge_exponent: int
    sign_shift: int
    derivative_level: int

    def __post_init__(self) -> None:
        if self.derivative_level not in (0, 1, 2):
            raise ValueError("derivative_level must be 0, 1 or 2")
        if self.sign_shift not in (0, 1):
            raise ValueError("sign_shift must be 0 or 1")
        if self.edge_exponent < 0:
            raise ValueError("edge_exponent must be >= 0")

    def first_power(self, i: int) -> int:
        """Lowest q-power carried by the i-th summand."""
        if self.family is Family.F0:
            return i * i + 2 * i - 2
        return i * i + 3 * i


GREEK_NAMES = (
    "alpha", "beta", "gamma", "delta",
    "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu",
)

GREEK_PARAMS: dict[str, GreekParams] = {
    "alpha": GreekParams(Family.F0, 1, 0, 0),
    "beta": GreekParams(Family.F0, 2, 0, 0),
    "gamma": GreekParams(Family.F1, 3, 0, 0),
    "delta": GreekParams(Family.F1, 4, 1, 0),
    "epsilon": GreekParams(Family.F0, 1, 0, 1),
    "zeta": GreekParams(Family.F0, 2, 0, 1),
    "eta": GreekParams(Family.F1, 3, 0, 1),
    "theta": GreekParams(Family.F1, 4, 1, 1),
    "iota": GreekParams(Family.F0, 1, 0, 2),
    "kappa": GreekParams(Family.F0, 2, 0, 2),
    "lambda": GreekParams(Family.F1, 3, 0, 2),
    "mu": GreekParams(Family.F1, 4, 1, 2),
}


def _w_power(s: QSeries, m: int, w: WMode) -> QSeries:
    if m == 0:
        return s
    if w is None:
        return s.shift_w(m)
    return s.scale(_as_fraction(w) ** m)


def greek_term(p: GreekParams, i: int, order: int, w: WMode = None) -> QSeries:
    """The i-th summand of the series described by ``p``, truncated at ``order``."""
    f = p.family.value
    c = p.edge_exponent
    e = p.first_power(i)
    if e > order:
        return QSeries.zero(order)
    rest = order - e
    # everything except the leading monomial, computed to order - e
    base = QSeries.one(rest).div_one_minus_qk(1, 2 * i - 2 + 2 * f)
    for k in range(1, i):
        base = base.div_one_minus_qk(k, 4)
    base = base.div_one_minus_qk(i, c)
    if p.derivative_level:
        lin = 2 * i - 1 + f
        d1 = QSeries.monomial(rest, 0, 0, lin)
        for k in range(1, i):
            d1 = d1 + QSeries.monomial(rest, k, 0, 4).div_one_minus_qk(k)
        d1 = d1 + QSeries.monomial(rest, i, 0, c).div_one_minus_qk(i)
        if p.derivative_level == 1:
            factor = d1
        else:
            d2 = QSeries.monomial(rest, 0, 0, -lin)
            for k in range(1, i):
                d2 = d2 + QSeries.monomial(rest, 2 * k, 0, 4).div_one_minus_qk(k, 2)
            d2 = d2 + QSeries.monomial(rest, 2 * i, 0, c).div_one_minus_qk(i, 2)
            factor = (d1 * d1 + d2).scale(Fraction(1, 2))
        base = base * factor
    sign = (-3) ** (i - 1 + p.sign_shift)
    return _w_power(base.scale(sign).shift_up(e), i - 1 + f, w)


def max_index(p: GreekParams, order: int) -> int:
    """Largest i whose summand can reach q^order."""
    i = 1
    while p.first_power(i + 1) <= order:
        i += 1
    return i


def greek(p: GreekParams, order: int, w: WMode = None, extra_terms: int = 0) -> QSeries:
    """Sum of the summands of ``p`` that reach q^order.

    ``extra_terms`` adds summands beyond the cutoff; they contribute nothing
    below ``order`` and exist so tests can check that the cutoff is exact.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    total = QSeries.zero(order)
    for i in range(1, max_index(p, order) + 1 + extra_terms):
        total = total + greek_term(p, i, order, w)
    return total


@dataclass(frozen=True)
class GreekSet:
    alpha: QSeries
    beta: QSeries
    gamma: QSeries
    delta: QSeries
    epsilon: QSeries
    zeta: QSeries
    eta: QSeries
    theta: QSeries
    iota: QSeries
    kappa: QSeries
    lambda_: QSeries
    mu: QSeries

    @classmethod
    def compute(cls, order: int, w: WMode = None) -> "GreekSet":
        vals = {n: greek(GREEK_PARAMS[n], order, w) for n in GREEK_NAMES}
        vals["lambda_"] = vals.pop("lambda")
        return cls(**vals)

    def as_dict(self) -> dict[str, QSeries]:
        return {n: getattr(self, "lambda_" if n == "lambda" else n) for n in GREEK_NAMES}

    @property
    def order(self) -> int:
        return self.alpha.order


# NUM and DEN polynomial blocks as (coefficient, factors). Letters:
# a=alpha b=beta g=gamma d=delta e=epsilon z=zeta h=eta t=theta
# i=iota k=kappa l=lambda m=mu
_LETTERS = {
    "a": "alpha", "b": "beta", "g": "gamma", "d": "delta",
    "e": "epsilon", "z": "zeta", "h": "eta", "t": "theta",
    "i": "iota", "k": "kappa", "l": "lambda", "m": "mu",
}

Term = tuple[int, str]

NUM_BLOCKS: tuple[tuple[str, tuple[Term, ...]], ...] = (
    # (1-q)^4 ( ... )
    ("(1-q)^4", ((1, "a"), (1, "g"), (2, "ah"), (-2, "ge"))),
    # q^2 w (1-q)^2 ( ... )
    ("q^2w(1-q)^2", (
        (1, "i"), (1, "l"), (-1, "ak"), (-1, "am"),
        (1, "bi"), (1, "bl"), (-1, "gk"), (-1, "gm"),
        (1, "di"), (1, "dl"), (-2, "el"), (2, "hi"), (2, "azl"), (-2, "ahk"),
        (-2, "ahm"), (2, "atl"), (-2, "bel"),
        (2, "bhi"), (2, "gek"), (2, "gem"),
        (-2, "gzi"), (-2, "gti"),
        (-2, "del"), (2, "dhi"),
    )),
    # 4 q^2 w (1-q) ( ... )
    ("4q^2w(1-q)", ((1, "al"), (-1, "gi"))),
)

DEN_BLOCKS: tuple[tuple[str, tuple[Term, ...]], ...] = (
    ("(1-q)^4", (
        (1, ""), (-1, "b"), (1, "d"), (-1, "e"), (1, "h"), (-1, "az"), (1, "at"),
        (1, "be"), (-1, "bh"), (1, "gz"),
        (-1, "gt"),
        (-1, "de"), (1, "dh"),
    )),
    ("-2(1-q)^3", ((1, "g"), (1, "ah"), (-1, "ge"))),
    ("-2q^2w(1-q)^2", (
        (1, "k"), (-1, "bm"), (1, "dk"), (-1, "ek"), (1, "zi"),
        (-1, "zl"), (1, "hk"), (-1, "azm"), (1, "atk"),
        (1, "bem"), (-1, "bhm"), (-1, "bti"),
        (1, "btl"), (1, "gzm"), (-1, "gtk"),
        (-1, "dek"), (1, "dzi"), (-1, "dzl"), (1, "dhk"),
    )),
    ("-2q^2w(1-q)", (
        (1, "i"), (1, "ak"), (-1, "am"), (-1, "bi"), (2, "bl"), (-2, "gk"),
        (1, "di"), (-1, "el"), (1, "hi"),
        (1, "azl"), (-1, "ahk"), (-1, "ahm"), (1, "atl"),
        (-1, "bel"), (1, "bhi"), (1, "gek"), (1, "gem"),
        (-1, "gzi"), (-1, "gti"),
        (-1, "del"), (1, "dhi"),
    )),
    ("-4q^2w", ((1, "al"), (-1, "gi"))),
)


def _prefactor(label: str, order: int, w: WMode) -> Callable[[QSeries], QSeries]:
    """Multiplication by one of the fixed prefactors of NUM/DEN."""

    def apply(s: QSeries) -> QSeries:
        lab = label
        coef = 1
        if lab.startswith("-"):
            coef, lab = -1, lab[1:]
        if lab[0].isdigit():
            coef *= int(lab[0])
            lab = lab[1:]
        out = s
        if lab.startswith("q^2w"):
            out = _w_power(out.shift(2), 1, w)
            lab = lab[4:]
        if lab:
            power = {"(1-q)": 1, "(1-q)^2": 2, "(1-q)^3": 3, "(1-q)^4": 4}[lab]
            out = out.mul_one_minus_qk(1, power)
        return out.scale(coef) if coef != 1 else out

    return apply


def _block_sum(terms: tuple[Term, ...], g: Mapping[str, QSeries], order: int) -> QSeries:
    total = QSeries.zero(order)
    for coef, letters in terms:
        prod = QSeries.one(order)
        for ch in letters:
            prod = prod * g[_LETTERS[ch]]
        total = total + prod.scale(coef)
    return total


Blocks = tuple[tuple[str, tuple[Term, ...]], ...]


def _assemble(blocks: Blocks, g: GreekSet, w: WMode) -> QSeries:
    vals = g.as_dict()
    order = g.order
    total = QSeries.zero(order)
    for label, terms in blocks:
        total = total + _prefactor(label, order, w)(_block_sum(terms, vals, order))
    return total


def assemble_num(g: GreekSet, w: WMode = None, blocks: Blocks = NUM_BLOCKS) -> QSeries:
    return _assemble(blocks, g, w)


def assemble_den(g: GreekSet, w: WMode = None, blocks: Blocks = DEN_BLOCKS) -> QSeries:
    den = _assemble(blocks, g, w)
    if den.coeff(0) != 1:
        raise AssemblyMismatch(f"assemble_den: constant term is {den.coeff(0)}, expected 1")
    return den


def check_integral(g: QSeries, where: str = "g_closed") -> None:
    """Every [q^n] must be a polynomial in w with nonnegative integer coefficients."""
    mat, den = g.numerator_matrix()
    if den != 1:
        for n in range(g.order + 1):
            c = g.coeff(n)
            if any(v.denominator != 1 for v in c.coeffs):
                raise AssemblyMismatch(
                    f"{where}: fractional coefficient {c} at q^{n}; "
                    "NUM/DEN transcription error"
                )
    for n, row in enumerate(mat.tolist()):
        if any(v < 0 for v in row):
            raise AssemblyMismatch(
                f"{where}: negative coefficient {g.coeff(n)} at q^{n}; "
                "NUM/DEN transcription error"
            )


def num_den(order: int, w: WMode = None, num_blocks: Blocks = NUM_BLOCKS,
            den_blocks: Blocks = DEN_BLOCKS) -> tuple[QSeries, QSeries]:
    g = GreekSet.compute(order, w)
    return assemble_num(g, w, num_blocks), assemble_den(g, w, den_blocks)


def flip_term(blocks: Blocks, block: int = 0, term: int = 0) -> Blocks:
    """Copy of ``blocks`` with one term's sign flipped (fault injection for the verifier)."""
    out = [list(b) for b in blocks]
    label, terms = out[block]
    terms = list(terms)
    coef, letters = terms[term]
    terms[term] = (-coef, letters)
    out[block] = [label, tuple(terms)]
    return tuple((lab, ts) for lab, ts in out)


def g_closed(order: int, w: WMode = None, check: bool = True,
             num_blocks: Blocks = NUM_BLOCKS) -> QSeries:
    """G(q, w) = NUM/DEN to the given order; ``w=None`` keeps w symbolic."""
    if order < 1:
        raise ValueError("order must be >= 1")
    num, den = num_den(order, w, num_blocks)
    g = num * den.reciprocal()
    if check:
        check_integral(g)
    return g


KLARNER_DEN = (1, -6, 10, -7, 1)


def klarner(order: int) -> QSeries:
    """Column-convex polygons: q(1-q)^3 / (1 - 6q + 10q^2 - 7q^3 + q^4)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    num = QSeries.monomial(order, 1).mul_one_minus_qk(1, 3)
    return num * QSeries.polynomial(order, KLARNER_DEN).reciprocal()


def symbolic_w_degree_bound(g: QSeries) -> list[int]:
    """Measured w-degree of each [q^n] (no formula is asserted)."""
    return [g.coeff(n).degree for n in range(g.order + 1)]


__all__ = [
    "Family", "GreekParams", "GreekSet", "GREEK_NAMES", "GREEK_PARAMS",
    "NUM_BLOCKS", "DEN_BLOCKS", "greek", "greek_term", "assemble_num",
    "assemble_den", "g_closed", "klarner", "num_den", "check_integral",
    "max_index", "flip_term", "KLARNER_DEN",
]
