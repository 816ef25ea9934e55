"""Exact truncated power series in q with coefficients in Q[w], and polynomials in t over them.

A :class:`QSeries` stores its coefficients as one integer matrix ``c[n][m]``
(power of q by power of w) over a single positive common denominator. Every
public accessor hands back exact :class:`fractions.Fraction` values, so the
integer scaling is invisible to callers. Multiplication goes through Kronecker
substitution into a single Python big integer, which keeps order-320 products
cheap.

Truncation is tracked explicitly: a series of order ``N`` knows the coefficients
of ``q**0 .. q**N`` and nothing above. Binary operations return the minimum of
the operand orders, and reading past the order raises
:class:`~polyhex_gf.errors.IndexOutOfTruncation`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Sequence, Union

import mpmath
import numpy as np

from .errors import IndexOutOfTruncation, NonInvertibleConstantTerm

Coeff = Fraction
Scalar = Union[int, Fraction]


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class WPoly:
    """Polynomial in ``w`` with exact rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [_as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        """Degree in w; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> Fraction:
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return Fraction(0)

    def __call__(self, w: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == WPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if m == 0 else ("w" if m == 1 else f"w^{m}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts)


# -- integer matrix helpers -------------------------------------------------


def _zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def _pad_cols(a: np.ndarray, cols: int) -> np.ndarray:
    if a.shape[1] >= cols:
        return a
    out = _zeros(a.shape[0], cols)
    out[:, : a.shape[1]] = a
    return out


def _max_abs(values: list[int]) -> int:
    return max(max(values), -min(values)) if values else 0


def _pack(values: list[int], nbytes: int) -> int:
    pos = b"".join((v if v > 0 else 0).to_bytes(nbytes, "little") for v in values)
    if min(values) >= 0:
        return int.from_bytes(pos, "little")
    neg = b"".join((-v if v < 0 else 0).to_bytes(nbytes, "little") for v in values)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(x: int, count: int, nbytes: int) -> list[int]:
    sign = 1
    if x < 0:
        x, sign = -x, -1
    base = 1 << (8 * nbytes)
    half = base >> 1
    raw = x.to_bytes(max(count * nbytes, (x.bit_length() + 7) // 8), "little")
    out = []
    carry = 0
    for j in range(count):
        v = int.from_bytes(raw[j * nbytes : (j + 1) * nbytes], "little") + carry
        if v >= half:
            out.append(sign * (v - base))
            carry = 1
        else:
            out.append(sign * v)
            carry = 0
    return out


def _kronecker_mul(a: np.ndarray, b: np.ndarray, rows: int) -> np.ndarray:
    """Product of two integer (q, w) matrices, keeping q-rows ``0 .. rows-1``."""
    a = a[:rows]
    b = b[:rows]
    width = a.shape[1] + b.shape[1] - 1
    fa = _pad_cols(a, width).ravel().tolist()
    fb = _pad_cols(b, width).ravel().tolist()
    ma, mb = _max_abs(fa), _max_abs(fb)
    out = _zeros(rows, width)
    if ma == 0 or mb == 0:
        return out
    terms = min(len(fa), len(fb))
    bits = ma.bit_length() + mb.bit_length() + terms.bit_length() + 2
    nbytes = (bits + 7) // 8
    prod = _pack(fa, nbytes) * _pack(fb, nbytes)
    flat = _unpack(prod, rows * width, nbytes)
    out[:, :] = np.array(flat, dtype=object).reshape(rows, width)
    return out


# -- QSeries ----------------------------------------------------------------


class QSeries:
    """Truncated series ``sum_{n<=order} c_n(w) q^n`` with exact rational coefficients.

    Instances are immutable. Build them with :meth:`from_coeffs`,
    :meth:`monomial`, :meth:`zero` / :meth:`one` or arithmetic.
    """

    __slots__ = ("_order", "_c", "_den")

    def __init__(self, order: int, num: np.ndarray, den: int = 1) -> None:
        # internal constructor: num is an object matrix of ints, shape (order+1, width)
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if num.shape[0] != order + 1:
            raise ValueError("coefficient matrix does not match the order")
        if den <= 0:
            raise ValueError("denominator must be positive")
        width = num.shape[1]
        while width > 1 and not num[:, width - 1].any():
            width -= 1
        if width == 0:
            num, width = _zeros(order + 1, 1), 1
        num = num[:, :width]
        if den != 1:
            flat = num.ravel().tolist()
            g = math.gcd(den, *flat)
            if g > 1:
                num = num // g
                den //= g
        num = np.array(num, dtype=object, copy=True)
        num.flags.writeable = False
        self._order = order
        self._c = num
        self._den = den

    # construction ---------------------------------------------------------

    @classmethod
    def from_coeffs(cls, order: int, coeffs: Sequence[Any]) -> "QSeries":
        """Build from a list indexed by q-power.

        Each entry is a scalar (w-degree 0), a :class:`WPoly`, or a sequence of
        scalars giving a polynomial in w. Missing entries up to ``order`` are 0.
        """
        rows: list[list[Fraction]] = []
        for n in range(order + 1):
            entry = coeffs[n] if n < len(coeffs) else 0
            if isinstance(entry, WPoly):
                rows.append(list(entry.coeffs))
            elif isinstance(entry, (list, tuple)):
                rows.append([_as_fraction(v) for v in entry])
            else:
                rows.append([_as_fraction(entry)])
        width = max(1, max((len(r) for r in rows), default=1))
        den = 1
        for r in rows:
            for v in r:
                den = den * v.denominator // math.gcd(den, v.denominator)
        num = _zeros(order + 1, width)
        for n, r in enumerate(rows):
            for m, v in enumerate(r):
                num[n, m] = v.numerator * (den // v.denominator)
        return cls(order, num, den)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order, _zeros(order + 1, 1))

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.monomial(order, 0)

    @classmethod
    def monomial(cls, order: int, n: int, m: int = 0, coeff: Scalar = 1) -> "QSeries":
        """``coeff * q**n * w**m`` truncated at ``order``."""
        c = _as_fraction(coeff)
        num = _zeros(order + 1, m + 1)
        if n <= order:
            num[n, m] = c.numerator
        return cls(order, num, c.denominator)

    @classmethod
    def polynomial(cls, order: int, coeffs: Sequence[Scalar]) -> "QSeries":
        return cls.from_coeffs(order, list(coeffs[: order + 1]))

    # basic properties -----------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def w_degree(self) -> int:
        """Largest power of w present; -1 for the zero series."""
        if not self._c.any():
            return -1
        return self._c.shape[1] - 1

    @property
    def denominator(self) -> int:
        """Least common denominator of all retained coefficients."""
        return self._den

    @property
    def valuation(self) -> int | None:
        """Lowest q-power with a nonzero coefficient, or None if zero to this order."""
        for n in range(self._order + 1):
            if self._c[n].any():
                return n
        return None

    def is_integral(self) -> bool:
        return self._den == 1

    def is_zero(self) -> bool:
        return not self._c.any()

    # coefficient access ---------------------------------------------------

    def _check_index(self, n: int) -> None:
        if n < 0:
            raise IndexError("negative q-power")
        if n > self._order:
            raise IndexOutOfTruncation(f"q^{n} is beyond truncation order {self._order}")

    def coeff(self, n: int, m: int | None = None) -> WPoly | Fraction:
        """``[q^n]`` as a :class:`WPoly`, or ``[q^n w^m]`` as a Fraction when ``m`` is given."""
        self._check_index(n)
        row = self._c[n]
        if m is None:
            return WPoly(tuple(Fraction(int(v), self._den) for v in row))
        if m < 0 or m >= len(row):
            return Fraction(0)
        return Fraction(int(row[m]), self._den)

    def coeff_list(self, m: int | None = None) -> list[Fraction]:
        """Coefficients of ``q^0 .. q^order``.

        With ``m`` given, the w^m coefficient; otherwise the value at w=1 (the
        sum over w-powers).
        """
        if m is None:
            sums = self._c.sum(axis=1).tolist()
        elif m < self._c.shape[1]:
            sums = self._c[:, m].tolist()
        else:
            sums = [0] * (self._order + 1)
        return [Fraction(int(v), self._den) for v in sums]

    def int_coeffs(self, m: int | None = None) -> list[int]:
        """Like :meth:`coeff_list` but insists every value is an integer."""
        out = []
        for v in self.coeff_list(m):
            if v.denominator != 1:
                raise ValueError(f"non-integer coefficient {v}")
            out.append(v.numerator)
        return out

    def numerator_matrix(self) -> tuple[np.ndarray, int]:
        """Read-only integer matrix and common denominator (for fast consumers)."""
        return self._c, self._den

    # order manipulation ---------------------------------------------------

    def truncate(self, order: int) -> "QSeries":
        if order >= self._order:
            return self
        return QSeries(order, self._c[: order + 1], self._den)

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q**k`` (k >= 0); order is preserved."""
        if k == 0:
            return self
        num = _zeros(self._order + 1, self._c.shape[1])
        if k <= self._order:
            num[k:] = self._c[: self._order + 1 - k]
        return QSeries(self._order, num, self._den)

    def shift_up(self, k: int) -> "QSeries":
        """Multiply by ``q**k`` and raise the order by k (the product is known that far)."""
        num = _zeros(self._order + 1 + k, self._c.shape[1])
        num[k:] = self._c
        return QSeries(self._order + k, num, self._den)

    def shift_w(self, m: int) -> "QSeries":
        """Multiply by ``w**m`` (m >= 0)."""
        if m == 0:
            return self
        num = _zeros(self._order + 1, self._c.shape[1] + m)
        num[:, m:] = self._c
        return QSeries(self._order, num, self._den)

    def div_one_minus_qk(self, k: int, m: int = 1) -> "QSeries":
        """Multiply by ``1/(1 - q**k)**m`` via strided prefix sums."""
        if k < 1 or m < 0:
            raise ValueError("need k >= 1 and m >= 0")
        num = np.array(self._c, dtype=object, copy=True)
        for _ in range(m):
            for r in range(min(k, self._order + 1)):
                num[r::k] = np.cumsum(num[r::k], axis=0)
        return QSeries(self._order, num, self._den)

    def mul_one_minus_qk(self, k: int, m: int = 1) -> "QSeries":
        """Multiply by ``(1 - q**k)**m``."""
        out = self
        for _ in range(m):
            out = out - out.shift(k)
        return out

    # arithmetic -----------------------------------------------------------

    def _aligned(self, other: "QSeries") -> tuple[int, np.ndarray, np.ndarray, int]:
        order = min(self._order, other._order)
        width = max(self._c.shape[1], other._c.shape[1])
        a = _pad_cols(self._c[: order + 1], width)
        b = _pad_cols(other._c[: order + 1], width)
        if self._den == other._den:
            return order, a, b, self._den
        den = self._den * other._den // math.gcd(self._den, other._den)
        return order, a * (den // self._den), b * (den // other._den), den

    def _coerce(self, other: Any) -> "QSeries | None":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.monomial(self._order, 0, 0, other)
        return None

    def __add__(self, other: Any) -> "QSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order, a, b, den = self._aligned(o)
        return QSeries(order, a + b, den)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "QSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order, a, b, den = self._aligned(o)
        return QSeries(order, a - b, den)

    def __rsub__(self, other: Any) -> "QSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "QSeries":
        return QSeries(self._order, -self._c, self._den)

    def scale(self, s: Scalar) -> "QSeries":
        f = _as_fraction(s)
        if f == 0:
            return QSeries.zero(self._order)
        num = self._c * f.numerator
        den = self._den * f.denominator
        return QSeries(self._order, num, den)

    def __mul__(self, other: Any) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self._order, other._order)
        prod = _kronecker_mul(self._c, other._c, order + 1)
        return QSeries(order, prod, self._den * other._den)

    def __rmul__(self, other: Any) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = QSeries.one(self._order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other: Any) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / _as_fraction(other))
        if isinstance(other, QSeries):
            return self * other.reciprocal()
        return NotImplemented

    def reciprocal(self) -> "QSeries":
        """Multiplicative inverse; the constant term must be a nonzero rational."""
        c0 = self._c[0]
        if c0[0] == 0 or any(c0[1:]):
            raise NonInvertibleConstantTerm(
                f"constant term {self.coeff(0)} is not an invertible rational"
            )
        inv0 = Fraction(self._den, int(c0[0]))
        x = QSeries.monomial(0, 0, 0, inv0)
        prec = 0
        while prec < self._order:
            prec = min(2 * prec + 1, self._order)
            a = self.truncate(prec)
            x = QSeries(prec, _pad_rows(x._c, prec + 1), x._den)
            # Newton step: x <- x + x * (1 - a*x)
            x = x + x * (1 - a * x)
        return x

    # comparison -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QSeries.monomial(self._order, 0, 0, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        if self._order != other._order:
            return False
        return self._den == other._den and _same(self._c, other._c)

    def __hash__(self) -> int:
        return hash((self._order, self._den, tuple(map(tuple, self._c.tolist()))))

    def agrees_with(self, other: "QSeries", upto: int | None = None) -> bool:
        """Coefficientwise equality on the shared order (or up to ``upto``)."""
        n = min(self._order, other._order)
        if upto is not None:
            n = min(n, upto)
        return self.truncate(n) == other.truncate(n)

    def first_difference(self, other: "QSeries") -> int | None:
        """Lowest q-power where the two series differ on their shared order."""
        n = min(self._order, other._order)
        diff = self.truncate(n) - other.truncate(n)
        return diff.valuation

    # specialisation & evaluation -----------------------------------------

    def w_specialize(self, value: Scalar) -> "QSeries":
        """Substitute a rational number for w."""
        v = _as_fraction(value)
        width = self._c.shape[1]
        num = _zeros(self._order + 1, 1)
        # Horner in w, scaled to integers: sum_m c_m p^m q^(W-1-m) over q^(W-1)
        p, d = v.numerator, v.denominator
        acc = _zeros(self._order + 1, 1)[:, 0]
        for m in reversed(range(width)):
            acc = acc * p + self._c[:, m] * d ** (width - 1 - m)
        num[:, 0] = acc
        return QSeries(self._order, num, self._den * d ** (width - 1))

    def float_eval(
        self,
        x: Any,
        prec: int = 256,
        radius: Any | None = None,
    ) -> tuple[mpmath.mpf, mpmath.mpf]:
        """Evaluate the truncated series at a real ``0 <= x < 1``.

        Returns ``(value, tail_bound)``. The tail bound estimates
        ``|sum_{n>order} c_n x^n|`` as ``C (x/rho)^(order+1) / (1 - x/rho)``
        where ``rho`` is ``radius`` if given, otherwise the reciprocal of the
        largest ``|c_n|^(1/n)`` over the upper half of the retained
        coefficients (never above 1), and ``C = max |c_n| rho^n`` over the same
        window.
        """
        if self.w_degree > 0:
            raise ValueError("float_eval needs w specialised first")
        coeffs = [int(v) for v in self._c[:, 0].tolist()]
        with mpmath.workprec(prec):
            xv = mpmath.mpf(x)
            if not 0 <= xv < 1:
                raise ValueError("float_eval requires 0 <= x < 1")
            acc = mpmath.mpf(0)
            for c in reversed(coeffs):
                acc = acc * xv + c
            value = acc / self._den
            lo = max(1, self._order // 2)
            window = [(n, abs(coeffs[n])) for n in range(lo, self._order + 1) if coeffs[n]]
            if not window:
                return +value, mpmath.mpf(0)
            if radius is None:
                growth = max(mpmath.root(mpmath.mpf(a), n) for n, a in window)
                rho = 1 / max(growth, mpmath.mpf(1))
            else:
                rho = mpmath.mpf(radius)
            big_c = max(mpmath.mpf(a) * rho**n for n, a in window) / self._den
            ratio = xv / rho
            if ratio >= 1:
                tail = mpmath.inf
            else:
                tail = big_c * ratio ** (self._order + 1) / (1 - ratio)
            return +value, +tail

    # serialisation --------------------------------------------------------

    def to_json_obj(self) -> dict[str, Any]:
        coeffs = []
        for n in range(self._order + 1):
            row = []
            for m, v in enumerate(self._c[n].tolist()):
                if v:
                    f = Fraction(int(v), self._den)
                    row.append([m, str(f.numerator), str(f.denominator)])
            coeffs.append(row)
        return {"order": self._order, "coeffs": coeffs}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "QSeries":
        order = int(obj["order"])
        rows = obj["coeffs"]
        if len(rows) != order + 1:
            raise ValueError("coeffs length does not match order")
        entries: list[list[Fraction]] = []
        for row in rows:
            poly: dict[int, Fraction] = {}
            for m, num, den in row:
                poly[int(m)] = Fraction(int(num), int(den))
            width = max(poly, default=-1) + 1
            entries.append([poly.get(m, Fraction(0)) for m in range(width)])
        return cls.from_coeffs(order, entries)

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_obj(json.loads(text))

    # display --------------------------------------------------------------

    def __repr__(self) -> str:
        terms = []
        for n in range(self._order + 1):
            c = self.coeff(n)
            if c.degree < 0:
                continue
            if n == 0:
                terms.append(f"({c})")
            else:
                terms.append(f"({c})*q^{n}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self._order + 1}))"


def _pad_rows(a: np.ndarray, rows: int) -> np.ndarray:
    if a.shape[0] >= rows:
        return a[:rows]
    out = _zeros(rows, a.shape[1])
    out[: a.shape[0]] = a
    return out


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return a.tolist() == b.tolist()


# -- module-level operations ------------------------------------------------


def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def sub(a: QSeries, b: QSeries) -> QSeries:
    return a - b


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def scale(a: QSeries, s: Scalar) -> QSeries:
    return a.scale(s)


def reciprocal(a: QSeries) -> QSeries:
    return a.reciprocal()


def geom_pow(k: int, m: int, order: int) -> QSeries:
    """``1/(1 - q**k)**m`` to the given order."""
    if k < 1 or m < 1:
        raise ValueError("geom_pow needs k >= 1 and m >= 1")
    return QSeries.one(order).div_one_minus_qk(k, m)


def w_specialize(a: QSeries, value: Scalar) -> QSeries:
    return a.w_specialize(value)


def coeff(a: QSeries, n: int, m: int | None = None) -> WPoly | Fraction:
    return a.coeff(n, m)


def float_eval(a: QSeries, x: Any, prec: int = 256, radius: Any | None = None):
    return a.float_eval(x, prec=prec, radius=radius)


def naive_mul(a: QSeries, b: QSeries) -> QSeries:
    """Schoolbook convolution over Fractions; kept as a test oracle for :func:`mul`."""
    order = min(a.order, b.order)
    out: list[dict[int, Fraction]] = [dict() for _ in range(order + 1)]
    for i in range(order + 1):
        ai = a.coeff(i)
        for j in range(order + 1 - i):
            bj = b.coeff(j)
            for m1, x in enumerate(ai.coeffs):
                if not x:
                    continue
                for m2, y in enumerate(bj.coeffs):
                    if y:
                        out[i + j][m1 + m2] = out[i + j].get(m1 + m2, 0) + x * y
    rows = []
    for d in out:
        width = max(d, default=-1) + 1
        rows.append([d.get(m, 0) for m in range(width)])
    return QSeries.from_coeffs(order, rows)


# -- TSeries ----------------------------------------------------------------


class TSeries:
    """Polynomial ``sum_{h<=t_order} a_h t^h`` whose coefficients share one q-order."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[QSeries]) -> None:
        terms = tuple(terms)
        if not terms:
            raise ValueError("TSeries needs at least one coefficient")
        order = min(t.order for t in terms)
        self._terms = tuple(t.truncate(order) for t in terms)

    @classmethod
    def zero(cls, q_order: int, t_order: int) -> "TSeries":
        z = QSeries.zero(q_order)
        return cls([z] * (t_order + 1))

    @classmethod
    def constant(cls, a: QSeries, t_order: int) -> "TSeries":
        z = QSeries.zero(a.order)
        return cls([a] + [z] * t_order)

    @classmethod
    def monomial(cls, a: QSeries, h: int, t_order: int) -> "TSeries":
        """``a * t**h``."""
        z = QSeries.zero(a.order)
        terms = [z] * (t_order + 1)
        if h <= t_order:
            terms[h] = a
        return cls(terms)

    @property
    def q_order(self) -> int:
        return self._terms[0].order

    @property
    def t_order(self) -> int:
        return len(self._terms) - 1

    @property
    def terms(self) -> tuple[QSeries, ...]:
        return self._terms

    def __getitem__(self, h: int) -> QSeries:
        if 0 <= h < len(self._terms):
            return self._terms[h]
        return QSeries.zero(self.q_order)

    def _zip(self, other: "TSeries"):
        n = max(len(self._terms), len(other._terms))
        return [(self[h], other[h]) for h in range(n)]

    def __add__(self, other: "TSeries") -> "TSeries":
        return TSeries(a + b for a, b in self._zip(other))

    def __sub__(self, other: "TSeries") -> "TSeries":
        return TSeries(a - b for a, b in self._zip(other))

    def __neg__(self) -> "TSeries":
        return TSeries(-a for a in self._terms)

    def __mul__(self, s: Any) -> "TSeries":
        """Multiply every coefficient by a QSeries or a rational scalar."""
        if isinstance(s, (QSeries, int, Fraction)):
            return TSeries(a * s for a in self._terms)
        return NotImplemented

    __rmul__ = __mul__

    def map(self, fn) -> "TSeries":
        return TSeries(fn(a) for a in self._terms)

    def shift_t(self, k: int) -> "TSeries":
        """Multiply by ``t**k``, dropping powers above the t-order."""
        z = QSeries.zero(self.q_order)
        terms = [z] * k + list(self._terms[: len(self._terms) - k])
        return TSeries(terms[: len(self._terms)])

    def div_one_minus_qkt(self, k: int, m: int = 1) -> "TSeries":
        """Multiply by ``1/(1 - q**k t)**m``."""
        terms = list(self._terms)
        for _ in range(m):
            for h in range(1, len(terms)):
                terms[h] = terms[h] + terms[h - 1].shift(k)
        return TSeries(terms)

    def t_substitute_q(self) -> "TSeries":
        """Substitute ``t -> q t``: the t^h coefficient gains a factor q^h."""
        return TSeries(a.shift(h) for h, a in enumerate(self._terms))

    def t_derivative(self) -> "TSeries":
        if len(self._terms) == 1:
            return TSeries([QSeries.zero(self.q_order)])
        return TSeries(a.scale(h) for h, a in enumerate(self._terms) if h > 0)

    def t_eval_one(self) -> QSeries:
        acc = self._terms[0]
        for a in self._terms[1:]:
            acc = acc + a
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TSeries):
            return NotImplemented
        return all(a == b for a, b in self._zip(other))

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"TSeries(q_order={self.q_order}, t_order={self.t_order})"


def t_substitute_q(a: TSeries) -> TSeries:
    return a.t_substitute_q()


def t_derivative(a: TSeries) -> TSeries:
    return a.t_derivative()


def t_eval_one(a: TSeries) -> QSeries:
    return a.t_eval_one()


def t_half_second_derivative_at_one(a: TSeries) -> QSeries:
    """``(1/2) d^2/dt^2 a`` at t = 1, i.e. ``sum_h C(h,2) a_h``."""
    acc = QSeries.zero(a.q_order)
    for h, term in enumerate(a.terms):
        if h >= 2:
            acc = acc + term.scale(h * (h - 1) // 2)
    return acc
