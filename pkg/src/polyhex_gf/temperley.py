"""Column-by-column functional equation for A(q, t, w) and its two solution routes.

``A(t)`` counts simple-2-column polyominoes whose last column has one
component, with t marking the height of that column. Appending a column
gives

    A(t) = qt/(1-qt) [1 + B1 + 2q^2w/(1-q)^3 C1]
         + qt/(1-qt)^2 [A1 + 2q^2w/(1-q)^2 C1]
         + q^4t^2w/((1-q)^2(1-qt)^3) (1 + 2/(1-q) A1 - B1)
         + 3q^4t^2w/((1-q)^2(1-qt)^4) (A1 - A(qt))

where A1, B1, C1 are A, dA/dt and (1/2) d^2A/dt^2 at t=1. Every appearance of
A on the right gains at least one power of q, so plain iteration from zero
converges q-adically (:func:`solve_fixed_point`). Unrolling the A(qt) term
gives four explicit kernel sums in t; evaluating them and their first two
t-derivatives at t=1 yields a 3x3 linear system for (A1, B1, C1)
(:func:`solve_linear`). Both routes end in G = A1 + q^2w/(1-q)^2 C1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .closed_form import WMode, _w_power
from .errors import BlockMismatch, NonConvergence, SingularSystem
from .series import QSeries, TSeries, t_half_second_derivative_at_one


@dataclass(frozen=True)
class FunctionalEqState:
    A: TSeries
    A1: QSeries
    B1: QSeries
    C1: QSeries

    @classmethod
    def from_A(cls, A: TSeries) -> "FunctionalEqState":
        return cls(
            A=A,
            A1=A.t_eval_one(),
            B1=A.t_derivative().t_eval_one(),
            C1=t_half_second_derivative_at_one(A),
        )

    @classmethod
    def zero(cls, order: int) -> "FunctionalEqState":
        return cls.from_A(TSeries.zero(order, order))

    @property
    def order(self) -> int:
        return self.A.q_order


# -- building blocks --------------------------------------------------------


def _qw(s: QSeries, q_pow: int, w_pow: int, one_minus_q: int, coef: int, w: WMode) -> QSeries:
    """coef * q^q_pow * w^w_pow / (1-q)^one_minus_q * s."""
    out = _w_power(s.shift(q_pow), w_pow, w)
    if one_minus_q:
        out = out.div_one_minus_qk(1, one_minus_q)
    return out.scale(coef) if coef != 1 else out


def _t_kernel(x: QSeries | TSeries, t_pow: int, one_minus_qt: int, t_order: int) -> TSeries:
    """t^t_pow / (1-qt)^one_minus_qt * x, where x is a t-constant or a TSeries."""
    ts = TSeries.constant(x, t_order) if isinstance(x, QSeries) else x
    return ts.shift_t(t_pow).div_one_minus_qkt(1, one_minus_qt)


def _brackets(s: FunctionalEqState, w: WMode) -> tuple[QSeries, QSeries, QSeries]:
    one = QSeries.one(s.order)
    x = one + s.B1 + _qw(s.C1, 2, 1, 3, 2, w)
    y = s.A1 + _qw(s.C1, 2, 1, 2, 2, w)
    z = one + s.A1.div_one_minus_qk(1).scale(2) - s.B1
    return x, y, z


def rhs_eq3(state: FunctionalEqState, w: WMode = None) -> TSeries:
    """Right-hand side of the functional equation evaluated at ``state``."""
    n = state.order
    h = state.A.t_order
    x, y, z = _brackets(state, w)
    out = _t_kernel(x.shift(1), 1, 1, h)
    out = out + _t_kernel(y.shift(1), 1, 2, h)
    out = out + _t_kernel(_qw(z, 4, 1, 2, 1, w), 2, 3, h)
    diff = TSeries.constant(state.A1, h) - state.A.t_substitute_q()
    diff = diff.map(lambda a: _qw(a, 4, 1, 2, 3, w))
    out = out + _t_kernel(diff, 2, 4, h)
    assert out.q_order == n
    return out


def iterate_fixed_point(order: int, w: WMode = None) -> Iterator[FunctionalEqState]:
    """Yield A^0 = 0, A^1, A^2, ... with A^{k+1} = rhs_eq3(A^k)."""
    state = FunctionalEqState.zero(order)
    while True:
        yield state
        state = FunctionalEqState.from_A(rhs_eq3(state, w))


def solve_fixed_point(order: int, w: WMode = None) -> FunctionalEqState:
    """Iterate from zero until two successive iterates agree exactly to q^order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    prev = None
    for k, state in enumerate(iterate_fixed_point(order, w)):
        if prev is not None and state.A == prev.A:
            return state
        if k > order + 1:
            raise NonConvergence(
                f"no fixed point after {k} iterations at order {order}; "
                "check the functional equation transcription"
            )
        prev = state
    raise AssertionError("unreachable")


# -- the unrolled (linear-system) route ---------------------------------------


@dataclass(frozen=True)
class KernelSums:
    """The four t-series multiplying the bracketed unknowns after unrolling A(qt)."""

    K_a: TSeries
    K_b: TSeries
    K_c: TSeries
    K_d: TSeries

    def moments(self) -> dict[str, tuple[QSeries, QSeries, QSeries]]:
        """Value, first derivative and half second derivative of each kernel at t=1."""
        out = {}
        for name in ("K_a", "K_b", "K_c", "K_d"):
            k = getattr(self, name)
            out[name] = (
                k.t_eval_one(),
                k.t_derivative().t_eval_one(),
                t_half_second_derivative_at_one(k),
            )
        return out


def _kernel_sum(order: int, w: WMode, f: int, last_exp: int, sign_shift: int,
                last_k_is_product: bool = False) -> TSeries:
    h = order
    total = TSeries.zero(order, h)
    i = 1
    while True:
        e = i * i + 2 * i - 2 if f == 0 else i * i + 3 * i
        if e > order:
            break
        lead = QSeries.monomial(order, e, 0, (-3) ** (i - 1 + sign_shift))
        lead = _w_power(lead, i - 1 + f, w).div_one_minus_qk(1, 2 * i - 2 + 2 * f)
        term = TSeries.monomial(lead, 2 * i - 1 + f, h)
        for k in range(1, i):
            term = term.div_one_minus_qkt(k, 4)
        if last_k_is_product:
            term = term.div_one_minus_qkt(i, 4)
        else:
            term = term.div_one_minus_qkt(i, last_exp)
        total = total + term
        i += 1
    return total


def kernel_sums(order: int, w: WMode = None) -> KernelSums:
    """Expand the four kernel sums as genuine polynomials in t (t-degree <= order)."""
    return KernelSums(
        K_a=_kernel_sum(order, w, 0, 1, 0),
        K_b=_kernel_sum(order, w, 0, 2, 0),
        K_c=_kernel_sum(order, w, 1, 3, 0),
        K_d=_kernel_sum(order, w, 1, 4, 1, last_k_is_product=True),
    )


def linear_system(order: int, w: WMode = None, kernels: KernelSums | None = None):
    """Matrix ``M`` and right side ``r`` with ``M (A1, B1, C1)^T = r``.

    Row j comes from the j-th t-moment at t=1 of the unrolled equation.
    """
    ks = kernels if kernels is not None else kernel_sums(order, w)
    mom = ks.moments()
    one = QSeries.one(order)
    zero = QSeries.zero(order)
    u = _qw(one, 2, 1, 3, 2, w)  # 2q^2w/(1-q)^3
    v = _qw(one, 2, 1, 2, 2, w)  # 2q^2w/(1-q)^2
    r2 = one.div_one_minus_qk(1).scale(2)  # 2/(1-q)
    M = []
    rhs = []
    for j in range(3):
        a, b, c, d = (mom[n][j] for n in ("K_a", "K_b", "K_c", "K_d"))
        row_coeffs = [b + c * r2 - d, a - c, a * u + b * v]
        row = [(one if col == j else zero) - row_coeffs[col] for col in range(3)]
        M.append(row)
        rhs.append(a + c)
    return M, rhs


def solve_3x3(M: list[list[QSeries]], rhs: list[QSeries]) -> list[QSeries]:
    """Gaussian elimination over the series ring; pivots must have invertible constant terms."""
    M = [list(r) for r in M]
    rhs = list(rhs)
    n = len(rhs)
    for j in range(n):
        piv = M[j][j]
        c0 = piv.coeff(0)
        if c0.degree != 0:
            raise SingularSystem(f"pivot {j} has constant term {c0}")
        inv = piv.reciprocal()
        for col in range(j, n):
            M[j][col] = M[j][col] * inv
        rhs[j] = rhs[j] * inv
        for r in range(n):
            if r != j and not M[r][j].is_zero():
                f = M[r][j]
                for col in range(j, n):
                    M[r][col] = M[r][col] - f * M[j][col]
                rhs[r] = rhs[r] - f * rhs[j]
    return rhs


def solve_linear(order: int, w: WMode = None) -> FunctionalEqState:
    """Solve for (A1, B1, C1) from the kernel moments, then rebuild A(t) from the unrolled form."""
    if order < 1:
        raise ValueError("order must be >= 1")
    ks = kernel_sums(order, w)
    M, rhs = linear_system(order, w, ks)
    A1, B1, C1 = solve_3x3(M, rhs)
    state0 = FunctionalEqState(A=TSeries.zero(order, order), A1=A1, B1=B1, C1=C1)
    x, y, z = _brackets(state0, w)
    A = ks.K_a * x + ks.K_b * y + ks.K_c * z - ks.K_d * A1
    return FunctionalEqState(A=A, A1=A1, B1=B1, C1=C1)


def g_from_A(state: FunctionalEqState, w: WMode = None) -> QSeries:
    """G = A1 + q^2 w/(1-q)^2 C1."""
    return state.A1 + _qw(state.C1, 2, 1, 2, 1, w)


def g_temperley(order: int, w: WMode = None, method: str = "iter") -> QSeries:
    if method in ("iter", "temperley-iter"):
        return g_from_A(solve_fixed_point(order, w), w)
    if method in ("linear", "temperley-linear"):
        return g_from_A(solve_linear(order, w), w)
    raise ValueError(f"unknown method {method!r}")


# -- block decomposition -----------------------------------------------------


def block_series(state: FunctionalEqState, w: WMode = None) -> dict[str, TSeries]:
    """The twelve block contributions A_alpha(t) .. A_mu(t) of the last-column case split."""
    h = state.A.t_order
    n = state.order
    one = QSeries.one(n)
    diff = TSeries.constant(state.A1, h) - state.A.t_substitute_q()

    def q4t2w(x, one_minus_q: int, one_minus_qt: int, coef: int = 1) -> TSeries:
        if isinstance(x, QSeries):
            return _t_kernel(_qw(x, 4, 1, one_minus_q, coef, w), 2, one_minus_qt, h)
        return _t_kernel(x.map(lambda a: _qw(a, 4, 1, one_minus_q, coef, w)), 2, one_minus_qt, h)

    def q3tw(x: QSeries, one_minus_q: int, one_minus_qt: int) -> TSeries:
        return _t_kernel(_qw(x, 3, 1, one_minus_q, 1, w), 1, one_minus_qt, h)

    blocks: dict[str, TSeries] = {}
    blocks["alpha"] = _t_kernel(one.shift(1), 1, 1, h) + q4t2w(one, 2, 3)
    blocks["beta"] = _t_kernel(state.A1.shift(1), 1, 2, h)
    blocks["gamma"] = _t_kernel(state.B1.shift(1), 1, 1, h)
    blocks["delta"] = q4t2w(state.A1, 3, 3)
    blocks["epsilon"] = q4t2w(diff, 2, 4)
    blocks["zeta"] = q4t2w(state.A1, 3, 3)
    blocks["eta"] = q4t2w(diff, 2, 4)
    blocks["theta"] = q4t2w(state.B1, 2, 3) - q4t2w(diff, 2, 4)
    blocks["iota"] = q3tw(state.C1, 3, 1)
    blocks["kappa"] = q3tw(state.C1, 2, 2) - q4t2w(state.B1, 2, 3) + q4t2w(diff, 2, 4)
    blocks["lambda"] = q3tw(state.C1, 3, 1)
    blocks["mu"] = q3tw(state.C1, 2, 2) - q4t2w(state.B1, 2, 3) + q4t2w(diff, 2, 4)
    return blocks


BLOCK_PAIRS = (("zeta", "delta"), ("eta", "epsilon"), ("lambda", "iota"), ("mu", "kappa"))


@dataclass
class BlockReport:
    order: int
    blocks: dict[str, TSeries]
    partition_ok: bool
    pairs_ok: dict[str, bool]
    nonnegative: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.partition_ok and all(self.pairs_ok.values()) and all(self.nonnegative.values())


def _nonnegative(ts: TSeries) -> bool:
    for a in ts.terms:
        mat, _ = a.numerator_matrix()
        if any(v < 0 for row in mat.tolist() for v in row):
            return False
    return True


def verify_block_identities(state: FunctionalEqState, w: WMode = None) -> BlockReport:
    """Check the blocks sum to A(t), the paired blocks coincide, and each block counts something.

    Each block is the generating function of a set of polyominoes, so its
    coefficients must be nonnegative; that is the per-block check that can
    name a culprit. Raises :class:`BlockMismatch` on the first failure.
    """
    blocks = block_series(state, w)
    pairs = {f"{a}={b}": blocks[a] == blocks[b] for a, b in BLOCK_PAIRS}
    nonneg = {name: _nonnegative(ts) for name, ts in blocks.items()}
    total = TSeries.zero(state.order, state.A.t_order)
    for ts in blocks.values():
        total = total + ts
    report = BlockReport(state.order, blocks, total == state.A, pairs, nonneg)
    for name, ok in nonneg.items():
        if not ok:
            raise BlockMismatch(name, "negative coefficient")
    for pair, ok in pairs.items():
        if not ok:
            raise BlockMismatch(pair.split("=")[0], f"pair {pair} differs")
    if not report.partition_ok:
        raise BlockMismatch("sum", "blocks do not add up to A(t)")
    return report


__all__ = [
    "FunctionalEqState", "KernelSums", "BlockReport", "rhs_eq3",
    "iterate_fixed_point", "solve_fixed_point", "kernel_sums", "linear_system",
    "solve_3x3", "solve_linear", "g_from_A", "g_temperley", "block_series",
    "verify_block_identities",
]
