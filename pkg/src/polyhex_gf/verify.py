"""Cross-checks between the closed form, both functional-equation routes and brute force."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from . import closed_form as cf
from . import oracle, temperley
from .errors import PolyhexGFError
from .series import QSeries

# Known counts of fixed polyhexes of every kind, n = 1..12.
ALL_POLYHEX_COUNTS = (1, 3, 11, 44, 186, 814, 3652, 16689, 77359, 362671, 1716033, 8182213)


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


@dataclass
class VerifyConfig:
    symbolic_order: int = 60
    numeric_order: int = 120
    klarner_order: int = 320
    block_order: int = 40
    oracle_max: int = 10
    oracle_totals_max: int | None = None  # defaults to oracle_max
    inject_fault: str | None = None  # "num-term" flips one NUM term


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)


def _diff(a: QSeries, b: QSeries) -> str:
    n = a.first_difference(b)
    if n is None:
        return ""
    return f"first difference at q^{n}: {a.coeff(n)} vs {b.coeff(n)}"


def _det3(M: list[list[QSeries]]) -> QSeries:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def run_verify(cfg: VerifyConfig, progress: Callable[[CheckResult], None] | None = None) -> VerifyReport:
    report = VerifyReport()
    cache: dict[str, object] = {}
    num_blocks = cf.NUM_BLOCKS
    if cfg.inject_fault == "num-term":
        num_blocks = cf.flip_term(cf.NUM_BLOCKS, block=1, term=0)
    elif cfg.inject_fault is not None:
        raise ValueError(f"unknown fault {cfg.inject_fault!r}")

    def check(name: str, fn: Callable[[], str | None]) -> None:
        t0 = time.perf_counter()
        try:
            detail = fn()
            ok = not detail
        except PolyhexGFError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, ok, time.perf_counter() - t0, detail or "")
        report.checks.append(res)
        if progress:
            progress(res)

    ns, nn = cfg.symbolic_order, cfg.numeric_order

    def closed(w, order):
        key = f"closed:{w}:{order}"
        if key not in cache:
            num, den = cf.num_den(order, w, num_blocks)
            cache[key] = (num, den, num * den.reciprocal())
        return cache[key]

    def linear(w, order):
        key = f"linear:{w}:{order}"
        if key not in cache:
            cache[key] = temperley.solve_linear(order, w)
        return cache[key]

    def iterated(w, order):
        key = f"iter:{w}:{order}"
        if key not in cache:
            cache[key] = temperley.solve_fixed_point(order, w)
        return cache[key]

    def den_check():
        M, _ = temperley.linear_system(ns, None)
        _, den, _ = closed(None, ns)
        return _diff(den, _det3(M).mul_one_minus_qk(1, 4))

    def num_check():
        num, den, _ = closed(None, ns)
        g = temperley.g_from_A(linear(None, ns))
        return _diff(num, g * den)

    def integrality():
        for w, order in ((None, ns), (1, nn)):
            cf.check_integral(closed(w, order)[2], "assemble_num/assemble_den")
        return None

    def path(w, order, a, b):
        routes = {
            "closed": lambda: closed(w, order)[2],
            "iter": lambda: temperley.g_from_A(iterated(w, order), w),
            "linear": lambda: temperley.g_from_A(linear(w, order), w),
        }
        return lambda: _diff(routes[a](), routes[b]())

    def klarner_identity():
        g0 = closed(0, cfg.klarner_order)[2]
        return _diff(g0, cf.klarner(cfg.klarner_order))

    def oracle_refined():
        table = oracle.count_series(cfg.oracle_max)
        g = closed(None, max(ns, cfg.oracle_max))[2]
        for n in range(1, cfg.oracle_max + 1):
            poly = g.coeff(n)
            want = {m: int(c) for m, c in enumerate(poly.coeffs) if c}
            if want != table.refined[n]:
                return f"n={n}: oracle {table.refined[n]} vs closed form {want}"
        return None

    def oracle_totals():
        top = cfg.oracle_totals_max or cfg.oracle_max
        table = oracle.count_series(top)
        g1 = closed(1, max(nn, top))[2].int_coeffs()
        g0 = cf.klarner(top).int_coeffs()
        for n in range(1, top + 1):
            if table.simple_2_column[n] != g1[n]:
                return f"n={n}: simple-2-column {table.simple_2_column[n]} vs {g1[n]}"
            if table.column_convex[n] != g0[n]:
                return f"n={n}: column-convex {table.column_convex[n]} vs {g0[n]}"
            if n <= len(ALL_POLYHEX_COUNTS) and table.total[n] != ALL_POLYHEX_COUNTS[n - 1]:
                return f"n={n}: all polyhexes {table.total[n]} vs {ALL_POLYHEX_COUNTS[n - 1]}"
        return None

    def blocks():
        st = iterated(None, cfg.block_order) if cfg.block_order == ns else \
            temperley.solve_fixed_point(cfg.block_order, None)
        temperley.verify_block_identities(st, None)
        return None

    check("assemble_den", den_check)
    check("assemble_num", num_check)
    check("integrality", integrality)
    check(f"closed=iter (symbolic w, order {ns})", path(None, ns, "closed", "iter"))
    check(f"closed=linear (symbolic w, order {ns})", path(None, ns, "closed", "linear"))
    check(f"iter=linear (symbolic w, order {ns})", path(None, ns, "iter", "linear"))
    check(f"closed=iter (w=1, order {nn})", path(1, nn, "closed", "iter"))
    check(f"closed=linear (w=1, order {nn})", path(1, nn, "closed", "linear"))
    check(f"klarner (w=0, order {cfg.klarner_order})", klarner_identity)
    check(f"oracle w-refined (n<={cfg.oracle_max})", oracle_refined)
    check(f"oracle totals (n<={cfg.oracle_totals_max or cfg.oracle_max})", oracle_totals)
    check(f"block identities (order {cfg.block_order})", blocks)
    return report
