"""Command line front end: ``polyhex-gf {coeffs,verify,asymptotics,oracle,klarner}``.

Exit status: 0 on success, 1 when a verification or computation fails, 2 on
usage errors. JSON output always carries ``schema_version``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from . import asymptotics as asy
from . import closed_form as cf
from . import oracle, temperley
from .errors import LimitExceeded, NoSignChange, PolyhexGFError
from .series import QSeries
from .verify import VerifyConfig, run_verify

SCHEMA_VERSION = 1
DEFAULT_SYMBOLIC_CAP = 60
METHODS = ("closed", "temperley-iter", "temperley-linear")
MODELS = {
    "s2c": {"bracket": ("0.2", "0.26"), "mu": asy.REFERENCE_MU},
    "klarner": {"bracket": ("0.2", "0.3"), "mu": None},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    order: int | None = None
    w_mode: str = "1"  # "symbolic" or a rational
    method: str = "closed"
    oracle_max: int | None = None
    precision: int = asy.DEFAULT_PREC
    fmt: str = "text"
    output: str | None = None
    symbolic_cap: int = DEFAULT_SYMBOLIC_CAP

    def w_value(self) -> Fraction | None:
        if self.w_mode == "symbolic":
            if self.order is not None and self.order > self.symbolic_cap:
                raise UsageError(
                    f"symbolic w is limited to order <= {self.symbolic_cap} "
                    f"(got {self.order}); pass a numeric --w or raise --symbolic-cap"
                )
            return None
        try:
            return Fraction(self.w_mode)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--w must be 'symbolic' or a rational number, got {self.w_mode!r}")


def _envelope(command: str, **payload: Any) -> str:
    body = {"schema_version": SCHEMA_VERSION, "command": command, **payload}
    return json.dumps(body, sort_keys=True) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def compute_series(order: int, w: Fraction | None, method: str) -> QSeries:
    if method == "closed":
        return cf.g_closed(order, w)
    if method in ("temperley-iter", "temperley-linear"):
        return temperley.g_temperley(order, w, method)
    raise UsageError(f"unknown method {method!r}")


def _series_text(s: QSeries) -> str:
    lines = [f"{n}\t{s.coeff(n)}" for n in range(s.order + 1)]
    return "\n".join(lines) + "\n"


def _series_csv(s: QSeries) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(("n", "m", "coeff"))
    for n in range(s.order + 1):
        for m, c in enumerate(s.coeff(n).coeffs):
            if c:
                wr.writerow((n, m, str(c)))
    return buf.getvalue()


def _render_series(cfg: RunConfig, s: QSeries, command: str, **meta: Any) -> str:
    if cfg.fmt == "json":
        return _envelope(command, series=s.to_json_obj(), **meta)
    if cfg.fmt == "csv":
        return _series_csv(s)
    return _series_text(s)


def cmd_coeffs(cfg: RunConfig) -> int:
    w = cfg.w_value()
    s = compute_series(cfg.order, w, cfg.method)
    _emit(_render_series(cfg, s, "coeffs", order=cfg.order, w=cfg.w_mode, method=cfg.method),
          cfg.output)
    return 0


def cmd_klarner(cfg: RunConfig) -> int:
    s = cf.klarner(cfg.order)
    _emit(_render_series(cfg, s, "klarner", order=cfg.order), cfg.output)
    return 0


def cmd_oracle(cfg: RunConfig, limit: int) -> int:
    table = oracle.count_series(cfg.oracle_max, limit=limit)
    if cfg.fmt == "json":
        text = _envelope("oracle", table=table.to_json_obj())
    elif cfg.fmt == "csv":
        text = table.to_csv()
    else:
        lines = [f"{'n':>3} {'total':>10} {'col-convex':>10} {'s2c':>10}  by two-component columns"]
        for n in range(1, table.n_max + 1):
            refined = " ".join(f"{m}:{c}" for m, c in sorted(table.refined[n].items()))
            lines.append(f"{n:>3} {table.total[n]:>10} {table.column_convex[n]:>10} "
                         f"{table.simple_2_column[n]:>10}  {refined}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.output)
    return 0


def _load_coeffs(path: str) -> list[int]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    series = QSeries.from_json_obj(obj.get("series", obj))
    if series.w_degree > 0:
        raise UsageError("asymptotics needs a series with w specialised")
    return series.int_coeffs()


def cmd_asymptotics(cfg: RunConfig, model: str, mu: str | None, bracket: Sequence[str] | None,
                    extrapolate: bool, input_path: str | None) -> int:
    defaults = MODELS[model]
    if input_path:
        coeffs, den = _load_coeffs(input_path), None
    elif model == "klarner":
        coeffs = cf.klarner(cfg.order).int_coeffs()
        den = QSeries.polynomial(cfg.order, cf.KLARNER_DEN)
    else:
        num, den = cf.num_den(cfg.order, 1)
        g = num * den.reciprocal()
        cf.check_integral(g)
        coeffs = g.int_coeffs()
    if len(coeffs) < 3:
        raise UsageError("need at least order 2 for ratio analysis")
    use_mu = mu if mu is not None else defaults["mu"]
    br = tuple(bracket) if bracket else defaults["bracket"]
    report = asy.build_report(model, coeffs, den, br if den is not None else None,
                              mu=use_mu, prec=cfg.precision, extrapolate=extrapolate)
    if cfg.fmt == "json":
        text = _envelope("asymptotics", report=report.to_json_obj())
    else:
        text = _report_text(report)
    _emit(text, cfg.output)
    return 0


def _stab_line(label: str, st: asy.Stabilized) -> str:
    if st.value is None:
        return f"{label}: NoStabilization"
    flag = "" if st.stabilized else "  [NoStabilization: window too short]"
    return f"{label}: {st.value} on n in [{st.n_lo}, {st.n_hi}]{flag}"


def _report_text(r: asy.AsymptoticsReport) -> str:
    out = [
        f"model: {r.model}    order: {r.order}    precision: {r.precision_bits} bits",
        _stab_line("ratio a_n/a_(n-1), 12 decimals", r.stabilized_ratio),
        f"growth estimate (last ratio): {r.growth_estimate}",
    ]
    if r.extrapolated_growth:
        out.append(f"extrapolated growth (linear in 1/n, optional): {r.extrapolated_growth}")
    out.append(_stab_line(f"amplitude a_n/mu^n with mu={r.amplitude_mu}", r.amplitude))
    if r.pole_q:
        out.append(f"dominant pole: {r.pole_q} +- {r.pole_error_bound}")
        out.append(f"1/pole: {r.pole_growth}")
    out.append(f"certified lower bound: mu > {r.lower_bound} (from n={r.lower_bound_n})")
    out.extend(f"note: {n}" for n in r.notes)
    out.append("")
    out.append(f"{'n':>4}  {'a_n/a_(n-1)':<24} {'a_n/mu^n':<24}")
    for n in sorted(set(r.ratio_table) | set(r.amplitude_table)):
        out.append(f"{n:>4}  {r.ratio_table.get(n, ''):<24} {r.amplitude_table.get(n, ''):<24}")
    return "\n".join(out) + "\n"


def cmd_verify(cfg: RunConfig, vcfg: VerifyConfig) -> int:
    if vcfg.symbolic_order > cfg.symbolic_cap:
        raise UsageError(f"--symbolic-order exceeds the symbolic cap {cfg.symbolic_cap}")

    def progress(res) -> None:
        status = "PASS" if res.passed else "FAIL"
        line = f"{status}  {res.name}  ({res.seconds:.2f}s)"
        if res.detail:
            line += f"\n      {res.detail}"
        print(line, file=sys.stderr if cfg.fmt == "json" and not cfg.output else sys.stdout)

    report = run_verify(vcfg, progress)
    first = report.first_failure
    if cfg.fmt == "json" or cfg.output:
        checks = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks]
        _emit(_envelope("verify", passed=report.passed, checks=checks, config=asdict(vcfg),
                        first_failure=first.name if first else None), cfg.output)
    if first is None:
        print("PASS", file=sys.stderr if cfg.fmt == "json" and not cfg.output else sys.stdout)
        return 0
    print(f"FAIL: {first.name}", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polyhex-gf",
        description="Area generating function of simple-2-column polyominoes with hexagonal cells.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("--format", dest="fmt", choices=formats, default="text")
        sp.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    sp = sub.add_parser("coeffs", help="coefficients of G(q, w)")
    sp.add_argument("--order", type=int, default=12)
    sp.add_argument("--w", default="1", help="'symbolic' or a rational value for w")
    sp.add_argument("--method", choices=METHODS, default="closed")
    sp.add_argument("--symbolic-cap", type=int, default=DEFAULT_SYMBOLIC_CAP)
    common(sp)

    sp = sub.add_parser("klarner", help="column-convex polygons, q(1-q)^3/(1-6q+10q^2-7q^3+q^4)")
    sp.add_argument("--order", type=int, default=12)
    common(sp)

    sp = sub.add_parser("oracle", help="brute-force polyhex counts")
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT)
    common(sp)

    sp = sub.add_parser("asymptotics", help="ratios, amplitude, pole and lower bound")
    sp.add_argument("--order", type=int, default=320)
    sp.add_argument("--model", choices=sorted(MODELS), default="s2c")
    sp.add_argument("--precision", type=int, default=asy.DEFAULT_PREC, help="bits")
    sp.add_argument("--mu", default=None, help="growth constant for the amplitude")
    sp.add_argument("--bracket", nargs=2, default=None, metavar=("LO", "HI"))
    sp.add_argument("--extrapolate", action="store_true",
                    help="also print a linear-in-1/n extrapolation of the ratios")
    sp.add_argument("--input", default=None, help="series JSON from 'coeffs --format json'")
    common(sp, ("text", "json"))

    sp = sub.add_parser("verify", help="cross-check all routes against each other and the oracle")
    sp.add_argument("--symbolic-order", type=int, default=60)
    sp.add_argument("--numeric-order", type=int, default=120)
    sp.add_argument("--klarner-order", type=int, default=320)
    sp.add_argument("--block-order", type=int, default=40)
    sp.add_argument("--oracle-max", type=int, default=10)
    sp.add_argument("--oracle-totals-max", type=int, default=None)
    sp.add_argument("--symbolic-cap", type=int, default=DEFAULT_SYMBOLIC_CAP)
    sp.add_argument("--inject-fault", choices=("num-term",), default=None,
                    help="test hook: flip the sign of one NUM term")
    common(sp, ("text", "json"))
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(command=args.command, fmt=args.fmt, output=args.output)
    if hasattr(args, "order"):
        cfg.order = args.order
        if cfg.order < 1:
            parser.error("--order must be >= 1")
    if hasattr(args, "symbolic_cap"):
        cfg.symbolic_cap = args.symbolic_cap
    try:
        if args.command == "coeffs":
            cfg.w_mode, cfg.method = args.w, args.method
            return cmd_coeffs(cfg)
        if args.command == "klarner":
            return cmd_klarner(cfg)
        if args.command == "oracle":
            cfg.oracle_max = args.n_max
            return cmd_oracle(cfg, args.limit)
        if args.command == "asymptotics":
            cfg.precision = args.precision
            return cmd_asymptotics(cfg, args.model, args.mu, args.bracket, args.extrapolate,
                                   args.input)
        if args.command == "verify":
            vcfg = VerifyConfig(
                symbolic_order=args.symbolic_order,
                numeric_order=args.numeric_order,
                klarner_order=args.klarner_order,
                block_order=args.block_order,
                oracle_max=args.oracle_max,
                oracle_totals_max=args.oracle_totals_max,
                inject_fault=args.inject_fault,
            )
            return cmd_verify(cfg, vcfg)
    except (UsageError, LimitExceeded, NoSignChange) as exc:
        print(f"polyhex-gf: error: {exc}", file=sys.stderr)
        return 2
    except PolyhexGFError as exc:
        print(f"polyhex-gf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
