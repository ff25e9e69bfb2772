"""Command-line entry point: ``invsum {verify-identities,compute,sweep,fit}``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 budget refusal, 4 IO error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import _kernels, expsums, harness, identities, inverse_sums, report_io
from .harness import STATISTICS, SweepReport
from .inverse_sums import DEFAULT_BUDGET, CostCapExceeded
from .modular import build_context, is_prime

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3
EXIT_IO = 4

QUANTITIES = ("S", "Sk", "D", "T", "M", "kloosterman")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    prime_range: tuple[int, int] = (3, 97)
    statistics: list[str] = field(default_factory=list)
    d: int | None = None
    k: int | None = None
    l: int | None = None
    a: int | None = None
    b: int | None = None
    quantity: str | None = None
    route: str | None = None
    budget: int = DEFAULT_BUDGET
    output_format: str = "csv"
    output_path: str | None = None
    input_path: str | None = None
    threads: int | None = None
    seed: int = 0
    tol: float = identities.DEFAULT_REL_TOL
    fit: bool = False
    timing: bool = False
    full_l_max_p: int = 300
    samples: int = 64

    def validate(self) -> None:
        lo, hi = self.prime_range
        if lo > hi:
            raise UsageError(f"range {lo}:{hi} has lo > hi")
        if lo < 2:
            raise UsageError("range must start at 2 or above")
        if self.budget <= 0:
            raise UsageError("budget must be positive")
        for s in self.statistics:
            try:
                harness.parse_statistic(s)
            except ValueError as exc:
                raise UsageError(str(exc)) from None

    def echo(self) -> dict:
        out = asdict(self)
        out["prime_range"] = list(self.prime_range)
        out.pop("timing")
        return out


def _parse_range(text: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        p = int(text)
        return p, p
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI or P, got {text!r}") from None


def _parse_threads(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _default_budget() -> int:
    env = os.environ.get("INVSUM_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        return int(float(env))
    except ValueError:
        raise UsageError(f"INVSUM_BUDGET must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--range", dest="prime_range", type=_parse_range, default=(3, 97), metavar="LO:HI")
    common.add_argument("--stat", default="", metavar="NAME[,NAME...]",
                        help=f"statistics: {', '.join(STATISTICS)}; thm4_max_err(K) selects K")
    common.add_argument("--d", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--l", type=int)
    common.add_argument("--budget", type=lambda s: int(float(s)), metavar="N")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", dest="output_path", metavar="PATH")
    common.add_argument("--threads", type=_parse_threads, default=None, metavar="N|auto")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="invsum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"invsum 0.1.0 ({_kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-identities", parents=[common], help="run every identity suite over a prime range")
    v.add_argument("--tol", type=float, default=identities.DEFAULT_REL_TOL, help="relative tolerance")

    c = sub.add_parser("compute", parents=[common], help="evaluate one quantity at one prime")
    c.add_argument("quantity", choices=QUANTITIES)
    c.add_argument("--a", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--route")

    s = sub.add_parser("sweep", parents=[common], help="measure statistics over a prime range")
    s.add_argument("--fit", action="store_true", help="fit log(observed) against log(p)")
    s.add_argument("--timing", action="store_true", help="fill runtime_ms (output no longer reproducible)")
    s.add_argument("--full-l-max-p", type=int, default=300)
    s.add_argument("--samples", type=int, default=64)

    f = sub.add_parser("fit", parents=[common], help="fit an exponent from a sweep or a saved report")
    f.add_argument("--in", dest="input_path", metavar="PATH", help="CSV or JSON report to fit")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    budget = ns.budget if ns.budget is not None else _default_budget()
    cfg = RunConfig(
        command=ns.command,
        prime_range=ns.prime_range,
        statistics=[s for s in ns.stat.split(",") if s],
        d=ns.d,
        k=ns.k,
        l=ns.l,
        budget=budget,
        output_format=ns.output_format,
        output_path=ns.output_path,
        threads=ns.threads,
        seed=ns.seed,
    )
    for name in ("quantity", "route", "a", "b", "tol", "fit", "timing", "input_path", "full_l_max_p", "samples"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    cfg.validate()
    return cfg


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)


# ---- commands ----------------------------------------------------------


def cmd_verify_identities(cfg: RunConfig) -> int:
    lo, hi = cfg.prime_range
    results = identities.verify_range(lo, hi, rel=cfg.tol)
    if not results:
        raise UsageError(f"no odd primes in [{lo}, {hi}]")
    summary = identities.summarize(results)
    for r in results:
        if not r.ok:
            params = " ".join(f"{k}={v}" for k, v in r.params.items())
            print(f"FAIL identity={r.identity} p={r.p} {params} deviation={r.max_dev:.6e} tol={r.tol:.6e}",
                  file=sys.stderr)
    if cfg.output_format == "json":
        text = json.dumps({"identities": summary, "config_echo": cfg.echo()}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity", "max_dev", "tol", "worst_p", "worst_params", "breaches", "ok"])
        for row in summary:
            params = ";".join(f"{k}={v}" for k, v in row["worst_params"].items())
            w.writerow([row["identity"], "%.17g" % row["max_dev"], "%.17g" % row["tol"], row["worst_p"],
                        params, row["breaches"], int(row["ok"])])
        text = buf.getvalue()
    _emit(text, cfg.output_path)
    return EXIT_OK if all(row["ok"] for row in summary) else EXIT_VERIFY


def _single_prime(cfg: RunConfig) -> int:
    lo, hi = cfg.prime_range
    if lo != hi:
        raise UsageError("compute takes a single prime: --range P")
    if lo < 3 or not is_prime(lo):
        raise UsageError(f"{lo} is not an odd prime")
    return lo


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"compute {cfg.quantity} needs " + ", ".join(f"--{n}" for n in missing))


def compute_values(cfg: RunConfig) -> list[dict]:
    """Rows of {quantity, route, value, exact} for ``invsum compute``."""
    p = _single_prime(cfg)
    ctx = build_context(p)
    q = cfg.quantity
    rows = []

    def add(route, fn, exact):
        if cfg.route is not None and cfg.route != route:
            return
        t0 = time.perf_counter()
        value = fn()
        rows.append({"route": route, "value": value, "exact": exact,
                     "runtime_ms": (time.perf_counter() - t0) * 1e3})

    if q == "S":
        _need(cfg, "d")
        add("bruteforce", lambda: inverse_sums.s_d_bruteforce(ctx, cfg.d), True)
        add("character", lambda: inverse_sums.s_d_char_formula(ctx, cfg.d), False)
        add("exponential", lambda: inverse_sums.s_d_exp_formula(ctx, cfg.d), False)
        label = f"S(d={cfg.d})"
    elif q == "Sk":
        _need(cfg, "d", "k")
        add("bruteforce", lambda: inverse_sums.s_k_bruteforce(ctx, cfg.k, cfg.d, budget=cfg.budget), True)
        add("character", lambda: inverse_sums.s_k_char_formula(ctx, cfg.k, cfg.d), False)
        label = f"S_{cfg.k}(d={cfg.d})"
    elif q == "D":
        _need(cfg, "l")
        add("brute", lambda: expsums.double_exp_sum(ctx, cfg.l, "brute"), False)
        add("identity", lambda: expsums.double_exp_sum(ctx, cfg.l, "identity"), False)
        label = f"D(l={cfg.l})"
    elif q == "T":
        _need(cfg, "l")
        add("brute", lambda: expsums.triple_exp_sum(ctx, cfg.l, "brute"), False)
        add("formula", lambda: expsums.triple_exp_sum(ctx, cfg.l, "formula"), False)
        label = f"T(l={cfg.l})"
    elif q == "M":
        add("exact", lambda: harness.mean_square_exact(ctx), True)
        add("fourth_moment", lambda: harness.mean_square_fourth_moment(ctx), False)
        label = "M"
    elif q == "kloosterman":
        _need(cfg, "a", "b")
        add("direct", lambda: expsums.kloosterman(ctx, cfg.a, cfg.b), False)
        label = f"S(a={cfg.a},b={cfg.b};p)"
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown quantity {q!r}")
    if not rows:
        raise UsageError(f"route {cfg.route!r} is not available for {q}")
    for row in rows:
        row["quantity"] = label
        row["p"] = p
    return rows


def _format_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def cmd_compute(cfg: RunConfig) -> int:
    rows = compute_values(cfg)
    if cfg.output_format == "json":
        for row in rows:
            v = row["value"]
            row["value"] = {"re": v.real, "im": v.imag} if isinstance(v, complex) else (
                str(v) if not isinstance(v, (int, float)) else v)
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = "".join(
            f"{r['quantity']} p={r['p']} route={r['route']} exact={int(r['exact'])} "
            f"value={_format_value(r['value'])} runtime_ms={r['runtime_ms']:.3f}\n"
            for r in rows
        )
    _emit(text, cfg.output_path)
    return EXIT_OK


def _sweep(cfg: RunConfig, fit: bool) -> SweepReport:
    if not cfg.statistics:
        raise UsageError("--stat is required")
    try:
        report = harness.run_sweep(
            cfg.prime_range,
            cfg.statistics,
            budget=cfg.budget,
            threads=cfg.threads,
            k=cfg.k or 3,
            seed=cfg.seed,
            full_l_max_p=cfg.full_l_max_p,
            samples=cfg.samples,
            fit=fit,
            timing=cfg.timing,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.config_echo = cfg.echo()
    return report


def _report_refusals(report: SweepReport) -> int:
    for r in report.refusals:
        print(f"REFUSED p={r['p']} statistic={r['statistic']}: {r['reason']}", file=sys.stderr)
    return EXIT_REFUSED if report.refusals else EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    report = _sweep(cfg, cfg.fit)
    _emit(report_io.serialize(report, cfg.output_format), cfg.output_path)
    return _report_refusals(report)


def cmd_fit(cfg: RunConfig) -> int:
    status = EXIT_OK
    if cfg.input_path:
        text = Path(cfg.input_path).read_text()
        if text.lstrip().startswith("{"):
            records = report_io.records_from_json(text)
        else:
            records = report_io.records_from_csv(text)
        if cfg.statistics:
            records = [r for r in records if r.statistic in cfg.statistics]
        report = SweepReport(records=records)
    else:
        if len(cfg.statistics) != 1:
            raise UsageError("fit needs exactly one --stat")
        report = _sweep(cfg, fit=False)
        status = _report_refusals(report)
    if len({r.statistic for r in report.records}) > 1:
        raise UsageError("records mix several statistics; select one with --stat")
    try:
        fit = harness.fit_exponent(report.records)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = report_io.fit_to_dict(fit)
    if cfg.output_format == "json":
        text = json.dumps(d, indent=2) + "\n"
    else:
        text = ",".join(d) + "\n" + ",".join(report_io.format_number(v) for v in d.values()) + "\n"
    _emit(text, cfg.output_path)
    return status


COMMANDS = {
    "verify-identities": cmd_verify_identities,
    "compute": cmd_compute,
    "sweep": cmd_sweep,
    "fit": cmd_fit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"invsum: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CostCapExceeded as exc:
        print(f"invsum: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except OSError as exc:
        print(f"invsum: IO error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invsum: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
