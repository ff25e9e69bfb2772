"""CSV and JSON serialization of sweep reports.

Floats are written with 17 significant digits in CSV and with ``repr`` in
JSON; both parse back to the same double. Exact integers carry no decimal
point, and integral floats keep a trailing ``.0``.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .harness import ErrorRecord, FitResult, SweepReport

CSV_HEADER = ["p", "statistic", "observed", "main_term", "normalizer", "ratio", "exact_flag", "runtime_ms"]


def format_number(x: int | float | None) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    text = "%.17g" % x
    # keep floats distinguishable from exact integers
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def parse_number(s: str) -> int | float | None:
    if s == "":
        return None
    try:
        return int(s)
    except ValueError:
        return float(s)


def report_to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.records:
        writer.writerow(
            [
                r.p,
                r.statistic,
                format_number(r.observed),
                format_number(r.main_term),
                format_number(r.normalizer),
                format_number(r.ratio),
                format_number(r.exact),
                format_number(r.runtime_ms),
            ]
        )
    return buf.getvalue()


def record_to_dict(r: ErrorRecord) -> dict[str, Any]:
    return {
        "p": r.p,
        "statistic": r.statistic,
        "observed": r.observed,
        "main_term": r.main_term,
        "normalizer": r.normalizer,
        "ratio": r.ratio,
        "exact_flag": r.exact,
        "runtime_ms": r.runtime_ms,
        "extras": r.extras,
    }


def fit_to_dict(fit: FitResult | None) -> dict[str, Any] | None:
    if fit is None:
        return None
    return {
        "exponent": fit.exponent,
        "log_constant": fit.log_constant,
        "residual": fit.residual,
        "n_used": fit.n_used,
        "n_excluded": fit.n_excluded,
    }


def report_to_json(report: SweepReport) -> str:
    doc = {
        "records": [record_to_dict(r) for r in report.records],
        "fit": fit_to_dict(report.fit),
        "config_echo": report.config_echo,
        "refusals": report.refusals,
    }
    return json.dumps(doc, indent=2) + "\n"


def serialize(report: SweepReport, fmt: str) -> str:
    if fmt == "csv":
        return report_to_csv(report)
    if fmt == "json":
        return report_to_json(report)
    raise ValueError(f"unknown format {fmt!r}")


def records_from_csv(text: str) -> list[ErrorRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("CSV header does not match the report schema")
    out = []
    for row in rows[1:]:
        p, stat, obs, main, norm, ratio, exact, runtime = row
        out.append(
            ErrorRecord(
                p=int(p),
                statistic=stat,
                observed=parse_number(obs),
                main_term=parse_number(main),
                normalizer=float(norm),
                ratio=float(ratio),
                exact=exact == "1",
                runtime_ms=parse_number(runtime),
            )
        )
    return out


def records_from_json(text: str) -> list[ErrorRecord]:
    doc = json.loads(text)
    return [
        ErrorRecord(
            p=d["p"],
            statistic=d["statistic"],
            observed=d["observed"],
            main_term=d["main_term"],
            normalizer=d["normalizer"],
            ratio=d["ratio"],
            exact=bool(d["exact_flag"]),
            runtime_ms=d.get("runtime_ms"),
            extras=d.get("extras", {}),
        )
        for d in doc["records"]
    ]
