"""Command-line front end: ``polygon-odds <command> ...``.

Exit status is 0 on success, 1 on a domain error (not polygonal, budget
exceeded, bad parameters) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import closed_form, oracle
from .errors import NotPolygonal, PolygonOddsError
from .montecarlo import SimConfig, simulate_brick_lambda, simulate_stick_lambda
from .oracle import Partition
from .polygon import construct_polygon

EXACT_FAMILIES = ("broken-stick", "broken-brick", "pickup-bricks", "pickup-sticks")
ORACLE_FAMILIES = ("broken-brick", "pickup-bricks", "stick-lambda")
TABLE_FAMILIES = EXACT_FAMILIES + ("stick-lambda",)


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    params: dict
    result: Any
    elapsed_ms: Optional[float] = None
    columns: Optional[list] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "elapsed_ms": self.elapsed_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(data["command"], data["params"], data["result"], data["elapsed_ms"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def rows(self) -> list[dict]:
        if isinstance(self.result, list):
            return self.result
        return [_flatten(self.result)]

    def to_csv(self) -> str:
        rows = self.rows()
        columns = self.columns or (list(rows[0]) if rows else [])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: "" if row.get(key) is None else row.get(key) for key in columns})
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.command}  " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        for row in self.rows():
            lines.append("  ".join(f"{k}={v}" for k, v in row.items()))
        return "\n".join(lines) + "\n"


def _flatten(result: dict) -> dict:
    flat = {}
    for key, value in result.items():
        flat[key] = json.dumps(value) if isinstance(value, (list, dict)) else value
    return flat


def decimal(x: Fraction) -> float:
    return float(f"{float(x):.12g}")


def rational(x: Fraction) -> dict:
    return {"value": f"{x.numerator}/{x.denominator}", "decimal": decimal(x)}


def parse_int_list(text: str) -> list[int]:
    """``"3,4,5"``, ``"3..6"`` or a mix such as ``"3..5,10"``."""
    out = []
    try:
        for chunk in text.split(","):
            chunk = chunk.strip()
            if ".." in chunk:
                lo, hi = chunk.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif chunk:
                out.append(int(float(chunk)) if "e" in chunk.lower() else int(chunk))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list: {text!r}")
    return out


def parse_lengths(text: str) -> list:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        try:
            out.append(int(chunk))
        except ValueError:
            try:
                out.append(float(chunk) if "/" not in chunk else Fraction(chunk))
            except ValueError:
                raise argparse.ArgumentTypeError(f"not a length: {chunk!r}") from None
    return out


def parse_lambda(text: str) -> Partition:
    parts = parse_int_list(text)
    if any(a < b for a, b in zip(parts, parts[1:])):
        print(f"warning: --lambda {text} is not weakly decreasing; sorting it", file=sys.stderr)
    return Partition.from_parts(parts)


def _single(values: Optional[list[int]], name: str) -> int:
    if values is None:
        raise UsageError(f"--{name} is required")
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return values[0]


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for {args.command}")
    return value


def cmd_exact(args) -> RunReport:
    fam = args.family
    k = _single(args.k, "k")
    params: dict = {"family": fam, "k": k}
    if fam == "broken-stick":
        value = closed_form.broken_stick_prob(k)
    elif fam == "pickup-sticks":
        value = closed_form.pickup_sticks_prob(k)
    else:
        n = _single(args.n, "n")
        params["n"] = n
        fn = closed_form.broken_brick_prob if fam == "broken-brick" else closed_form.pickup_bricks_prob
        value = fn(n, k)
    return RunReport(f"exact {fam}", params, rational(value))


def cmd_oracle(args) -> RunReport:
    fam = args.family
    params: dict = {"family": fam, "n": _single(args.n, "n")}
    if args.budget is not None:
        params["budget"] = args.budget
    if fam == "stick-lambda":
        lam = _need(args, "lam")
        params["lambda"] = list(lam.parts)
        count = oracle.stick_lambda_brick_oracle(params["n"], lam, args.budget)
    else:
        params["k"] = _single(args.k, "k")
        fn = oracle.broken_brick_oracle if fam == "broken-brick" else oracle.pickup_bricks_oracle
        count = fn(params["n"], params["k"], args.budget)
    result = count.to_dict()
    result["decimal"] = decimal(count.probability)
    return RunReport(f"oracle {fam}", params, result)


def cmd_simulate(args) -> RunReport:
    lam = _need(args, "lam")
    cfg = SimConfig(lam, args.trials, args.seed, args.shards, args.confidence)
    params: dict = {
        "lambda": list(lam.parts),
        "trials": args.trials,
        "seed": args.seed,
        "shards": args.shards,
        "confidence": args.confidence,
    }
    trace = sys.stderr if args.trace else None
    if args.n is not None:
        n = _single(args.n, "n")
        params["n"] = n
        est = simulate_brick_lambda(n, cfg, workers=args.workers, trace=trace, debug=args.debug)
    else:
        est = simulate_stick_lambda(cfg, workers=args.workers, trace=trace, debug=args.debug)
    return RunReport("simulate", params, est.to_dict())


def cmd_construct(args) -> RunReport:
    sides = _need(args, "sides")
    params = {"sides": [str(s) if isinstance(s, Fraction) else s for s in sides]}
    poly = construct_polygon(sides)
    return RunReport("construct", params, poly.to_dict())


def cmd_table(args) -> RunReport:
    fam = args.family
    rows = []
    params: dict = {"family": fam}
    if fam == "stick-lambda":
        lam = _need(args, "lam")
        ns = _need(args, "n")
        params.update({"lambda": list(lam.parts), "n": ns})
        for n in sorted(ns):
            value = oracle.stick_lambda_brick_oracle(n, lam, args.budget).probability
            rows.append({"family": fam, "n": n, "k": lam.k, "lambda": str(lam), **rational(value)})
    else:
        ks = _need(args, "k")
        params["k"] = ks
        if fam in ("broken-stick", "pickup-sticks"):
            fn = closed_form.broken_stick_prob if fam == "broken-stick" else closed_form.pickup_sticks_prob
            for k in sorted(ks):
                rows.append({"family": fam, "n": None, "k": k, "lambda": None, **rational(fn(k))})
        else:
            ns = _need(args, "n")
            params["n"] = ns
            fn = closed_form.broken_brick_prob if fam == "broken-brick" else closed_form.pickup_bricks_prob
            for k in sorted(ks):
                for n in sorted(ns):
                    if fam == "broken-brick" and n < k:
                        continue
                    rows.append({"family": fam, "n": n, "k": k, "lambda": None, **rational(fn(n, k))})
    report = RunReport("table", params, rows)
    report.columns = ["family", "n", "k", "lambda", "value", "decimal"]
    return report


def cmd_convergence(args) -> RunReport:
    fam = args.family
    k = _single(args.k, "k")
    ns = sorted(_need(args, "n"))
    rows = []
    for n in ns:
        discrete, limit = closed_form.discrete_and_limit(n, k, fam)
        rows.append(
            {
                "n": n,
                "discrete": f"{discrete.numerator}/{discrete.denominator}",
                "discrete_decimal": decimal(discrete),
                "limit": f"{limit.numerator}/{limit.denominator}",
                "gap": float(abs(discrete - limit)),
            }
        )
    report = RunReport("convergence", {"family": fam, "k": k, "n": ns}, rows)
    report.columns = ["n", "discrete", "discrete_decimal", "limit", "gap"]
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=parse_int_list, help="integer, list (3,5) or range (3..9)")
    common.add_argument("--k", type=parse_int_list, help="integer, list or range")
    common.add_argument("--lambda", dest="lam", type=parse_lambda, help="partition, e.g. 3,1")
    common.add_argument("--budget", type=int, help="maximum outcomes to enumerate")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="report elapsed_ms as null")

    parser = argparse.ArgumentParser(prog="polygon-odds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", parents=[common], help="closed-form probability")
    p.add_argument("family", choices=EXACT_FAMILIES)
    p.set_defaults(handler=cmd_exact)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive enumeration")
    p.add_argument("family", choices=ORACLE_FAMILIES)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of Stick(lambda)")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--workers", type=int, help="threads used to run shards (does not change results)")
    p.add_argument("--trace", action="store_true", help="print failed trials to stderr")
    p.add_argument("--debug", action="store_true", help="cross-check every trial")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("construct", parents=[common], help="convex polygon with given sides")
    p.add_argument("--sides", type=parse_lengths, required=True)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("table", parents=[common], help="grid of exact values")
    p.add_argument("--family", choices=TABLE_FAMILIES, required=True)
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("convergence", parents=[common], help="gap between discrete and continuous")
    p.add_argument("--family", choices=closed_form.FAMILIES, required=True)
    p.set_defaults(handler=cmd_convergence)
    return parser


def render(report: RunReport, fmt: str) -> str:
    if fmt == "csv":
        return report.to_csv()
    if fmt == "text":
        return report.to_text()
    return report.to_json()


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        report = args.handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polygon-odds: error: {exc}", file=sys.stderr)
        return 2
    except NotPolygonal as exc:
        print(f"polygon-odds: {exc} (violator index {exc.index})", file=sys.stderr)
        return 1
    except PolygonOddsError as exc:
        print(f"polygon-odds: {exc}", file=sys.stderr)
        return 1
    if not args.no_timing:
        report.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)

    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
