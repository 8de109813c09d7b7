"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 I/O, 3 parse, 4 undefined analysis.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from typing import Any

from . import __version__
from .census import TriangleType, closures, cyclic_breakdown, recip_group_closure
from .errors import IngestionError, TriadicError, UndefinedValueError
from .io import SCHEMA_VERSION, ChartData, dumps, read_digraph, report_to_csv, report_to_dict
from .null import deviation_report, randomized_report
from .sampling import full_estimated_census

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PARSE, EXIT_UNDEFINED = 0, 1, 2, 3, 4

log = logging.getLogger("triadic")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _probability(s: str) -> float:
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="triadic", description="Directed triangle census with reciprocal edges.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, csv=True):
        sp.add_argument("--input", "-i", required=True, help="SNAP edge-list file")
        sp.add_argument("--output", "-o", help="JSON output path (default: stdout)")
        if csv:
            sp.add_argument("--csv", help="also write CSV to this path")
        sp.add_argument("--threads", type=_positive_int, help="worker threads (default: $TRIADIC_THREADS or all cores)")
        sp.add_argument("-v", "--verbose", action="store_true")

    def sampling(sp, required=False):
        sp.add_argument("--samples", "-k", type=_positive_int, required=required, default=None if required else 20000)
        sp.add_argument("--delta", type=_probability, default=0.001)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("census", help="exact census report")
    common(sp)

    sp = sub.add_parser("estimate", help="wedge-sampling census report")
    common(sp)
    sampling(sp, required=True)

    sp = sub.add_parser("chart", help="closure chart data")
    common(sp)
    sp.add_argument("--estimated", action="store_true", help="use wedge sampling instead of enumeration")
    sampling(sp)

    sp = sub.add_parser("null", help="deviation from the random-direction null model")
    common(sp, csv=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeats", type=_positive_int, default=1)
    sp.add_argument("--chart-csv", help="write the randomized closure chart as CSV")

    sp = sub.add_parser("groups", help="closure by number of reciprocal edges, cyclic breakdown")
    common(sp, csv=False)

    sp = sub.add_parser("bench", help="time wedge sampling against enumeration")
    common(sp, csv=False)
    sampling(sp, required=True)
    return p


def _threads(args) -> int:
    if args.threads:
        return args.threads
    env = os.environ.get("TRIADIC_THREADS")
    if env:
        try:
            return _positive_int(env)
        except (ValueError, argparse.ArgumentTypeError):
            raise _UsageError(f"invalid TRIADIC_THREADS={env!r}") from None
    return os.cpu_count() or 1


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _estimate(G, args, threads):
    return full_estimated_census(G, args.samples, delta=args.delta, seed=args.seed, threads=threads)


def _cmd_census(G, args, threads) -> dict[str, Any]:
    rep = closures(G, threads=threads)
    if args.csv:
        _write(args.csv, report_to_csv(rep))
    return report_to_dict(rep)


def _cmd_estimate(G, args, threads) -> dict[str, Any]:
    rep = _estimate(G, args, threads)
    if args.csv:
        _write(args.csv, report_to_csv(rep))
    return report_to_dict(rep)


def _cmd_chart(G, args, threads) -> dict[str, Any]:
    rep = _estimate(G, args, threads) if args.estimated else closures(G, threads=threads)
    chart = ChartData.from_report(rep)
    if args.csv:
        _write(args.csv, chart.to_csv())
    doc = chart.to_dict()
    doc["source"] = "estimated" if args.estimated else "exact"
    return doc


def _cmd_null(G, args, threads) -> dict[str, Any]:
    observed = closures(G, threads=threads)
    dev = deviation_report(observed)
    randomized = randomized_report(G, seed=args.seed, repeats=args.repeats, threads=threads)
    chart = ChartData.from_report(randomized)
    if args.chart_csv:
        _write(args.chart_csv, chart.to_csv())
    ratios = dev.ratios
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "null_model",
        "reciprocity": dev.reciprocity,
        "total_triangles": dev.total_triangles,
        "seed": args.seed,
        "repeats": args.repeats,
        "triangle_types": {
            tau.label: {
                "observed": dev.observed[tau],
                "predicted": dev.predicted[tau],
                "ratio": ratios[tau],
            }
            for tau in TriangleType
        },
        "observed_chart": ChartData.from_report(observed).to_dict(),
        "randomized_chart": chart.to_dict(),
    }


def _cmd_groups(G, args, threads) -> dict[str, Any]:
    rep = closures(G, threads=threads)
    undefined = []
    groups: dict[str, float | None] = {}
    for k in (0, 1, 2):
        try:
            groups[str(k)] = recip_group_closure(rep, k)
        except UndefinedValueError:
            groups[str(k)] = None
            undefined.append(f"recip_group_closure.{k}")
    try:
        cyc = {tau.label: v for tau, v in cyclic_breakdown(rep).items()}
    except UndefinedValueError:
        cyc = None
        undefined.append("cyclic_breakdown")
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "groups",
        "recip_group_closure": groups,
        "cyclic_breakdown": cyc,
        "undefined": undefined,
    }


def _cmd_bench(G, args, threads) -> dict[str, Any]:
    t0 = time.perf_counter()
    est = _estimate(G, args, threads)
    t1 = time.perf_counter()
    exact = closures(G, threads=threads)
    t2 = time.perf_counter()
    bounds = est.estimation["triangle_error_bounds"]
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "bench",
        "exact": report_to_dict(exact),
        "estimated": report_to_dict(est),
        "within_bounds": {
            tau.label: abs(est.triangle_counts[tau] - exact.triangle_counts[tau]) <= bounds[tau.label]
            for tau in TriangleType
        },
        "timing": {
            "estimate_seconds": t1 - t0,
            "census_seconds": t2 - t1,
            "speedup": (t2 - t1) / (t1 - t0) if t1 > t0 else None,
        },
    }


_COMMANDS = {
    "census": _cmd_census,
    "estimate": _cmd_estimate,
    "chart": _cmd_chart,
    "null": _cmd_null,
    "groups": _cmd_groups,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        threads = _threads(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")

    try:
        G = read_digraph(args.input)
        log.info("read %s: n=%d m_basic=%d m_rec=%d", args.input, G.n, G.m_basic, G.m_rec)
        doc = _COMMANDS[args.command](G, args, threads)
        _write(args.output, dumps(doc))
    except OSError as exc:
        print(f"triadic: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IngestionError as exc:
        print(f"triadic: parse error in {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UndefinedValueError as exc:
        print(f"triadic: undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (TriadicError, ValueError) as exc:
        print(f"triadic: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
