"""Command-line interface for causal-metrics.

Subcommands:

* ``eval``       compare one predicted graph with the ground truth;
* ``eval-dir``   compare every prediction listed in a dataset manifest;
* ``gen``        write a random DAG;
* ``bench-ced``  time CED on random DAG pairs of growing size;
* ``convert``    rewrite a graph as CSV, edge list or CPDAG.

Exit codes: 0 on success, 2 when any metric is not applicable or a dataset
row failed, 1 on usage, parse or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import NoReturn

import anyio

from causal_metrics.bench import loglog_slope, median_times, run_bench, write_bench_csv
from causal_metrics.cpdag import dag_to_cpdag
from causal_metrics.dataset import load_manifest
from causal_metrics.errors import CausalMetricsError
from causal_metrics.evaluator import MetricEvaluator
from causal_metrics.generate import random_dag
from causal_metrics.io import GraphFormat, read_graph, render_graph
from causal_metrics.metrics import METRIC_NAMES, MetricSpec, parse_metric_list
from causal_metrics.schema import DatasetRow, Interval, MetricReport, MetricValue, NotApplicable
from causal_metrics.settings import Settings, settings

logger = logging.getLogger("causal_metrics.cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_APPLICABLE = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class CliParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with exit code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


#####################################################################
### Output formatting                                             ###
#####################################################################


def format_value(value: MetricValue) -> str:
    if isinstance(value, Interval | NotApplicable):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(header) for header in headers]
    for row in rows:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row, strict=True)]
    lines = []
    for line in [list(headers), ["-" * width for width in widths], *rows]:
        cells = (cell.ljust(width) for cell, width in zip(line, widths, strict=True))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buffer.getvalue()


def render_report(report: MetricReport, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    rows = [
        [name, format_value(value), f"{report.elapsed_ms.get(name, 0.0):.3f}"]
        for name, value in report.metrics.items()
    ]
    headers = ["metric", "value", "elapsed_ms"]
    return render_csv(headers, rows) if fmt == "csv" else render_table(headers, rows)


def best_rows(rows: Sequence[DatasetRow], spec: MetricSpec) -> set[str]:
    """Models holding the best scalar value of ``spec`` (ties all flagged)."""
    scores: dict[str, float] = {}
    for row in rows:
        if row.report is None:
            continue
        value = row.report.metrics.get(spec.name)
        if isinstance(value, int | float) and not isinstance(value, bool):
            scores[row.model] = float(value)
    if not scores:
        return set()
    target = min(scores.values()) if spec.better == "min" else max(scores.values())
    return {model for model, score in scores.items() if score == target}


def render_dataset(
    name: str, category: str, rows: Sequence[DatasetRow], metrics: list[MetricSpec], fmt: str
) -> str:
    if fmt == "json":
        payload = {
            "dataset": name,
            "category": category,
            "rows": [row.model_dump(mode="json", exclude_none=True) for row in rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    headers = ["model", *(spec.name for spec in metrics), "error"]
    best = {spec.name: best_rows(rows, spec) for spec in metrics} if fmt == "table" else {}
    body = []
    for row in rows:
        cells = [row.model]
        for spec in metrics:
            if row.report is None:
                cells.append("")
                continue
            cell = format_value(row.report.metrics[spec.name])
            if row.model in best.get(spec.name, set()):
                cell += " *"
            cells.append(cell)
        cells.append(row.error or "")
        body.append(cells)
    return render_csv(headers, body) if fmt == "csv" else render_table(headers, body)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")


#####################################################################
### Subcommands                                                   ###
#####################################################################


def cmd_eval(args: argparse.Namespace, config: Settings) -> int:
    metrics = parse_metric_list(args.metrics or config.default_metrics)
    report = MetricEvaluator(config).evaluate_files(args.truth, args.pred, metrics)
    _emit(render_report(report, args.format), None)
    return EXIT_NOT_APPLICABLE if report.has_na else EXIT_OK


def cmd_eval_dir(args: argparse.Namespace, config: Settings) -> int:
    metrics = parse_metric_list(args.metrics or config.default_metrics)
    manifest = load_manifest(args.dataset)
    rows = anyio.run(MetricEvaluator(config).evaluate_dataset, manifest, metrics)
    _emit(render_dataset(manifest.name, manifest.category, rows, metrics, args.format), args.out)
    failed = any(row.error is not None or (row.report and row.report.has_na) for row in rows)
    return EXIT_NOT_APPLICABLE if failed else EXIT_OK


def cmd_gen(args: argparse.Namespace, config: Settings) -> int:
    graph = random_dag(args.nodes, args.density, args.seed)
    _emit(render_graph(graph, args.format), args.out)
    sys.stderr.write(f"{graph.edge_count} edges\n")
    return EXIT_OK


def cmd_bench_ced(args: argparse.Namespace, config: Settings) -> int:
    sizes = [int(size) for size in args.sizes.split(",") if size.strip()]
    if not sizes or any(size < 2 for size in sizes):
        raise ValueError(f"--sizes must list integers >= 2, got {args.sizes!r}")
    rows = run_bench(sizes, args.density, args.seeds, first_seed=args.seed, jobs=config.jobs)
    buffer = io.StringIO()
    write_bench_csv(rows, buffer)
    _emit(buffer.getvalue(), args.out)
    for n, median in median_times(rows).items():
        sys.stderr.write(f"n={n} median_ms={median:.3f}\n")
    slope = loglog_slope(rows)
    if slope is not None:
        sys.stderr.write(f"log-log slope: {slope:.3f}\n")
    return EXIT_OK


def _suffix_format(path: Path) -> GraphFormat:
    return "csv" if path.suffix.lower() == ".csv" else "edgelist"


def cmd_convert(args: argparse.Namespace, config: Settings) -> int:
    graph = read_graph(args.input)
    fmt: GraphFormat
    if args.to == "cpdag":
        graph = dag_to_cpdag(graph)
        fmt = _suffix_format(args.out or args.input)
    else:
        fmt = args.to
    _emit(render_graph(graph, fmt), args.out)
    return EXIT_OK


#####################################################################
### Parser                                                        ###
#####################################################################


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["table", "json", "csv"], default="table")


def _add_metrics(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--metrics",
        help=f"Comma-separated metric names (default: {settings.default_metrics}); "
        f"available: {', '.join(METRIC_NAMES)}",
    )


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> CliParser:
    parser = CliParser(prog="causal-metrics", description="Compare causal graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.version}")
    parser.add_argument(
        "--log-level", choices=["debug", "info", "warning", "error", "critical"], default=None
    )
    parser.add_argument("--debug", action="store_true", help="Attach tracebacks to error logs")
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads (default: all cores)")
    parser.add_argument(
        "--mec-limit", type=int, default=None, help="Max undirected edges for SID ranges"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="Compare a prediction with the truth")
    evaluate.add_argument("--truth", type=Path, required=True)
    evaluate.add_argument("--pred", type=Path, required=True)
    _add_metrics(evaluate)
    _add_format(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    dataset = commands.add_parser("eval-dir", help="Evaluate every prediction of a dataset")
    dataset.add_argument("--dataset", type=Path, required=True)
    _add_metrics(dataset)
    _add_format(dataset)
    dataset.add_argument("--out", type=Path)
    dataset.set_defaults(handler=cmd_eval_dir)

    gen = commands.add_parser("gen", help="Write a random DAG")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--density", type=float, required=True)
    gen.add_argument("--seed", type=_non_negative, default=0)
    gen.add_argument("--out", type=Path)
    gen.add_argument("--format", choices=["csv", "edgelist"], default="csv")
    gen.set_defaults(handler=cmd_gen)

    bench = commands.add_parser("bench-ced", help="Time CED on random DAG pairs")
    bench.add_argument("--sizes", default="25,50,100,200")
    bench.add_argument("--density", type=float, default=0.1)
    bench.add_argument("--seeds", type=int, default=5)
    bench.add_argument("--seed", type=_non_negative, default=0, help="First seed")
    bench.add_argument("--out", type=Path)
    bench.set_defaults(handler=cmd_bench_ced)

    convert = commands.add_parser("convert", help="Convert a graph file")
    convert.add_argument("--in", dest="input", type=Path, required=True)
    convert.add_argument("--to", choices=["csv", "edgelist", "cpdag"], required=True)
    convert.add_argument("--out", type=Path)
    convert.set_defaults(handler=cmd_convert)

    return parser


def _settings_from(args: argparse.Namespace) -> Settings:
    overrides = {
        "log_level": args.log_level,
        "debug": args.debug or None,
        "jobs": args.jobs,
        "mec_limit": args.mec_limit,
    }
    return Settings(**{key: value for key, value in overrides.items() if value is not None})


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = _settings_from(args)
    except ValueError as exc:
        sys.stderr.write(f"causal-metrics: error: {exc}\n")
        return EXIT_ERROR

    logging.basicConfig(
        level=getattr(logging, config.log_level.upper()), format=LOG_FORMAT, stream=sys.stderr
    )
    logger.debug(f"Running {args.command} with jobs={config.jobs} mec_limit={config.mec_limit}")

    handler: Callable[[argparse.Namespace, Settings], int] = args.handler
    try:
        return handler(args, config)
    except (CausalMetricsError, OSError, ValueError) as exc:
        logger.error(f"{args.command} failed: {exc}", exc_info=config.debug)
        sys.stderr.write(f"causal-metrics: error: {exc}\n")
        return EXIT_ERROR


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
