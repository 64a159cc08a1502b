"""CED scalability benchmark.

For every size and seed two independent random DAGs are drawn and the time to
compute CED between them is recorded. The growth rate is summarised by the
least-squares slope of log median time against log n.
"""

import csv
import logging
import statistics
import time
from collections.abc import Iterable, Sequence
from typing import TextIO

import numpy as np

from causal_metrics.effect import ced
from causal_metrics.generate import random_dag
from causal_metrics.schema import BenchRow

logger = logging.getLogger("causal_metrics.bench")

BENCH_COLUMNS = ("n", "seed", "edges", "ced", "elapsed_ms")


def graph_seeds(n: int, seed: int) -> tuple[int, int]:
    """Seeds of the truth and prediction graphs for one benchmark cell."""
    rng = np.random.default_rng([n, seed])
    truth_seed, pred_seed = rng.integers(0, 2**63 - 1, size=2)
    return int(truth_seed), int(pred_seed)


def run_bench(
    sizes: Sequence[int],
    density: float = 0.1,
    seeds: int = 5,
    first_seed: int = 0,
    jobs: int | None = None,
) -> list[BenchRow]:
    rows: list[BenchRow] = []
    for n in sizes:
        for seed in range(first_seed, first_seed + seeds):
            truth_seed, pred_seed = graph_seeds(n, seed)
            truth = random_dag(n, density, truth_seed)
            pred = random_dag(n, density, pred_seed)
            started = time.perf_counter()
            value = ced(truth, pred, jobs=jobs)
            elapsed = (time.perf_counter() - started) * 1000.0
            rows.append(BenchRow(n=n, seed=seed, edges=truth.edge_count, ced=value, elapsed_ms=elapsed))
        logger.info(f"n={n} median CED time {median_times(rows)[n]:.1f} ms")
    return rows


def median_times(rows: Iterable[BenchRow]) -> dict[int, float]:
    by_size: dict[int, list[float]] = {}
    for row in rows:
        by_size.setdefault(row.n, []).append(row.elapsed_ms)
    return {n: statistics.median(times) for n, times in sorted(by_size.items())}


def loglog_slope(rows: Iterable[BenchRow]) -> float | None:
    """Slope of log(median time) against log(n); ``None`` with fewer than two sizes."""
    medians = {n: t for n, t in median_times(rows).items() if t > 0}
    if len(medians) < 2:
        return None
    sizes = np.log(np.array(list(medians), dtype=float))
    times = np.log(np.array(list(medians.values()), dtype=float))
    slope, _ = np.polyfit(sizes, times, 1)
    return float(slope)


def write_bench_csv(rows: Iterable[BenchRow], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        record = row.model_dump()
        record["elapsed_ms"] = f"{row.elapsed_ms:.3f}"
        writer.writerow(record)
