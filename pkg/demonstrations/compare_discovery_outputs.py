"""
Example of using causal-metrics as a library
run it from the repository root with: uv run python demonstrations/compare_discovery_outputs.py

A ground-truth DAG is drawn at random and compared against three kinds of
"discovery output": the truth with one edge dropped, the truth with one edge
reversed, and the truth's CPDAG. SHD counts the structural edits while CED and
SID count the causal effects each output gets wrong.
"""

import numpy as np

from causal_metrics.cpdag import dag_to_cpdag
from causal_metrics.evaluator import MetricEvaluator
from causal_metrics.generate import random_dag
from causal_metrics.graph import CausalGraph
from causal_metrics.metrics import parse_metric_list
from causal_metrics.settings import Settings


def drop_edge(g: CausalGraph, u: int, v: int) -> CausalGraph:
    adj = np.array(g.adj)
    adj[u, v] = False
    return g.with_matrix(adj)


def reverse_edge(g: CausalGraph, u: int, v: int) -> CausalGraph:
    adj = np.array(g.adj)
    adj[u, v] = False
    adj[v, u] = True
    return g.with_matrix(adj)


def main() -> None:
    truth = random_dag(8, 0.3, seed=42)
    u, v = (int(x) for x in np.argwhere(truth.adj)[0])
    predictions = {
        "dropped": drop_edge(truth, u, v),
        "reversed": reverse_edge(truth, u, v),
        "cpdag": dag_to_cpdag(truth),
    }

    evaluator = MetricEvaluator(Settings(jobs=2))
    metrics = parse_metric_list("shd-c,csd,kd,sid,ced")
    print(f"truth: {truth!r}, edge {truth.labels[u]} -> {truth.labels[v]} perturbed")
    for name, pred in predictions.items():
        report = evaluator.evaluate(truth, pred, metrics, pred_name=name)
        values = ", ".join(f"{metric}={value}" for metric, value in report.metrics.items())
        print(f"{name:>9}: {values}")


if __name__ == "__main__":
    main()
