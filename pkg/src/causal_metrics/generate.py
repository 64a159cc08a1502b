"""Random DAG generation."""

import logging
import math

import numpy as np

from causal_metrics.graph import CausalGraph
from causal_metrics.schema import GraphKind

logger = logging.getLogger("causal_metrics.generate")


def edge_budget(n: int, density: float) -> int:
    """Number of edges for ``density`` of the ``n(n-1)/2`` possible pairs, rounded down."""
    # rounding first keeps e.g. 0.29 * 100 from flooring to 28
    return math.floor(round(density * n * (n - 1) / 2, 9))


def random_dag(n: int, density: float, seed: int) -> CausalGraph:
    """Draw a random DAG with exactly ``edge_budget(n, density)`` edges.

    A uniform random topological order is drawn first, then the required number
    of distinct order-respecting pairs is sampled uniformly without replacement.
    The result depends only on ``(n, density, seed)``.
    """
    if n < 2:
        raise ValueError(f"a random DAG needs at least 2 nodes, got {n}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    upper_rows, upper_cols = np.triu_indices(n, k=1)
    edges = edge_budget(n, density)
    chosen = rng.choice(upper_rows.size, size=edges, replace=False)

    adj = np.zeros((n, n), dtype=bool)
    adj[order[upper_rows[chosen]], order[upper_cols[chosen]]] = True

    logger.debug(f"Generated DAG n={n} density={density} seed={seed} with {edges} edges")
    return CausalGraph.from_matrix(adj, kind=GraphKind.DAG)
