"""Reading and writing graphs.

Two text formats are supported:

* adjacency CSV: 0/1 cells, optional header row of labels, row i column j = edge i -> j;
* edge list: ``u -> v`` (directed), ``u -- v`` (undirected) and ``node u`` lines.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Literal

import numpy as np

from causal_metrics.errors import GraphFormatError, GraphValidationError
from causal_metrics.graph import CausalGraph

logger = logging.getLogger("causal_metrics.io")

GraphFormat = Literal["csv", "edgelist"]

_CELLS = {"0": False, "1": True}
_OPERATORS = ("->", "--")
_RESERVED = {"node", *_OPERATORS}


def _looks_like_header(row: list[str]) -> bool:
    return any(cell.strip() not in _CELLS for cell in row)


def parse_adjacency_csv(text: str, has_header: bool | None = None) -> CausalGraph:
    """Parse an adjacency CSV.

    Args:
        text: CSV content, LF or CRLF line endings
        has_header: Whether the first row holds node labels; detected from the
            first row's cells when ``None``

    Raises:
        GraphFormatError: On a non-square matrix, a cell outside {0, 1}, a
            nonzero diagonal or duplicate labels
    """
    numbered = [
        (number, row)
        for number, row in enumerate(csv.reader(io.StringIO(text)), start=1)
        if any(cell.strip() for cell in row)
    ]
    if not numbered:
        raise GraphFormatError("empty adjacency matrix")

    if has_header is None:
        has_header = _looks_like_header(numbered[0][1])

    labels: list[str] | None = None
    if has_header:
        header_line, header = numbered.pop(0)
        labels = [cell.strip() for cell in header]
        if len(set(labels)) != len(labels):
            raise GraphFormatError("duplicate node labels in header", line=header_line)
        if any(not label for label in labels):
            raise GraphFormatError("empty node label in header", line=header_line)

    n = len(numbered)
    if n == 0:
        raise GraphFormatError("header without matrix rows")
    if labels is not None and len(labels) != n:
        raise GraphFormatError(f"{len(labels)} labels for {n} matrix rows", line=1)

    adj = np.zeros((n, n), dtype=bool)
    for i, (number, row) in enumerate(numbered):
        if len(row) != n:
            raise GraphFormatError(
                f"row has {len(row)} cells, expected {n} (matrix must be square)", line=number
            )
        for j, cell in enumerate(row):
            value = _CELLS.get(cell.strip())
            if value is None:
                raise GraphFormatError(f"cell {cell.strip()!r} is not 0 or 1", line=number)
            adj[i, j] = value
        if adj[i, i]:
            raise GraphFormatError(f"nonzero diagonal at node {i + 1}", line=number)

    logger.debug(f"Parsed {n}x{n} adjacency matrix (header={has_header})")
    return CausalGraph.from_matrix(adj, labels=labels, labelled=labels is not None)


def parse_edge_list(text: str) -> CausalGraph:
    """Parse an edge list; node order is the order of first appearance."""
    order: dict[str, int] = {}
    directed: dict[tuple[str, str], int] = {}
    undirected: dict[frozenset[str], int] = {}

    def declare(name: str) -> None:
        order.setdefault(name, len(order))

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 2 and tokens[0] == "node":
            declare(tokens[1])
            continue
        if len(tokens) != 3 or tokens[1] not in _OPERATORS:
            raise GraphFormatError(f"expected 'u -> v', 'u -- v' or 'node u', got {line!r}", line=number)

        u, operator, v = tokens
        if u == v:
            raise GraphFormatError(f"self-loop on node {u!r}", line=number)
        declare(u)
        declare(v)
        pair = frozenset((u, v))
        if operator == "->":
            if pair in undirected or (v, u) in directed:
                raise GraphFormatError(f"conflicting declarations for pair {u!r}, {v!r}", line=number)
            directed[(u, v)] = number
        else:
            if (u, v) in directed or (v, u) in directed:
                raise GraphFormatError(f"conflicting declarations for pair {u!r}, {v!r}", line=number)
            undirected[pair] = number

    if not order:
        raise GraphFormatError("edge list declares no nodes")

    n = len(order)
    adj = np.zeros((n, n), dtype=bool)
    for u, v in directed:
        adj[order[u], order[v]] = True
    for pair in undirected:
        u, v = sorted(pair, key=order.__getitem__)
        adj[order[u], order[v]] = adj[order[v], order[u]] = True

    labels = sorted(order, key=order.__getitem__)
    return CausalGraph.from_matrix(adj, labels=labels, labelled=True)


def to_adjacency_csv(g: CausalGraph, header: bool = True) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header:
        writer.writerow(g.labels)
    for row in g.adj:
        writer.writerow(int(cell) for cell in row)
    return buffer.getvalue()


def _edge_lines(g: CausalGraph) -> list[tuple[int, str, int]]:
    edges = []
    for u in range(g.n):
        for v in range(g.n):
            if not g.adj[u, v]:
                continue
            if g.adj[v, u]:
                if u < v:
                    edges.append((u, "--", v))
            else:
                edges.append((u, "->", v))
    return edges


def to_edge_list(g: CausalGraph) -> str:
    """Serialize ``g`` so that ``parse_edge_list`` restores the same node order.

    ``node`` lines are emitted only where first appearance in the edge lines
    would otherwise reorder the nodes, and for isolated nodes.
    """
    for label in g.labels:
        if not label or "#" in label or any(ch.isspace() for ch in label) or label in _RESERVED:
            raise GraphFormatError(f"label {label!r} cannot be written to an edge list")

    lines: list[str] = []
    seen: set[int] = set()
    next_unseen = 0

    def mention(node: int) -> None:
        nonlocal next_unseen
        if node in seen:
            return
        while next_unseen < node:
            if next_unseen not in seen:
                lines.append(f"node {g.labels[next_unseen]}")
                seen.add(next_unseen)
            next_unseen += 1
        seen.add(node)
        while next_unseen in seen:
            next_unseen += 1

    for u, operator, v in _edge_lines(g):
        mention(u)
        mention(v)
        lines.append(f"{g.labels[u]} {operator} {g.labels[v]}")
    for node in range(g.n):
        if node not in seen:
            lines.append(f"node {g.labels[node]}")
            seen.add(node)
    return "\n".join(lines) + "\n"


def _format_for(path: Path) -> GraphFormat:
    return "csv" if path.suffix.lower() == ".csv" else "edgelist"


def read_graph(path: Path | str, has_header: bool | None = None) -> CausalGraph:
    """Read a graph, choosing the format from the file suffix."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as exc:
        raise GraphFormatError(f"{path} is not UTF-8 text") from exc

    try:
        if _format_for(path) == "csv":
            return parse_adjacency_csv(text, has_header=has_header)
        return parse_edge_list(text)
    except GraphValidationError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def render_graph(g: CausalGraph, fmt: GraphFormat) -> str:
    if fmt == "csv":
        return to_adjacency_csv(g, header=True)
    return to_edge_list(g)


def write_graph(g: CausalGraph, path: Path | str, fmt: GraphFormat | None = None) -> Path:
    path = Path(path)
    path.write_text(render_graph(g, fmt or _format_for(path)), encoding="utf-8")
    logger.info(f"Wrote {g.kind.value} graph with {g.n} nodes to {path}")
    return path
