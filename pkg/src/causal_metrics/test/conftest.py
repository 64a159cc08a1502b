"""Common pytest configuration and fixtures for tests."""

import logging
from pathlib import Path

import pytest

from causal_metrics.graph import CausalGraph
from causal_metrics.io import write_graph
from causal_metrics.settings import Settings
from causal_metrics.test.graphs import CHAIN3, DROP, REV23, UND3

# Setup logging
logger = logging.getLogger("causal_metrics_tests")
logger.setLevel(logging.DEBUG)
log_handler = logging.StreamHandler()
log_handler.setLevel(logging.DEBUG)
formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
log_handler.setFormatter(formatter)
logger.addHandler(log_handler)


@pytest.fixture
def config() -> Settings:
    """Single-threaded settings so timings and logs stay deterministic."""
    return Settings(jobs=1)


@pytest.fixture
def graph_files(tmp_path: Path) -> dict[str, Path]:
    """Small graphs written to disk in both supported formats."""
    graphs: dict[str, CausalGraph] = {
        "chain.csv": CHAIN3,
        "drop.csv": DROP,
        "rev23.txt": REV23,
        "und3.csv": UND3,
    }
    files = {name: write_graph(g, tmp_path / name) for name, g in graphs.items()}
    logger.info(f"Wrote {len(files)} graph files to {tmp_path}")
    return files


@pytest.fixture
def dataset_dir(tmp_path: Path) -> Path:
    """A dataset directory whose predictions cover a good, a CPDAG and a missing file."""
    root = tmp_path / "toy"
    (root / "predictions").mkdir(parents=True)
    write_graph(CHAIN3, root / "graph.csv")
    write_graph(DROP, root / "predictions" / "drop.csv")
    write_graph(REV23, root / "predictions" / "rev23.csv")
    write_graph(UND3, root / "predictions" / "pc.csv")
    (root / "manifest.json").write_text(
        """{
  "name": "toy",
  "category": "static",
  "graph": "graph.csv",
  "predictions": [
    {"model": "drop", "path": "predictions/drop.csv"},
    {"model": "rev23", "path": "predictions/rev23.csv"},
    {"model": "pc", "path": "predictions/pc.csv"},
    {"model": "missing", "path": "predictions/missing.csv"}
  ]
}
""",
        encoding="utf-8",
    )
    return root
