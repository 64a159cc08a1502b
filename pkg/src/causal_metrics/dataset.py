"""Dataset directories.

A dataset directory holds a ``manifest.json`` naming the ground-truth graph and
the predicted graphs of each discovery model::

    {
      "name": "sachs",
      "category": "static",
      "graph": "graph.csv",
      "predictions": [{"model": "pc", "path": "predictions/pc.csv"}]
    }
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from causal_metrics.errors import ManifestError
from causal_metrics.schema import DatasetManifest

logger = logging.getLogger("causal_metrics.dataset")

MANIFEST_NAME = "manifest.json"


def load_manifest(directory: Path | str) -> DatasetManifest:
    """Read and validate ``manifest.json`` from ``directory``.

    Raises:
        ManifestError: If the manifest is missing, not JSON or fails validation
    """
    root = Path(directory)
    path = root / MANIFEST_NAME
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ManifestError(f"no {MANIFEST_NAME} in {root}") from None
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc}") from exc

    try:
        manifest = DatasetManifest.model_validate_json(text).model_copy(update={"root": root})
    except ValidationError as exc:
        raise ManifestError(f"invalid manifest {path}: {exc}") from exc

    models = [entry.model for entry in manifest.predictions]
    duplicates = sorted({model for model in models if models.count(model) > 1})
    if duplicates:
        raise ManifestError(f"models listed more than once in {path}: {duplicates}")

    logger.info(
        f"Loaded dataset {manifest.name} ({manifest.category}) "
        f"with {len(manifest.predictions)} predictions"
    )
    return manifest
