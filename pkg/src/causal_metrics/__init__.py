"""causal-metrics package.

Structural and interventional distances between causal graphs.
"""

from .graph import CausalGraph  # noqa: F401
