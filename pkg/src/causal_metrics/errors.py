"""Exceptions raised by causal-metrics."""


class CausalMetricsError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(CausalMetricsError):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        """Initialize GraphFormatError.

        Args:
            message: What is wrong with the input
            line: 1-based line number of the offending input line, if known
        """
        self.line = line
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"Malformed graph{location}: {message}")


class GraphValidationError(CausalMetricsError):
    """Raised when a graph violates the invariants of its claimed kind."""


class NodeMismatchError(CausalMetricsError):
    """Raised when truth and prediction are not defined over the same nodes."""


class UnsupportedGraphError(CausalMetricsError):
    """Raised when a metric is not defined for the graph class it was given."""

    def __init__(self, metric: str, reason: str):
        """Initialize UnsupportedGraphError.

        Args:
            metric: Name of the metric or operation that refused the input
            reason: Short human readable reason, reused verbatim in reports
        """
        self.metric = metric
        self.reason = reason
        super().__init__(f"{metric}: {reason}")


class EnumerationLimitError(CausalMetricsError):
    """Raised when a Markov equivalence class is too large to enumerate."""

    def __init__(self, undirected: int, limit: int):
        self.undirected = undirected
        self.limit = limit
        super().__init__(
            f"{undirected} undirected edges exceed the enumeration limit of {limit}"
        )


class OracleBudgetError(CausalMetricsError):
    """Raised when a reference oracle is called on a graph above its budget."""


class ManifestError(CausalMetricsError):
    """Raised when a dataset manifest is missing or malformed."""


class UnknownMetricError(CausalMetricsError):
    """Raised when a requested metric name is not in the catalogue."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown metric {name!r}" if name else "no metric requested")
