"""Main entry point for the causal-metrics command line."""

from causal_metrics.cli import run

if __name__ == "__main__":
    run()
