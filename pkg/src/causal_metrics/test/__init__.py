"""Test package for causal-metrics."""
