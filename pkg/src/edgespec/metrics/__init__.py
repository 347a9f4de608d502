"""Run metrics from simulation traces."""

from .run_metrics import (
    RunMetrics,
    accept_length_law,
    acceptance_fit,
    collect,
    cycle_times,
    summarize,
)

__all__ = [
    "RunMetrics",
    "accept_length_law",
    "acceptance_fit",
    "collect",
    "cycle_times",
    "summarize",
]
