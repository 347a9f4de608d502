"""Scenario loading, experiments and socket sessions for the CLI."""

from .experiments import (
    PREDICTION_COLUMNS,
    SWEEP_DIMENSIONS,
    compare,
    perf_params,
    predictions,
    read_transcript,
    scenario_tv_distance,
    simulate,
    sweep,
    write_transcript,
)
from .scenario import (
    MAX_DENSE_VOCAB,
    MODES,
    ScenarioConfig,
    load_scenario,
    parse_scenario,
    preset_names,
)
from .serve import serve, serve_loopback

__all__ = [
    "PREDICTION_COLUMNS",
    "SWEEP_DIMENSIONS",
    "compare",
    "perf_params",
    "predictions",
    "read_transcript",
    "scenario_tv_distance",
    "simulate",
    "sweep",
    "write_transcript",
    "MAX_DENSE_VOCAB",
    "MODES",
    "ScenarioConfig",
    "load_scenario",
    "parse_scenario",
    "preset_names",
    "serve",
    "serve_loopback",
]
