"""Shared fixtures for the edgespec test suite."""

import pytest

from edgespec.bench import ScenarioConfig, parse_scenario


def make_scenario(**overrides) -> ScenarioConfig:
    """Zero-jitter scenario on an aligned V=16 pair; sections merge over the defaults."""
    data = {
        "name": "test",
        "model": {"V": 16, "m": 1, "lambda": 0.8, "seed": 3},
        "costs": {"t_d": 10.0, "t_v": 5.0},
        "session": {"gamma": 4, "K": 10, "seed": 2},
        "channel": {"one_way_latency": 30.0, "bandwidth": None, "jitter_std": 0.0},
        "truncation": {"beta": None},
        "mode": "async",
        "max_tokens": 400,
        "prompt": [0],
    }
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return parse_scenario(data)


@pytest.fixture
def scenario_factory():
    return make_scenario
