"""Closed-form performance model."""

from .performance import (
    PerfParams,
    async_expected_latency,
    async_throughput,
    bubble_time,
    cloud_ar_latency,
    cloud_ar_throughput,
    expected_accept_length,
    hit_probability,
    report,
    speedup,
    speedup_limit,
    sync_latency,
    sync_throughput,
)

__all__ = [
    "PerfParams",
    "async_expected_latency",
    "async_throughput",
    "bubble_time",
    "cloud_ar_latency",
    "cloud_ar_throughput",
    "expected_accept_length",
    "hit_probability",
    "report",
    "speedup",
    "speedup_limit",
    "sync_latency",
    "sync_throughput",
]
