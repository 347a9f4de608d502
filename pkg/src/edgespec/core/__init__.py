"""Shared domain types, probability containers and random streams."""

from .distributions import (
    NORMALIZATION_TOL,
    DenseDistribution,
    SparseDistribution,
    TokenId,
    as_f32,
    uniform,
    validate_dense,
)
from .streams import RandomStream, StreamLabel, StreamSeeds, StreamSet
from .session_config import SessionConfig

__all__ = [
    "NORMALIZATION_TOL",
    "DenseDistribution",
    "SparseDistribution",
    "TokenId",
    "as_f32",
    "uniform",
    "validate_dense",
    "RandomStream",
    "StreamLabel",
    "StreamSeeds",
    "StreamSet",
    "SessionConfig",
]
