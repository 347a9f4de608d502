"""Toy draft (edge) and target (cloud) sequence models."""

from .aligned import (
    AlignedPair,
    exact_alpha,
    make_aligned_pair,
    make_constant_alpha_pair,
    measure_alpha,
)
from .base import SequenceModel
from .table import TableModel

__all__ = [
    "SequenceModel",
    "TableModel",
    "AlignedPair",
    "make_aligned_pair",
    "make_constant_alpha_pair",
    "measure_alpha",
    "exact_alpha",
]
