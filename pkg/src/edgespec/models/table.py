"""Lookup-table sequence model."""

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core import DenseDistribution, TokenId, uniform, validate_dense
from .base import SequenceModel


class TableModel(SequenceModel):
    """
    Order-m Markov model backed by an explicit conditional table.

    Contexts missing from the table (including prefixes shorter than m)
    fall back to the default row, uniform unless configured.
    """

    def __init__(
        self,
        V: int,
        m: int = 1,
        rows: Optional[Dict[Tuple[int, ...], DenseDistribution]] = None,
        default: Optional[DenseDistribution] = None,
        cost_ms: float = 0.0,
    ):
        super().__init__(V=V, m=m, cost_ms=cost_ms)
        self.rows: Dict[Tuple[int, ...], DenseDistribution] = dict(rows or {})
        self.default = default if default is not None else uniform(V)
        self._validate_rows()

    def _validate_rows(self) -> None:
        if self.default.V != self.V:
            raise ValueError("default row length differs from V")
        for key, row in self.rows.items():
            if len(key) != self.m:
                raise ValueError(f"context {key} is not of order {self.m}")
            if row.V != self.V:
                raise ValueError(f"row for context {key} has length {row.V}")

    def next_distribution(self, context: Sequence[TokenId]) -> DenseDistribution:
        if len(context) < self.m:
            return self.default
        return self.rows.get(self.context_key(context), self.default)

    def contexts(self) -> List[Tuple[int, ...]]:
        return list(self.rows.keys())

    def row_matrix(self, contexts: Sequence[Tuple[int, ...]]) -> np.ndarray:
        """Stack the rows for the given contexts into a (n, V) float32 array."""
        return np.stack(
            [self.rows.get(tuple(c), self.default).probs for c in contexts]
        )

    def to_dict(self) -> Dict:
        return {
            "V": self.V,
            "m": self.m,
            "cost_ms": self.cost_ms,
            "default": self.default.tolist(),
            "rows": [
                {"context": list(key), "probs": row.tolist()}
                for key, row in self.rows.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TableModel":
        V = int(data["V"])
        m = int(data.get("m", 1))
        default = data.get("default")
        rows = {
            tuple(int(t) for t in entry["context"]): validate_dense(entry["probs"], V)
            for entry in data.get("rows", [])
        }
        return cls(
            V=V,
            m=m,
            rows=rows,
            default=validate_dense(default, V) if default is not None else None,
            cost_ms=float(data.get("cost_ms", 0.0)),
        )

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TableModel":
        with open(path, "r") as f:
            return cls.from_dict(json.load(f))
