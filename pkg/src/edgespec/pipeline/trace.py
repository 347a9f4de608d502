"""Timestamped event log of one run."""

from typing import Any, Dict, List

import pandas as pd

TRACE_COLUMNS = ["time", "actor", "event"]


class RunTrace:
    """Append-only list of event records, exported as a DataFrame."""

    def __init__(self):
        self.rows: List[Dict[str, Any]] = []

    def record(self, time: float, actor: str, event: str, **fields: Any) -> None:
        self.rows.append({"time": float(time), "actor": actor, "event": event, **fields})

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        if not self.rows:
            return pd.DataFrame(columns=TRACE_COLUMNS)
        return pd.DataFrame.from_records(self.rows)

    def events(self, name: str) -> pd.DataFrame:
        df = self.to_frame()
        return df[df["event"] == name].reset_index(drop=True)
