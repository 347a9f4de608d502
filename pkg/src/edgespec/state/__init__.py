"""Committed/speculative session state with rollback."""

from .session import SessionState

__all__ = ["SessionState"]
