"""Error hierarchy shared by every edgespec subpackage."""


class EdgeSpecError(Exception):
    """Base class for all edgespec errors."""


# Distributions


class DistributionError(EdgeSpecError, ValueError):
    """A probability vector failed validation."""


class NegativeMass(DistributionError):
    pass


class NotNormalized(DistributionError):
    pass


class DomainError(EdgeSpecError, ValueError):
    """Arguments outside an operation's mathematical domain."""


# Session state


class StateError(EdgeSpecError):
    """Invalid transition on a SessionState."""


class Discontiguous(StateError):
    pass


class UnknownBatch(StateError):
    pass


class OutOfOrder(StateError):
    pass


# Protocol


class StaleBatch(EdgeSpecError):
    """A draft batch was built on a prefix the verifier has since rolled back."""

    def __init__(self, batch_id: int, base_pos: int, committed_len: int):
        super().__init__(
            f"batch {batch_id} based at {base_pos}, verifier committed length is {committed_len}"
        )
        self.batch_id = batch_id
        self.base_pos = base_pos
        self.committed_len = committed_len


class Divergence(EdgeSpecError):
    """Edge and cloud committed sequences disagree."""


# Wire codec


class WireError(EdgeSpecError, ValueError):
    """Frame could not be encoded or decoded."""


class Overflow(WireError):
    pass


class Truncated(WireError):
    pass


class BadKind(WireError):
    pass


class LengthMismatch(WireError):
    pass


# Transport


class PeerClosed(EdgeSpecError, ConnectionError):
    """The remote endpoint closed the stream mid-session."""


class DigestMismatch(EdgeSpecError):
    """Both ends of a socket session must load the same scenario."""


# Harness


class ScenarioError(EdgeSpecError, ValueError):
    """Scenario file is missing or fails schema validation."""


class EmptyRun(EdgeSpecError, ValueError):
    """Metrics requested for a run that committed nothing."""
