"""Exception types shared across the package.

Every error renders as a single diagnostic line ``<ClassName>: <detail>``,
which is what the CLI prints to stderr before exiting.
"""

from __future__ import annotations


class StreamWeaveError(Exception):
    """Base class for all package errors."""

    def diagnostic(self) -> str:
        return f"{type(self).__name__}: {self}"


# graph validation

class GraphError(StreamWeaveError):
    pass


class CycleDetected(GraphError):
    """Raised with a witness cycle (first node repeated at the end)."""

    def __init__(self, cycle: list[int]):
        self.cycle = list(cycle)
        super().__init__("→".join(str(n) for n in self.cycle))


class SelfLoop(GraphError):
    pass


class DanglingEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DuplicateNodeId(GraphError):
    pass


# stream assignment

class InvalidMatching(StreamWeaveError):
    pass


class NotMaxConcurrent(StreamWeaveError):
    pass


# oracle size guards

class TooLarge(StreamWeaveError):
    pass


# schedule compilation

class UnsafePlan(StreamWeaveError):
    pass


class UnknownStream(StreamWeaveError):
    pass


class FreeBeforeAlloc(StreamWeaveError):
    pass


class DoubleFree(StreamWeaveError):
    pass


# simulation

class DeadlockDetected(StreamWeaveError):
    pass


class CapacityExceeded(StreamWeaveError):
    pass


class EmptyRun(StreamWeaveError):
    pass


# workload generation

class InvalidSpec(StreamWeaveError):
    pass
