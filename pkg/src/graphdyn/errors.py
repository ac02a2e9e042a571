"""Exception hierarchy for graphdyn."""

from __future__ import annotations


class GraphDynError(Exception):
    """Base class for every error raised by this package."""


# graph construction and topology

class GraphError(GraphDynError):
    pass


class DisconnectedGraph(GraphError):
    pass


class NonpositiveEdgeLength(GraphError):
    pass


class NotConnected(GraphDynError):
    pass


class NotOpen(GraphDynError):
    pass


# maps

class MapError(GraphDynError):
    pass


class DiscontinuousAtBreakpoint(MapError):
    def __init__(self, edge, t):
        super().__init__(f"map is discontinuous on edge {edge!r} at t={t}")
        self.edge = edge
        self.t = t


class DiscontinuousAtVertex(MapError):
    def __init__(self, vertex):
        super().__init__(f"map is discontinuous at vertex {vertex!r}")
        self.vertex = vertex


class PathNotContiguous(MapError):
    pass


class PieceCoverage(MapError):
    """Pieces on an edge do not tile [0, 1]."""


class PieceBudgetExceeded(GraphDynError):
    def __init__(self, count, cap=None):
        msg = f"piecewise form needs {count} pieces"
        if cap is not None:
            msg += f" (cap {cap})"
        super().__init__(msg)
        self.count = count
        self.cap = cap


# orbit sets

class PreconditionFailed(GraphDynError):
    pass


class OrbitStabilized(GraphDynError):
    def __init__(self, n):
        super().__init__(f"orbit segment stabilizes at n={n}")
        self.n = n


# decomposition

class NoOverlapWithinHorizon(GraphDynError):
    pass


class StabilizationBudgetExceeded(GraphDynError):
    pass


class SeedInsideAvoid(GraphDynError):
    pass


class CoreBudgetExceeded(GraphDynError):
    pass


class NoCandidates(GraphDynError):
    """No recurrent point was found away from the periodic set.

    ``report`` carries the (class-free) report describing which regime
    explains the empty candidate set.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnsupportedCore(GraphDynError):
    pass


class RotationNotRigid(GraphDynError):
    pass


class EntryHorizonExceeded(GraphDynError):
    def __init__(self, point, horizon):
        super().__init__(f"{point} does not enter the core within {horizon} steps")
        self.point = point
        self.horizon = horizon


# system files

class SystemSyntaxError(GraphDynError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class SemanticError(GraphDynError):
    pass
