"""Exception hierarchy shared by the graph, walk and spectral modules."""

from __future__ import annotations


class DtqwError(Exception):
    """Base class for all package errors."""


class GraphError(DtqwError, ValueError):
    """Invalid graph, vertex or construction parameter."""


class ParseError(GraphError):
    """Malformed edge-list or intersection-array text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotEquitableError(DtqwError):
    """A partition failed the equitability test.

    ``vertex`` and ``cell`` identify a witness: ``vertex`` has a neighbour
    count into ``cell`` that differs from another vertex of its own cell.
    """

    def __init__(self, vertex: int, cell: int, message: str | None = None):
        self.vertex = vertex
        self.cell = cell
        super().__init__(
            message or f"vertex {vertex} breaks neighbour-count constancy into cell {cell}"
        )


class NotDistanceRegularError(DtqwError):
    """The graph is not distance regular; ``vertex`` is a witness."""

    def __init__(self, vertex: int, message: str):
        self.vertex = vertex
        super().__init__(message)


class InvalidArrayError(DtqwError, ValueError):
    """An intersection array violates a feasibility condition.

    ``condition`` is a short machine-readable name such as ``"integrality"``.
    """

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


class HypothesisError(DtqwError):
    """A theorem hypothesis (regularity, equitability, 2-connectivity) fails."""

    def __init__(self, hypothesis: str, message: str):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {message}")


class ConvergenceError(DtqwError, ArithmeticError):
    """An iterative eigensolver did not converge."""


class BoundViolationError(DtqwError, ArithmeticError):
    """A proven inequality failed numerically on a concrete graph."""


class SizeCapError(GraphError):
    """A graph would exceed the dense size cap (``DTQW_MAX_N``)."""
