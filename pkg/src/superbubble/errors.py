"""Exception hierarchy. The CLI maps each class to an exit code."""


class SuperbubbleError(Exception):
    exit_code = 1


class ParseError(SuperbubbleError, ValueError):
    """Malformed edge-list input."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SelfLoopError(ParseError):
    def __init__(self, label, line=None):
        self.label = label
        super().__init__(f"self-loop edge on {label!r}", line)


class NotDagError(SuperbubbleError, ValueError):
    """Input cannot be a DAG (no source or no sink)."""

    exit_code = 3


class CycleError(NotDagError):
    def __init__(self, edge=None, message=None):
        self.edge = edge
        if message is None:
            message = "graph is cyclic"
            if edge is not None:
                message += f": edge {edge[0]!r} -> {edge[1]!r} closes a cycle"
        super().__init__(message)


class OracleCapError(SuperbubbleError):
    exit_code = 4

    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"graph has {n} vertices, oracle cap is {cap}")


class RangeQueryError(SuperbubbleError, IndexError):
    """Range query called outside its contract."""


class InfeasibleSpecError(SuperbubbleError, ValueError):
    pass
