"""Exception hierarchy shared by all bicirc modules."""


class BicircError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(BicircError):
    """Problem with an edge-list file."""


class MalformedLine(GraphFormatError):
    pass


class SelfLoop(GraphFormatError):
    pass


class DuplicateEdge(GraphFormatError):
    pass


class EmptyGraph(GraphFormatError):
    pass


class InvalidInstance(BicircError):
    """Graph is well formed but not a valid bicircular instance."""


class Disconnected(InvalidInstance):
    pass


class TooFewEdges(InvalidInstance):
    pass


class NotACycle(BicircError):
    pass


class TooLarge(BicircError):
    """An enumeration guard was exceeded."""


class ZeroRatio(BicircError):
    """A telescoping ratio estimate came out exactly zero."""


class EmptySupport(BicircError):
    """No flawless configuration exists (cannot happen on valid instances)."""
