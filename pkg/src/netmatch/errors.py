"""Exception types shared across the package."""


class NetmatchError(Exception):
    """Base class for all netmatch-specific errors."""


class DocumentError(NetmatchError):
    """An input document (network, source model, set function) is malformed
    or semantically invalid: bad syntax, unknown node, negative capacity,
    duplicate edge, un-normalized pmf, and the like."""


class CycleError(NetmatchError):
    """The digraph contains a directed cycle.

    ``cycle`` holds one offending node sequence (without the repeated
    closing node).
    """

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle + (self.cycle[0],)))


class LimitError(NetmatchError):
    """A configured enumeration or size bound was exceeded (source-subset
    cap, binning-table size, decoder enumeration cap)."""
