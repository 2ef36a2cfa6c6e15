"""Exception hierarchy.

Every validation failure derives from :class:`FairFilterError`, itself a
``ValueError``, so callers can catch one class and the CLI can map it to a
single exit code.
"""


class FairFilterError(ValueError):
    """Base class for all validation errors raised by this package."""


class SelfLoopError(FairFilterError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"self-loop on node {node}")


class DuplicateEdgeError(FairFilterError):
    def __init__(self, i, j):
        self.edge = (i, j)
        super().__init__(f"duplicate edge ({i}, {j})")


class IndexOutOfRangeError(FairFilterError):
    def __init__(self, index, edge, num_nodes):
        self.index = index
        self.edge = edge
        super().__init__(
            f"node index {index} in edge {edge} outside [0, {num_nodes})"
        )


class IsolatedNodeError(FairFilterError):
    def __init__(self, node):
        self.node = node
        super().__init__(
            f"node {node} has degree 0; normalized operators are undefined "
            "(prune isolated nodes first)"
        )


class NotSymmetricError(FairFilterError):
    pass


class EigenFailureError(FairFilterError):
    pass


class DimensionMismatchError(FairFilterError):
    pass


class NotBinarySensitiveError(FairFilterError):
    pass


class InvalidTauError(FairFilterError):
    pass


class AllFrequenciesCutError(FairFilterError):
    def __init__(self, tau, num_frequencies):
        self.tau = tau
        super().__init__(
            f"tau={tau} places all {num_frequencies} frequencies in the cutoff "
            "set, leaving no complement to average over; raise tau (tau=1 cuts nothing)"
        )


class EmptyMaskError(FairFilterError):
    pass


class EmptyGroupError(FairFilterError):
    def __init__(self, s_value):
        self.s_value = s_value
        super().__init__(f"no masked nodes with sensitive value {s_value}")


class EmptyPositiveGroupError(FairFilterError):
    def __init__(self, s_value):
        self.s_value = s_value
        super().__init__(
            f"no masked nodes with y=1 and sensitive value {s_value}"
        )


class MissingColumnError(FairFilterError):
    pass


class UnknownNodeIdError(FairFilterError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"edge references unknown node id {node_id!r}")


class InvalidConfigError(FairFilterError):
    pass


class TooFewNodesError(FairFilterError):
    pass
