"""Exception hierarchy shared by every checker."""


class SimrefError(Exception):
    """Base class for all errors raised by simref."""


class SpecError(SimrefError, ValueError):
    """A specification, relation or formula is malformed."""


class SpaceMismatch(SimrefError, ValueError):
    """Two objects that must live over the same state space do not."""


class PartialFunction(SimrefError, ValueError):
    """A mapping required to be total is undefined somewhere."""


class CapExceeded(SimrefError):
    """An exploration cap was hit; the check is inconclusive."""
