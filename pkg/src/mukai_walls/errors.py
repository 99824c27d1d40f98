"""Exception hierarchy shared by all modules."""


class MukaiError(Exception):
    """Base class for every error raised by this package."""


class LatticeMismatchError(MukaiError):
    """Two vectors live over different Neron-Severi lattices."""


class DomainError(MukaiError, ValueError):
    """An operation was called outside its mathematical domain."""


class UnresolvedError(MukaiError):
    """A bounded search finished without an answer."""

    def __init__(self, message: str, bound: int):
        super().__init__(f"{message} (search bound {bound})")
        self.bound = bound


class ResourceError(MukaiError):
    """An iteration cap was exceeded."""


class ConsistencyError(MukaiError, AssertionError):
    """An identity that must hold by construction failed."""


class ParseError(MukaiError, ValueError):
    """Invalid problem or trace document; ``pointer`` is a JSON pointer."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.reason = message
