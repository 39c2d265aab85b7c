"""Exception types shared across the engine."""


class ConceptSpaceError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ConceptSpaceError, ValueError):
    """A value violates a construction invariant or an argument range."""


class MissingDomainError(ConceptSpaceError, KeyError):
    """A point or space lacks a domain that the operation requires."""

    def __init__(self, domain_id: str, context: str = ""):
        self.domain_id = domain_id
        msg = f"missing domain {domain_id!r}"
        if context:
            msg = f"{msg} ({context})"
        super().__init__(msg)

    def __str__(self) -> str:
        # KeyError would repr() the args tuple; keep the plain message.
        return self.args[0]


class DimensionMismatchError(ConceptSpaceError, ValueError):
    """Vector length disagrees with the domain's declared dimensionality."""


class DomainMismatchError(ConceptSpaceError, ValueError):
    """Two geometric objects that must share a domain do not."""


class NoForegroundError(ConceptSpaceError):
    """Every pixel of an image matched the background color."""


class LatentFormatError(ConceptSpaceError, ValueError):
    """A latent-code stream is malformed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ObservationError(ConceptSpaceError):
    """A point in a learning stream failed; carries the 0-based index."""

    def __init__(self, index: int, item_id: str, message: str):
        self.index = index
        self.item_id = item_id
        super().__init__(f"observation {index} ({item_id}): {message}")


class StoreError(ConceptSpaceError):
    """A concept store document is unreadable, inconsistent, or stale."""
