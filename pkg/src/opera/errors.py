"""Exception types raised across the engine."""


class OperaError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(OperaError):
    """Input is not well-formed in the declared format."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class SchemaError(OperaError):
    """A required field or column is missing."""


class TypeConflict(OperaError):
    """An object identifier is assigned two different object types."""


class TimestampError(OperaError):
    """A timestamp is unparseable, or an event starts after it completes."""


class UnknownObjectType(OperaError):
    """The requested object type does not occur in the log or net."""


class InvalidWindow(OperaError):
    """A time window with from > to."""


class MalformedBinding(OperaError):
    """A binding that does not match the transition's surrounding types."""


class NotEnabled(OperaError):
    """Attempt to fire a binding that is not enabled in the marking."""


class EmptyLog(OperaError):
    """An operation that needs at least one event got an empty log."""


class NonFittingTrace(OperaError):
    """A single object's trace cannot be replayed on its projected net."""

    def __init__(self, object_id, event_id, place):
        self.object_id = object_id
        self.event_id = event_id
        self.place = place
        super().__init__(
            f"object {object_id!r}: no token reaches place {place!r} "
            f"required by event {event_id!r}"
        )


class NonFittingLog(OperaError):
    """The log cannot be replayed on the net."""

    def __init__(self, object_id, event_id, place):
        self.object_id = object_id
        self.event_id = event_id
        self.place = place
        super().__init__(
            f"object {object_id!r}: no token reaches place {place!r} "
            f"required by event {event_id!r}"
        )


class MissingVisit(OperaError):
    """A replay result has no consumable token visit for a related object."""


class UnknownMeasure(OperaError):
    """An unrecognized performance measure key."""
