"""Exception types shared across the package."""


class CoopSearchError(Exception):
    """Base class for all package-specific errors."""


class CountTooLarge(CoopSearchError):
    """Asked for more sets than the enumerated layer contains."""


class UnsupportedParams(CoopSearchError):
    """Parameter combination outside the range a formula is defined for."""


class MalformedQuery(CoopSearchError):
    """A partition query violates its disjointness or cover constraints."""


class InstanceTooLarge(CoopSearchError):
    """Instance exceeds the documented guardrails for exhaustive work."""


class ScheduleExhausted(CoopSearchError):
    """The referee ran out of schedule before the game finished."""


class WrongDeclaration(CoopSearchError):
    """A strategy machine declared an element that is not the defective.

    This signals a broken strategy; it is never a recoverable game state.
    """


class AdversaryInconsistent(CoopSearchError):
    """An answer source contradicted its own earlier answers."""


class ProtocolViolation(CoopSearchError):
    """A strategy machine reached a state its protocol should exclude."""


class SolverTimeout(CoopSearchError):
    """Exact search exceeded its budget; carries the best bounds found."""

    def __init__(self, lower: int, upper: int | None, nodes: int):
        self.lower = lower
        self.upper = upper
        self.nodes = nodes
        super().__init__(f"search budget exhausted (lower={lower}, upper={upper})")
