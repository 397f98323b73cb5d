"""Exception hierarchy shared by all umrows modules.

Budget errors are first class: a computation that would blow past its
configured bounds aborts with a structured error carrying whatever partial
result exists, never a wrong answer.
"""


class UmrowsError(Exception):
    """Base class for all package errors."""


class InvalidInput(UmrowsError):
    """Malformed or out-of-contract input (CLI exit code 4)."""


class ZeroCone(InvalidInput):
    pass


class NotPointed(InvalidInput):
    pass


class NotPositive(InvalidInput):
    pass


class NotAVertex(InvalidInput):
    pass


class NonConvexRegion(InvalidInput):
    pass


class RankTooSmall(InvalidInput):
    pass


class ZeroElement(InvalidInput):
    pass


class InvalidSystem(InvalidInput):
    pass


class NotFiniteDimensional(InvalidInput):
    pass


class UnsupportedInput(InvalidInput):
    pass


class NotUnimodular(UmrowsError):
    """Row fails the unit-ideal test (CLI exit code 2)."""


class BudgetExceeded(UmrowsError):
    """A configured search/size bound was hit (CLI exit code 3).

    `partial` carries the best verified partial artifact, if any.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NeedLargerWeights(UmrowsError):
    """Recoverable: conjugation not yet aligned; carries a violating monomial."""

    def __init__(self, message, monomial=None):
        super().__init__(message)
        self.monomial = monomial


class NotTangent(InvalidInput):
    pass


class NotAPyramid(InvalidInput):
    pass


class EmptySide(InvalidInput):
    pass


class LiftFailed(UmrowsError):
    """Internal invariant violation during a transcript lift (a bug, exit 5)."""


class NotSurjectiveOnNeeded(UmrowsError):
    """A patching step could not compute a preimage of a needed multiplier."""


class StageFailure(UmrowsError):
    """A descent stage failed; carries the stage name and partial witnesses."""

    def __init__(self, stage, message, partial=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.partial = partial


class VerificationFailure(UmrowsError):
    """A replay or gluing identity did not check out (exit 5).

    `step` is the index of the first divergent step when known.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
