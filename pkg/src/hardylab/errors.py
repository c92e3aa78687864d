"""Exception types raised across the package.

All errors derive from :class:`HardyLabError`, which is itself a
``ValueError`` so callers validating user input can catch either.
"""


class HardyLabError(ValueError):
    """Base class for every error raised by hardylab."""


class NotNormalized(HardyLabError):
    pass


class DimensionMismatch(HardyLabError):
    pass


class NotProjector(HardyLabError):
    pass


class ScenarioMismatch(HardyLabError):
    pass


class BadRoleLabels(HardyLabError):
    pass


class DegenerateFamily(HardyLabError):
    pass


class CommutingObservables(HardyLabError):
    pass


class BadSpin(HardyLabError):
    pass


class BadDirection(HardyLabError):
    pass


class SizeLimit(HardyLabError):
    pass


class Infeasible(HardyLabError):
    pass


class Unbounded(HardyLabError):
    pass
