"""Exception hierarchy.

Each exception carries the process exit code the CLI maps it to.
"""


class DelayStabError(Exception):
    exit_code = 1


class DomainError(DelayStabError, ValueError):
    """Input outside the mathematical domain of an operation."""

    exit_code = 2


class NoEquilibrium(DomainError):
    pass


class Unstable(DomainError):
    """Requested a decay rate at a delay where the equilibrium is unstable."""


class Unbounded(DomainError):
    """A delay bound is vacuous (every delay satisfies the condition)."""


class StepTooLarge(DomainError):
    pass


class WindowTooShort(DomainError):
    pass


class NoConvergence(DelayStabError, ArithmeticError):
    exit_code = 3


class NonPositiveState(NoConvergence):
    """Integrated state left the positive half-line."""


class NoHopf(DelayStabError):
    """No finite Hopf crossing exists (b <= a)."""

    exit_code = 4


class DegenerateCrossing(NoHopf):
    pass


class ResonantDenominator(NoHopf):
    pass
