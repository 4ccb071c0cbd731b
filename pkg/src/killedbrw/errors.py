"""Exception types raised across the package."""


class KilledBRWError(Exception):
    """Base class for all package errors."""


class ZeroLaplace(KilledBRWError, ArithmeticError):
    """The Laplace transform vanishes (numerically) at a complex argument."""


class NotSubcritical(KilledBRWError, ValueError):
    """No finite tilting parameter exists for this step law."""


class DegenerateStep(KilledBRWError, ValueError):
    """The step law is a point mass."""


class NoConvergence(KilledBRWError, RuntimeError):
    """The complex root search did not converge."""


class EpsTooLarge(KilledBRWError, ValueError):
    """The distance to the critical speed is too large for the front construction."""


class PropertyViolation(KilledBRWError, AssertionError):
    """A sampled structural property failed.

    ``label`` names the property (for instance ``"iii"`` for the third
    listed property of a front profile).
    """

    def __init__(self, label, message=""):
        self.label = label
        super().__init__(f"property ({label}) violated: {message}" if message else f"property ({label}) violated")


class DomainError(KilledBRWError, ValueError):
    """Argument outside [0, 1]."""


class MaxIters(KilledBRWError, RuntimeError):
    """Fixed-point iteration hit its iteration cap."""

    def __init__(self, iters, delta):
        self.iters = iters
        self.delta = delta
        super().__init__(f"no convergence after {iters} iterations (last relative change {delta:.3e})")


class BudgetDominated(KilledBRWError, RuntimeError):
    """More than 1% of Monte Carlo replicas exhausted their node budget.

    The (biased-low) estimate is still attached as ``estimate``.
    """

    def __init__(self, estimate, budget_hits, replicas):
        self.estimate = estimate
        self.budget_hits = budget_hits
        self.replicas = replicas
        super().__init__(f"{budget_hits}/{replicas} replicas hit the node budget; estimate is unreliable")


class NotSupercritical(KilledBRWError, ValueError):
    """The max-step Galton-Watson process is not supercritical."""


class SubcriticalKept(KilledBRWError, ValueError):
    """Keeping steps >= v gives a process with mean offspring <= 1."""
