"""Exception and warning types shared across the package."""


class HypzeroError(Exception):
    """Base class for all package-specific errors."""


class DegenerateBeta(HypzeroError):
    """A beta parameter sits on (or too close to) a nonpositive integer,
    so a Pochhammer denominator in the coefficient formula vanishes."""


class MapSingularity(HypzeroError):
    """The rational change of variables was evaluated at its pole."""


class PairMismatch(HypzeroError):
    """Tail alpha/beta entries claimed to cancel do not match."""


class DegenerateZeros(HypzeroError):
    """Zero set too clustered for the interaction sums to be reliable."""


class CaseArityMismatch(HypzeroError):
    """Parameter arity does not match the requested special-case formula."""


class SamplingExhausted(HypzeroError):
    """Rejection sampling failed to produce an admissible draw."""


class NoConvergence(HypzeroError):
    """Eigenvalue iteration failed its backward-error contract."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ClusterWarning(UserWarning):
    """Non-fatal: zeros closer than the separation floor; downstream
    interaction sums may be unreliable."""
