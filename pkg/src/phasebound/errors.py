"""Error types shared across the package."""


class NumericalConsistencyError(RuntimeError):
    """Two routes that must agree numerically have drifted apart.

    Raised when a closed-form result disagrees with its independent
    matrix-path counterpart beyond tolerance, or when a quantity that is
    real/nonnegative by construction comes out otherwise.
    """


class DivergenceDiagnostic:
    """Non-fatal note about a masked outcome that still carries signal.

    An outcome with probability below the mask floor but a non-negligible
    derivative would contribute a formally diverging Fisher term; we record
    it instead of aborting.
    """

    def __init__(self, outcome: int, probability: float, derivative: float):
        self.outcome = outcome
        self.probability = probability
        self.derivative = derivative

    def __repr__(self) -> str:
        return (
            f"DivergenceDiagnostic(outcome={self.outcome}, "
            f"probability={self.probability:.3e}, derivative={self.derivative:.3e})"
        )
