"""Exception hierarchy shared by all fracdiff modules."""


class FracdiffError(Exception):
    """Base class for all errors raised by this package."""


class SingularBasis(FracdiffError):
    """Basis matrix is singular (|det| below the singularity threshold)."""


class CapExceeded(FracdiffError):
    """An enumeration would produce more items than the configured cap."""


class NonLatticeInput(FracdiffError):
    """Scaling ratios are not multiplicatively dependent over the rationals."""


class NoConvergence(FracdiffError):
    """Iterative root refinement did not reach the residual target."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"root refinement did not converge after {iterations} iterations "
            f"(max residual {residual:.3e})"
        )


class ZeroRoot(FracdiffError):
    """A polynomial root at z = 0 cannot be mapped to the s-plane."""


class BracketFailure(FracdiffError):
    """Bisection could not bracket a sign change in the scanned range."""


class ConstraintViolation(FracdiffError):
    """A domain-object invariant does not hold for the supplied data."""


class NearPole(FracdiffError):
    """Evaluation point is too close to a pole of the zeta function."""

    def __init__(self, denominator_abs):
        self.denominator_abs = denominator_abs
        super().__init__(f"denominator magnitude {denominator_abs:.3e} below pole guard")


class CancellationRisk(FracdiffError):
    """Gap structure admits root-pole cancellation; pole set is unreliable."""


class TranslatesOutsideBox(FracdiffError):
    """A translate falls outside the averaging box even after recentering."""


class SchemaError(FracdiffError):
    """Input document does not match the expected JSON schema."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
