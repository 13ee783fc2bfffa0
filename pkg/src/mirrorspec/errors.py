"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the domain an operation is defined on."""


class DegenerateInputError(ValueError):
    """Input is in a degenerate configuration the operation refuses to handle."""


class SpectralAmbiguityError(RuntimeError):
    """Two spectra are too close to separate or classify reliably."""


class AdmissibilityError(ValueError):
    """Scattering data fails the no-bound-state / no-semi-bound-state conditions."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge or an internal
    consistency check (e.g. residual winding after unwrapping) failed."""
