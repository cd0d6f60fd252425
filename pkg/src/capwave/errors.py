"""Exception hierarchy shared across the package.

Everything derives from CapwaveError so the CLI can map domain failures to
exit code 3 in one place.
"""


class CapwaveError(Exception):
    """Base class for all capwave domain errors."""


class NoPositiveRoot(CapwaveError):
    """The dispersion relation has no positive root for these parameters."""


class DoubleRootBoundary(CapwaveError):
    """Parameters sit on the two-root boundary curve (double dispersion root)."""


class CeilingTooLarge(CapwaveError):
    """Requested frequency ceiling needs more Fourier modes than allowed."""


class UndefinedAtOrigin(CapwaveError):
    """Krein signature is not defined for the zero spectral point."""


class DegenerateDenominator(CapwaveError):
    """e*^2 = alpha resonance: the index denominators vanish."""


class SigmaTildeResonance(CapwaveError):
    """sigma^2 = T~(3 - sigma^2) resonance: the chi denominator vanishes."""


class SurfaceTouchdown(CapwaveError):
    """Surface profile touches the flat bottom (1 + zeta <= 0 somewhere)."""


class SolverSingular(CapwaveError):
    """The collocation system for the flattened elliptic problem is singular."""


class WindowOverlap(CapwaveError):
    """An eigenvalue window captured the wrong number of eigenvalues."""


class ConvergenceFailure(CapwaveError):
    """The dense eigensolver failed to converge."""
