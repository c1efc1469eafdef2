"""Exceptions and warnings shared across the package."""


class FpsError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateBirefringence(FpsError):
    """Group birefringence is zero where a finite delta_beta1 is required."""


class ZeroPower(FpsError):
    """Pump power is zero where a finite power is required."""


class ZeroDispersion(FpsError):
    """beta2 is zero where a finite group-velocity dispersion is required."""


class PumpNotOnAxis(FpsError):
    """Low-birefringence formulas require the pump on a single optical axis."""


class NoFarDetunedPeak(FpsError):
    """delta_beta0 * beta2 <= 0: the LB sinc argument has no real zero."""


class StepCountTooSmall(FpsError):
    """Integration step count left a symplectic defect above tolerance."""


class ZeroGain(FpsError):
    """Parametric gain vanishes at the requested detuning."""


class EmptyState(FpsError):
    """All four two-photon amplitudes vanish at the requested detuning."""


class StimulatedOrderingWarning(UserWarning):
    """Stimulated term |xi|^4 exceeds |xi|^2 * P_T in the second-order count."""
