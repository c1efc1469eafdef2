"""Fiber and pump parameter containers, dispersion relation and derived scales.

Unit system, fixed throughout the package: lengths in km, times in ps,
powers in W, phases in rad.  Consequently gamma is in 1/(W km), beta2 in
ps^2/km, delta_beta1 in ps/km, delta_beta0 in 1/km and detunings Omega in
rad/ps.  With these choices gamma*P and beta2*Omega^2 share the unit 1/km,
photon-flux spectral densities come out in ps/rad and two-photon
amplitudes in sqrt(ps).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBirefringence, ZeroPower


@dataclass(frozen=True)
class FiberParams:
    """Linear and nonlinear constants of a birefringent fiber.

    Parameters
    ----------
    gamma : float
        Nonlinearity parameter, 1/(W km).
    beta2 : float
        Group-velocity dispersion, ps^2/km, common to both axes.
    length : float
        Fiber length L, km.
    delta_beta0 : float
        Phase mismatch beta0x - beta0y, 1/km.
    delta_beta1 : float
        Group mismatch beta1x - beta1y, ps/km.  Positive under the
        x-is-slow-axis convention; use `normalize_convention` to fold a
        negative value into an axis relabel.
    beta1_ref : float
        Absolute inverse group velocity of the y axis, ps/km.  Enters only
        as a common phase, so the default 0 is physically inert.
    """

    gamma: float
    beta2: float
    length: float
    delta_beta0: float = 0.0
    delta_beta1: float = 0.0
    beta1_ref: float = 0.0

    def __post_init__(self) -> None:
        # gamma=0 and length=0 stay representable: several degenerate
        # limits (linear propagation, zero-length identity map) are
        # exercised by tests.  Scenario loading enforces strict positivity.
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.length < 0:
            raise ValueError(f"length must be >= 0, got {self.length}")


@dataclass(frozen=True)
class PumpConfig:
    """Monochromatic pump powers and phases on the two optical axes.

    duration is the optional pump duration T in ps; setting it enables
    discrete-mode quantities (mode spacing 2*pi/T).
    """

    p0x: float
    p0y: float = 0.0
    theta0x: float = 0.0
    theta0y: float = 0.0
    duration: float | None = None

    def __post_init__(self) -> None:
        if self.p0x < 0 or self.p0y < 0:
            raise ValueError(f"pump powers must be >= 0, got ({self.p0x}, {self.p0y})")
        if self.duration is not None and self.duration <= 0:
            raise ValueError(f"duration must be > 0, got {self.duration}")

    @property
    def total(self) -> float:
        """Total pump power P0 = p0x + p0y, W."""
        return self.p0x + self.p0y


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of frequency detunings Omega in rad/ps."""

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if not self.omega_min < self.omega_max:
            raise ValueError(
                f"omega_min must be < omega_max, got [{self.omega_min}, {self.omega_max}]"
            )

    @property
    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @property
    def is_symmetric(self) -> bool:
        """True when the grid range is symmetric about Omega=0.

        A uniform symmetric grid automatically contains +Omega for every
        -Omega; an even n_points additionally avoids Omega=0 itself.
        """
        return self.omega_min == -self.omega_max


def beta(fiber: FiberParams, axis: str, omega: float) -> float:
    """Propagation constant beta_j(Omega) in 1/km on axis j in {"x", "y"}.

    Second-order Taylor form beta0j + beta1j*Omega + (beta2/2)*Omega^2 with
    the absolute offsets fixed by convention: beta0y = 0, beta1y = beta1_ref,
    so that beta_x - beta_y = delta_beta0 + delta_beta1*Omega exactly.
    """
    if axis == "x":
        beta0, beta1 = fiber.delta_beta0, fiber.beta1_ref + fiber.delta_beta1
    elif axis == "y":
        beta0, beta1 = 0.0, fiber.beta1_ref
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return beta0 + beta1 * omega + 0.5 * fiber.beta2 * omega**2


def alpha_param(fiber: FiberParams, pump: PumpConfig) -> float:
    """Dimensionless overlap parameter alpha = beta2*gamma*P0/delta_beta1^2.

    |alpha| >= 1 signals that scalar and vector scattering bands overlap.
    """
    if fiber.delta_beta1 == 0:
        raise DegenerateBirefringence(
            "alpha is undefined for delta_beta1 = 0 (low-birefringence regime)"
        )
    return fiber.beta2 * fiber.gamma * pump.total / fiber.delta_beta1**2


def nonlinear_length(gamma: float, power: float) -> float:
    """Nonlinearity length 1/(gamma*P) in km."""
    if power == 0:
        raise ZeroPower("nonlinear length diverges at zero power")
    if gamma == 0:
        raise ZeroPower("nonlinear length diverges at zero gamma")
    return 1.0 / (gamma * power)


def cpm_phase(gamma: float, p_same: float, p_orth: float, z: float) -> float:
    """Cross-phase-modulation phase 2*gamma*(P_same + P_orth/3)*z in rad.

    The orthogonal-axis power is weighted by 1/3.
    """
    if z < 0:
        raise ValueError(f"z must be >= 0, got {z}")
    return 2.0 * gamma * (p_same + p_orth / 3.0) * z


def normalize_convention(
    fiber: FiberParams, pump: PumpConfig
) -> tuple[FiberParams, PumpConfig]:
    """Return (fiber, pump) relabeled so that delta_beta1 >= 0.

    Swapping the axis labels x <-> y flips the signs of both mismatch
    parameters and exchanges the pump components; the old x-axis inverse
    group velocity becomes the new reference.
    """
    if fiber.delta_beta1 >= 0:
        return fiber, pump
    swapped_fiber = FiberParams(
        gamma=fiber.gamma,
        beta2=fiber.beta2,
        length=fiber.length,
        delta_beta0=-fiber.delta_beta0,
        delta_beta1=-fiber.delta_beta1,
        beta1_ref=fiber.beta1_ref + fiber.delta_beta1,
    )
    swapped_pump = PumpConfig(
        p0x=pump.p0y,
        p0y=pump.p0x,
        theta0x=pump.theta0y,
        theta0y=pump.theta0x,
        duration=pump.duration,
    )
    return swapped_fiber, swapped_pump


def params_hash(*parts: object) -> str:
    """Deterministic provenance token for a set of parameter objects."""
    digest = hashlib.sha256(repr(parts).encode("ascii"))
    return digest.hexdigest()[:16]
