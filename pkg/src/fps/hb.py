"""First-order photon-pair amplitudes and spectra for high-birefringence fibers.

Two pump photons at the carrier are annihilated into a Stokes (-Omega) /
anti-Stokes (+Omega) pair.  Four channels exist, labeled by the
polarization of the anti-Stokes photon first and the Stokes photon second:
the scalar channels XX, YY (pump and pair co-polarized) and the vector
channels XY, YX (pump photons taken from both axes).  Amplitudes are in
sqrt(ps) (continuous-mode normalization), flux densities in ps/rad.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .errors import DegenerateBirefringence, ZeroDispersion, ZeroPower
from .fiber import FiberParams, FrequencyGrid, PumpConfig, params_hash

#: Below this argument magnitude sin(u)/u is evaluated by series to avoid
#: catastrophic cancellation near phase matching.
_SINC_SERIES_CUTOFF = 1e-8


class Channel(enum.Enum):
    """Scattering channel: first letter anti-Stokes axis, second Stokes axis."""

    XX = "xx"
    YY = "yy"
    XY = "xy"
    YX = "yx"


@dataclass(frozen=True, eq=False)
class TwoPhotonAmplitude:
    """Complex pair amplitude for one channel on a frequency grid."""

    channel: Channel
    grid: FrequencyGrid
    values: np.ndarray
    params_hash: str


@dataclass(frozen=True, eq=False)
class SpectrumRecord:
    """Photon-flux spectral densities on both axes over a frequency grid."""

    grid: FrequencyGrid
    f_x: np.ndarray
    f_y: np.ndarray
    method: str
    regime: str


def sinc(u):
    """sin(u)/u with the removable singularity handled by series."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    result = np.where(small, 1.0 - u * u / 6.0, np.sin(safe) / safe)
    if result.ndim == 0:
        return float(result)
    return result


def _sinc_argument(fiber: FiberParams, pump: PumpConfig, channel: Channel, omega):
    """Phase-mismatch sinc argument of the given channel, evaluated at L/2."""
    omega = np.asarray(omega, dtype=float)
    half_l = 0.5 * fiber.length
    b2w2 = fiber.beta2 * omega**2
    if channel is Channel.XX:
        return (b2w2 + 2.0 * fiber.gamma * pump.p0x) * half_l
    if channel is Channel.YY:
        return (b2w2 + 2.0 * fiber.gamma * pump.p0y) * half_l
    gp0 = fiber.gamma * pump.total
    if channel is Channel.XY:
        return (fiber.delta_beta1 * omega + b2w2 + gp0) * half_l
    return (fiber.delta_beta1 * omega - b2w2 - gp0) * half_l


def xi_hb(fiber: FiberParams, pump: PumpConfig, channel: Channel, omega):
    """Two-photon amplitude xi of one HB channel at detuning omega.

    Scalar channels carry the prefactor i*gamma*P0j*L and a phase 2*theta0j;
    vector channels carry i*(2/3)*gamma*sqrt(P0x*P0y)*L and theta0x+theta0y.
    The sinc argument of the YX channel enters its phase with a plus sign,
    the other three with a minus sign.

    Accepts a scalar or an array omega; returns complex of the same shape.
    """
    omega = np.asarray(omega, dtype=float)
    u = _sinc_argument(fiber, pump, channel, omega)
    if channel is Channel.XX:
        prefactor = fiber.gamma * pump.p0x * fiber.length
        phase = 2.0 * pump.theta0x
        sign = -1.0
    elif channel is Channel.YY:
        prefactor = fiber.gamma * pump.p0y * fiber.length
        phase = 2.0 * pump.theta0y
        sign = -1.0
    else:
        prefactor = (2.0 / 3.0) * fiber.gamma * np.sqrt(pump.p0x * pump.p0y) * fiber.length
        phase = pump.theta0x + pump.theta0y
        sign = -1.0 if channel is Channel.XY else 1.0
    values = 1j * prefactor * np.exp(1j * (phase + sign * u)) * sinc(u)
    if values.ndim == 0:
        return complex(values)
    return values


def channel_prefactor(fiber: FiberParams, pump: PumpConfig, channel: Channel) -> float:
    """Upper bound on |xi| for the channel: the amplitude at phase matching."""
    if channel is Channel.XX:
        return fiber.gamma * pump.p0x * fiber.length
    if channel is Channel.YY:
        return fiber.gamma * pump.p0y * fiber.length
    return (2.0 / 3.0) * fiber.gamma * np.sqrt(pump.p0x * pump.p0y) * fiber.length


@lru_cache(maxsize=None)
def amplitude_on_grid(
    fiber: FiberParams, pump: PumpConfig, channel: Channel, grid: FrequencyGrid
) -> TwoPhotonAmplitude:
    """Evaluate one channel on a grid, cached by the parameter set."""
    values = xi_hb(fiber, pump, channel, grid.omegas)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("two-photon amplitude is not finite on the grid")
    bound = channel_prefactor(fiber, pump, channel)
    if np.abs(values).max(initial=0.0) > bound * (1.0 + 1e-12):
        raise FloatingPointError("two-photon amplitude exceeds its channel prefactor")
    values.setflags(write=False)
    return TwoPhotonAmplitude(
        channel=channel,
        grid=grid,
        values=values,
        params_hash=params_hash(fiber, pump, channel.value, grid),
    )


def _heaviside(omega):
    """Theta(Omega) with the tie-break Theta(0) = 1/2."""
    return np.heaviside(np.asarray(omega, dtype=float), 0.5)


def flux_hb(fiber: FiberParams, pump: PumpConfig, omega):
    """Flux densities (f_x, f_y) at detuning omega from the four amplitudes.

    f_x collects |xi_xx(Omega)|^2, the anti-Stokes part of the XY channel
    for Omega > 0 and the Stokes part of the YX channel for Omega < 0;
    f_y is the mirror combination.  At Omega = 0 both gates weigh 1/2,
    which keeps the pairwise sum rule f_x + f_y continuous.
    """
    omega = np.asarray(omega, dtype=float)
    theta_pos = _heaviside(omega)
    theta_neg = _heaviside(-omega)
    abs_xx = np.abs(xi_hb(fiber, pump, Channel.XX, omega))
    abs_yy = np.abs(xi_hb(fiber, pump, Channel.YY, omega))
    abs_xy = np.abs(xi_hb(fiber, pump, Channel.XY, omega))
    abs_yx = np.abs(xi_hb(fiber, pump, Channel.YX, omega))
    abs_xy_neg = np.abs(xi_hb(fiber, pump, Channel.XY, -omega))
    abs_yx_neg = np.abs(xi_hb(fiber, pump, Channel.YX, -omega))
    f_x = (abs_xx**2 + theta_pos * abs_xy**2 + theta_neg * abs_yx_neg**2) / (2.0 * np.pi)
    f_y = (abs_yy**2 + theta_pos * abs_yx**2 + theta_neg * abs_xy_neg**2) / (2.0 * np.pi)
    if f_x.ndim == 0:
        return float(f_x), float(f_y)
    return f_x, f_y


def spectrum_hb(fiber: FiberParams, pump: PumpConfig, grid: FrequencyGrid) -> SpectrumRecord:
    """First-order HB spectrum record over a grid."""
    f_x, f_y = flux_hb(fiber, pump, grid.omegas)
    return SpectrumRecord(grid=grid, f_x=f_x, f_y=f_y, method="first-order", regime="HB")


def scalar_flux_first_order(fiber: FiberParams, pump_axis_power: float, omega):
    """Scalar-channel flux (gamma*P*L)^2 * sinc^2 / 2pi for a single-axis pump."""
    pump = PumpConfig(p0x=pump_axis_power)
    values = np.abs(xi_hb(fiber, pump, Channel.XX, omega))
    return values**2 / (2.0 * np.pi)


def pair_probability_density(fiber: FiberParams, pump: PumpConfig, omega):
    """Spectral density of pair-creation probability per unit time, ps/rad.

    Numerically equal to the scalar flux density of the x axis.
    """
    values = np.abs(xi_hb(fiber, pump, Channel.XX, omega))
    return values**2 / (2.0 * np.pi)


def total_scatter_probability(
    fiber: FiberParams, pump: PumpConfig, duration: float, mode: str = "analytic"
) -> float:
    """Total pair-scattering probability P_T over a pump of duration T ps.

    analytic mode evaluates the closed form
    (2/3)*(gamma*P0x*L)^2 * sqrt(T^2/(2*pi*|beta2|*L)), which neglects the
    nonlinear term in the sinc argument; numeric mode integrates the pair
    probability density over Omega >= 0 by Simpson quadrature on a grid
    extending to five first-zero widths.  P_T must stay well below 1 for
    first-order perturbation theory to hold.
    """
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if mode == "analytic":
        if fiber.beta2 == 0:
            raise ZeroDispersion("the closed form requires beta2 != 0")
        if fiber.length == 0:
            return 0.0
        gpl = fiber.gamma * pump.p0x * fiber.length
        return (2.0 / 3.0) * gpl**2 * np.sqrt(
            duration**2 / (2.0 * np.pi * abs(fiber.beta2) * fiber.length)
        )
    if mode == "numeric":
        if fiber.beta2 == 0 or fiber.length == 0:
            raise ZeroDispersion("quadrature window requires beta2 != 0 and L > 0")
        scalar_width, _ = bandwidths(fiber, pump, require_vector=False)
        omegas = np.linspace(0.0, 5.0 * scalar_width, 20001)
        density = pair_probability_density(fiber, pump, omegas)
        return duration * simpson(density, x=omegas)
    raise ValueError(f"mode must be 'analytic' or 'numeric', got {mode!r}")


def vector_peak_detuning(fiber: FiberParams, pump: PumpConfig) -> float:
    """Detuning of the far vector peaks, (delta_beta1/|beta2|)*(1 - alpha)."""
    if fiber.delta_beta1 == 0:
        raise DegenerateBirefringence("vector peaks require delta_beta1 > 0")
    if fiber.beta2 == 0:
        raise ZeroDispersion("vector peak estimate requires beta2 != 0")
    alpha = fiber.beta2 * fiber.gamma * pump.total / fiber.delta_beta1**2
    return (fiber.delta_beta1 / abs(fiber.beta2)) * (1.0 - alpha)


def overlapping_regime(fiber: FiberParams, pump: PumpConfig) -> bool:
    """True when |alpha| >= 1 and the scalar and vector bands overlap."""
    if fiber.delta_beta1 == 0:
        raise DegenerateBirefringence("alpha is undefined for delta_beta1 = 0")
    alpha = fiber.beta2 * fiber.gamma * pump.total / fiber.delta_beta1**2
    return abs(alpha) >= 1.0


def bandwidths(
    fiber: FiberParams, pump: PumpConfig, require_vector: bool = True
) -> tuple[float, float]:
    """First-zero width estimators (scalar, vector) in rad/ps.

    Scalar band: 2*sqrt(2*pi/(|beta2|*L)), scaling as L**-0.5.  Vector
    peaks: 4*pi/(delta_beta1*L), scaling as L**-1.  With require_vector
    False the vector entry is NaN when delta_beta1 = 0.
    """
    if fiber.beta2 == 0:
        raise ZeroDispersion("scalar width requires beta2 != 0")
    if fiber.length == 0:
        raise ValueError("widths diverge at zero length")
    scalar = 2.0 * np.sqrt(2.0 * np.pi / (abs(fiber.beta2) * fiber.length))
    if fiber.delta_beta1 == 0:
        if require_vector:
            raise DegenerateBirefringence("vector width requires delta_beta1 > 0")
        return scalar, float("nan")
    vector = 4.0 * np.pi / (fiber.delta_beta1 * fiber.length)
    return scalar, vector
