"""First-order amplitudes and spectra for low-birefringence fibers.

With the pump on one optical axis, the co-polarized scalar channel is the
same as in the high-birefringence case, while phase-coherent coupling
(retained here because the beat length is not short) opens an extra vector
channel that scatters both pair photons onto the orthogonal axis.  Written
for an x-polarized pump; a pure y-pump is folded back onto this form by
relabeling the axes.
"""

from __future__ import annotations

import numpy as np

from .errors import NoFarDetunedPeak, PumpNotOnAxis
from .fiber import FiberParams, FrequencyGrid, PumpConfig
from .hb import Channel, SpectrumRecord, sinc, xi_hb


def _lb_sinc_argument(fiber: FiberParams, p0: float, omega):
    omega = np.asarray(omega, dtype=float)
    rate = (
        fiber.beta2 * omega**2
        - (2.0 / 3.0) * fiber.gamma * p0
        - 2.0 * fiber.delta_beta0
    )
    return rate * 0.5 * fiber.length


def xi_lb_yy(fiber: FiberParams, pump: PumpConfig, omega):
    """Orthogonal-channel amplitude for an x-polarized pump.

    Prefactor magnitude gamma*P0*L/3; the sinc argument
    (beta2*Omega^2 - (2/3)*gamma*P0 - 2*delta_beta0)*L/2 vanishes at the
    far-detuned phase-matching points when delta_beta0*beta2 > 0.
    """
    if pump.p0y != 0:
        raise PumpNotOnAxis(f"pump must be on the x axis, got p0y = {pump.p0y}")
    omega = np.asarray(omega, dtype=float)
    u = _lb_sinc_argument(fiber, pump.p0x, omega)
    prefactor = fiber.gamma * pump.p0x * fiber.length / 3.0
    values = 1j * prefactor * np.exp(1j * (2.0 * pump.theta0x - u)) * sinc(u)
    if values.ndim == 0:
        return complex(values)
    return values


def _as_x_pump(fiber: FiberParams, pump: PumpConfig) -> tuple[FiberParams, PumpConfig, bool]:
    """Relabel axes so the pump sits on x; flag whether a swap happened."""
    if pump.p0y == 0:
        return fiber, pump, False
    if pump.p0x != 0:
        raise PumpNotOnAxis(
            f"pump must be on a single axis, got ({pump.p0x}, {pump.p0y})"
        )
    relabeled_fiber = FiberParams(
        gamma=fiber.gamma,
        beta2=fiber.beta2,
        length=fiber.length,
        delta_beta0=-fiber.delta_beta0,
        delta_beta1=-fiber.delta_beta1,
        beta1_ref=fiber.beta1_ref + fiber.delta_beta1,
    )
    relabeled_pump = PumpConfig(
        p0x=pump.p0y,
        p0y=0.0,
        theta0x=pump.theta0y,
        theta0y=pump.theta0x,
        duration=pump.duration,
    )
    return relabeled_fiber, relabeled_pump, True


def flux_lb(fiber: FiberParams, pump: PumpConfig, omega):
    """Flux densities (f_x, f_y) in ps/rad for a single-axis pump.

    The pump axis carries the scalar spectrum |xi_xx|^2/2pi and the
    orthogonal axis |xi_yy|^2/2pi; the two perturbations are uncoupled, so
    neither spectrum depends on the pump phase.
    """
    fiber, pump, swapped = _as_x_pump(fiber, pump)
    scalar = np.abs(xi_hb(fiber, pump, Channel.XX, omega))
    vector = np.abs(xi_lb_yy(fiber, pump, omega))
    f_pump = scalar**2 / (2.0 * np.pi)
    f_orth = vector**2 / (2.0 * np.pi)
    if swapped:
        f_pump, f_orth = f_orth, f_pump
    if np.ndim(f_pump) == 0:
        return float(f_pump), float(f_orth)
    return f_pump, f_orth


def spectrum_lb(fiber: FiberParams, pump: PumpConfig, grid: FrequencyGrid) -> SpectrumRecord:
    """First-order LB spectrum record over a grid."""
    f_x, f_y = flux_lb(fiber, pump, grid.omegas)
    return SpectrumRecord(grid=grid, f_x=f_x, f_y=f_y, method="first-order", regime="LB")


def lb_peak_and_width(fiber: FiberParams, pump: PumpConfig) -> tuple[float, float]:
    """Detuning and first-zero width of the far orthogonal-axis peaks.

    detuning ~ sqrt(2*delta_beta0/beta2), width ~ (2*pi/L)/sqrt(2*beta2*delta_beta0).
    Both exist only when delta_beta0 and beta2 share a sign (slow-axis pump
    with normal dispersion, or fast-axis pump with anomalous dispersion).
    """
    fiber, pump, _ = _as_x_pump(fiber, pump)
    product = fiber.delta_beta0 * fiber.beta2
    if product <= 0:
        raise NoFarDetunedPeak(
            f"no real phase-matching detuning for delta_beta0*beta2 = {product}"
        )
    detuning = np.sqrt(2.0 * fiber.delta_beta0 / fiber.beta2)
    width = (2.0 * np.pi / fiber.length) / np.sqrt(2.0 * fiber.beta2 * fiber.delta_beta0)
    return float(detuning), float(width)
