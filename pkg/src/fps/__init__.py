"""Photon-pair spectra, entanglement structure, and modulation-instability
gain for spontaneous four-photon scattering in birefringent fibers.

Working units are {km, ps, W, rad} throughout: gamma in 1/(W km), beta2 in
ps^2/km, delta_beta1 in ps/km, delta_beta0 in 1/km, detunings Omega in
rad/ps, spectral flux densities in ps/rad.
"""

from .dynamics import (
    AsymptoticFlux,
    GainCurve,
    TransferMatrix,
    bandwidth_ratio,
    build_coefficient_matrix,
    exact_lb_orthogonal_flux,
    exact_scalar_flux,
    flux_from_matrices,
    flux_from_transfer,
    integrate_transfer,
    integrate_transfer_grid,
    lambda_param,
    mi_asymptotic_flux,
    mi_gain,
    mi_gain_curve,
    mi_peak,
    mi_support_edge,
    spectrum_exact,
    symplectic_defect,
)
from .entangle import (
    BASIS,
    BELL_CONCURRENCE_MIN,
    EntanglementReport,
    FilteredPairState,
    SecondOrderResult,
    bell_phase,
    classify,
    concurrence,
    filtered_state,
    second_order_quantities,
)
from .errors import (
    DegenerateBirefringence,
    EmptyState,
    FpsError,
    NoFarDetunedPeak,
    PumpNotOnAxis,
    StepCountTooSmall,
    StimulatedOrderingWarning,
    ZeroDispersion,
    ZeroGain,
    ZeroPower,
)
from .fiber import (
    FiberParams,
    FrequencyGrid,
    PumpConfig,
    alpha_param,
    beta,
    cpm_phase,
    nonlinear_length,
    normalize_convention,
)
from .hb import (
    Channel,
    SpectrumRecord,
    TwoPhotonAmplitude,
    amplitude_on_grid,
    bandwidths,
    flux_hb,
    overlapping_regime,
    pair_probability_density,
    scalar_flux_first_order,
    spectrum_hb,
    total_scatter_probability,
    vector_peak_detuning,
    xi_hb,
)
from .lb import flux_lb, lb_peak_and_width, spectrum_lb, xi_lb_yy

__version__ = "0.1.0"

__all__ = [
    "AsymptoticFlux",
    "BASIS",
    "BELL_CONCURRENCE_MIN",
    "Channel",
    "DegenerateBirefringence",
    "EmptyState",
    "EntanglementReport",
    "FiberParams",
    "FilteredPairState",
    "FpsError",
    "FrequencyGrid",
    "GainCurve",
    "NoFarDetunedPeak",
    "PumpConfig",
    "PumpNotOnAxis",
    "SecondOrderResult",
    "SpectrumRecord",
    "StepCountTooSmall",
    "StimulatedOrderingWarning",
    "TransferMatrix",
    "TwoPhotonAmplitude",
    "ZeroDispersion",
    "ZeroGain",
    "ZeroPower",
    "alpha_param",
    "amplitude_on_grid",
    "bandwidth_ratio",
    "bandwidths",
    "bell_phase",
    "beta",
    "build_coefficient_matrix",
    "classify",
    "concurrence",
    "cpm_phase",
    "exact_lb_orthogonal_flux",
    "exact_scalar_flux",
    "filtered_state",
    "flux_from_matrices",
    "flux_from_transfer",
    "flux_hb",
    "flux_lb",
    "integrate_transfer",
    "integrate_transfer_grid",
    "lambda_param",
    "lb_peak_and_width",
    "mi_asymptotic_flux",
    "mi_gain",
    "mi_gain_curve",
    "mi_peak",
    "mi_support_edge",
    "nonlinear_length",
    "normalize_convention",
    "overlapping_regime",
    "pair_probability_density",
    "scalar_flux_first_order",
    "second_order_quantities",
    "spectrum_exact",
    "spectrum_hb",
    "spectrum_lb",
    "symplectic_defect",
    "total_scatter_probability",
    "vector_peak_detuning",
    "xi_hb",
    "xi_lb_yy",
]
