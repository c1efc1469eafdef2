"""Deterministic command-line front end.

Subcommands: spectrum (flux-density sweeps as CSV), compare (first-order
vs exact deviation report as JSON), classify (filtered-pair entanglement
report as JSON), mi (gain curve as CSV), presets (list built-in parameter
sets).  Output formatting is fixed (9 significant digits, '.' decimal,
'\\n' line endings, ordered rows), so repeated runs are byte-identical
regardless of worker count.

Exit codes: 0 success, 2 input validation, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    bandwidth_ratio,
    exact_lb_orthogonal_flux,
    exact_scalar_flux,
    flux_from_matrices,
    integrate_transfer_grid,
    mi_gain_curve,
)
from .entangle import BASIS, bell_phase, classify, filtered_state
from .errors import FpsError, StepCountTooSmall
from .fiber import FiberParams, FrequencyGrid, PumpConfig, normalize_convention
from .hb import spectrum_hb
from .lb import _as_x_pump, spectrum_lb

METHOD_ORDER = ("first-order", "exact-ode", "closed-form")


class ScenarioError(ValueError):
    """Scenario schema or constraint violation; maps to exit code 2."""


@dataclass(frozen=True)
class Scenario:
    fiber: FiberParams
    pump: PumpConfig
    grid: FrequencyGrid
    regime: str
    lengths: tuple[float, ...]
    method: str


#: Scenario schema: key -> (converter, required, default).
_SCHEMA = {
    "fiber.gamma_per_W_km": (float, True, None),
    "fiber.beta2_ps2_per_km": (float, True, None),
    "fiber.delta_beta0_per_km": (float, False, 0.0),
    "fiber.delta_beta1_ps_per_km": (float, False, 0.0),
    "fiber.length_km": (float, True, None),
    "pump.p0x_W": (float, False, 0.0),
    "pump.p0y_W": (float, False, 0.0),
    "pump.theta0x_rad": (float, False, 0.0),
    "pump.theta0y_rad": (float, False, 0.0),
    "pump.duration_ps": (float, False, None),
    "grid.omega_min": (float, True, None),
    "grid.omega_max": (float, True, None),
    "grid.n_points": (int, True, None),
    "regime": (str, True, None),
    "method": (str, False, "first-order"),
    "lengths_km": (list, False, None),
}

#: Built-in parameter sets mirroring the reference spectra.  Symmetric
#: grids with even point counts keep Omega = 0 off the grid.
PRESETS: dict[str, dict] = {
    "fig1a": {
        "fiber.gamma_per_W_km": 3.0,
        "fiber.beta2_ps2_per_km": -20.0,
        "fiber.delta_beta0_per_km": 0.0,
        "fiber.delta_beta1_ps_per_km": 0.0,
        "fiber.length_km": 0.1,
        "pump.p0x_W": 0.3,
        "pump.p0y_W": 0.0,
        "pump.theta0x_rad": 0.0,
        "pump.theta0y_rad": 0.0,
        "pump.duration_ps": 100.0,
        "grid.omega_min": -2.0,
        "grid.omega_max": 2.0,
        "grid.n_points": 500,
        "regime": "HB",
        "method": "all",
        "lengths_km": [0.1, 0.2, 0.3],
    },
    "fig2": {
        "fiber.gamma_per_W_km": 3.0,
        "fiber.beta2_ps2_per_km": 15.0,
        "fiber.delta_beta0_per_km": 0.0,
        "fiber.delta_beta1_ps_per_km": 200.0,
        "fiber.length_km": 0.2,
        "pump.p0x_W": 0.15,
        "pump.p0y_W": 0.15,
        "pump.theta0x_rad": 0.0,
        "pump.theta0y_rad": 0.0,
        "pump.duration_ps": 100.0,
        "grid.omega_min": -15.0,
        "grid.omega_max": 15.0,
        "grid.n_points": 600,
        "regime": "HB",
        "method": "first-order",
        "lengths_km": [0.1, 0.2, 0.3],
    },
    "fig3": {
        "fiber.gamma_per_W_km": 36.0,
        "fiber.beta2_ps2_per_km": -139.0,
        "fiber.delta_beta0_per_km": 0.0,
        "fiber.delta_beta1_ps_per_km": 400.0,
        "fiber.length_km": 0.00015,
        "pump.p0x_W": 20.0,
        "pump.p0y_W": 20.0,
        "pump.theta0x_rad": 0.0,
        "pump.theta0y_rad": 0.0,
        "pump.duration_ps": 100.0,
        "grid.omega_min": -10.0,
        "grid.omega_max": 10.0,
        "grid.n_points": 400,
        "regime": "HB",
        "method": "exact-ode",
        "lengths_km": [0.00015, 0.0003, 0.00045],
    },
    "fig4a": {
        "fiber.gamma_per_W_km": 3.0,
        "fiber.beta2_ps2_per_km": 5.0,
        "fiber.delta_beta0_per_km": 2000.0,
        "fiber.delta_beta1_ps_per_km": 0.0,
        "fiber.length_km": 0.15,
        "pump.p0x_W": 1.0,
        "pump.p0y_W": 0.0,
        "pump.theta0x_rad": 0.0,
        "pump.theta0y_rad": 0.0,
        "pump.duration_ps": 100.0,
        "grid.omega_min": -32.0,
        "grid.omega_max": 32.0,
        "grid.n_points": 640,
        "regime": "LB",
        "method": "first-order",
        "lengths_km": [0.05, 0.1, 0.15],
    },
}
PRESETS["fig1b"] = {**PRESETS["fig1a"], "fiber.beta2_ps2_per_km": 20.0}
PRESETS["fig4b"] = {
    **PRESETS["fig4a"],
    "fiber.beta2_ps2_per_km": -5.0,
    "fiber.delta_beta0_per_km": -2000.0,
}


def _flatten(obj: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in obj.items():
        full = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, full + "."))
        else:
            flat[full] = value
    return flat


def load_scenario(flat: dict) -> tuple[Scenario, dict]:
    """Validate a flat key/value mapping into a Scenario.

    Returns the scenario together with the resolved flat mapping (defaults
    filled in, axis convention normalized) used for provenance headers.
    """
    unknown = sorted(set(flat) - set(_SCHEMA))
    if unknown:
        raise ScenarioError(f"unknown scenario field(s): {', '.join(unknown)}")
    resolved = {}
    for key, (convert, required, default) in _SCHEMA.items():
        if key in flat and flat[key] is not None:
            value = flat[key]
            try:
                if convert is list:
                    value = [float(entry) for entry in value]
                elif convert is int:
                    if float(value) != int(value):
                        raise ValueError
                    value = int(value)
                elif convert is float:
                    value = float(value)
                    if not math.isfinite(value):
                        raise ValueError
                else:
                    value = str(value)
            except (TypeError, ValueError):
                raise ScenarioError(f"field {key}: cannot parse {flat[key]!r}") from None
            resolved[key] = value
        elif required:
            raise ScenarioError(f"missing required scenario field: {key}")
        else:
            resolved[key] = default
    if resolved["regime"] not in ("HB", "LB"):
        raise ScenarioError(f"field regime: must be HB or LB, got {resolved['regime']!r}")
    if resolved["method"] not in METHOD_ORDER + ("all",):
        raise ScenarioError(
            f"field method: must be one of {', '.join(METHOD_ORDER + ('all',))}"
        )
    if resolved["lengths_km"] is None:
        resolved["lengths_km"] = [resolved["fiber.length_km"]]
    if not resolved["lengths_km"] or any(l <= 0 for l in resolved["lengths_km"]):
        raise ScenarioError("field lengths_km: must be a nonempty list of positive lengths")
    if resolved["fiber.gamma_per_W_km"] <= 0:
        raise ScenarioError("field fiber.gamma_per_W_km: must be > 0")
    if resolved["fiber.length_km"] <= 0:
        raise ScenarioError("field fiber.length_km: must be > 0")
    if resolved["pump.p0x_W"] < 0 or resolved["pump.p0y_W"] < 0:
        raise ScenarioError("field pump.p0x_W/p0y_W: powers must be >= 0")
    if resolved["pump.p0x_W"] + resolved["pump.p0y_W"] <= 0:
        raise ScenarioError("field pump.p0x_W/p0y_W: total pump power must be > 0")
    if resolved["pump.duration_ps"] is not None and resolved["pump.duration_ps"] <= 0:
        raise ScenarioError("field pump.duration_ps: must be > 0")
    try:
        fiber = FiberParams(
            gamma=resolved["fiber.gamma_per_W_km"],
            beta2=resolved["fiber.beta2_ps2_per_km"],
            length=resolved["fiber.length_km"],
            delta_beta0=resolved["fiber.delta_beta0_per_km"],
            delta_beta1=resolved["fiber.delta_beta1_ps_per_km"],
        )
        pump = PumpConfig(
            p0x=resolved["pump.p0x_W"],
            p0y=resolved["pump.p0y_W"],
            theta0x=resolved["pump.theta0x_rad"],
            theta0y=resolved["pump.theta0y_rad"],
            duration=resolved["pump.duration_ps"],
        )
        grid = FrequencyGrid(
            omega_min=resolved["grid.omega_min"],
            omega_max=resolved["grid.omega_max"],
            n_points=resolved["grid.n_points"],
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    if fiber.delta_beta1 < 0:
        fiber, pump = normalize_convention(fiber, pump)
        resolved["fiber.delta_beta0_per_km"] = fiber.delta_beta0
        resolved["fiber.delta_beta1_ps_per_km"] = fiber.delta_beta1
        resolved["pump.p0x_W"], resolved["pump.p0y_W"] = pump.p0x, pump.p0y
        resolved["pump.theta0x_rad"], resolved["pump.theta0y_rad"] = (
            pump.theta0x,
            pump.theta0y,
        )
    if resolved["regime"] == "LB" and pump.p0x != 0 and pump.p0y != 0:
        raise ScenarioError("regime LB requires the pump on a single axis")
    scenario = Scenario(
        fiber=fiber,
        pump=pump,
        grid=grid,
        regime=resolved["regime"],
        lengths=tuple(resolved["lengths_km"]),
        method=resolved["method"],
    )
    return scenario, resolved


def _fmt(value) -> str:
    """Fixed 9-significant-digit decimal rendering."""
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(entry) for entry in value)
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".9g")


def _resolve_scenario(args) -> tuple[Scenario, dict, list[str]]:
    if args.preset is not None and args.scenario is not None:
        raise ScenarioError("give either --preset or --scenario, not both")
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise ScenarioError(
                f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        flat = dict(PRESETS[args.preset])
        origin = [f"# preset = {args.preset}"]
    elif args.scenario is not None:
        try:
            with open(args.scenario, encoding="utf-8") as handle:
                raw = json.load(handle)
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario file is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ScenarioError("scenario file must contain a JSON object")
        flat = _flatten(raw)
        origin = [f"# scenario = {args.scenario}"]
    else:
        raise ScenarioError("a scenario is required: give --preset or --scenario")
    method = getattr(args, "method", None)
    if method is not None:
        flat["method"] = method
    scenario, resolved = load_scenario(flat)
    return scenario, resolved, origin


def _header_lines(command: str, origin: list[str], resolved: dict) -> list[str]:
    lines = [f"# fps {command}"]
    lines.extend(origin)
    for key in _SCHEMA:
        lines.append(f"# {key} = {_fmt(resolved[key])}")
    lines.append("# units = omega rad/ps, flux ps/rad, gain 1/km, length km")
    return lines


def _first_order_record(scenario: Scenario, fiber: FiberParams):
    if scenario.regime == "LB":
        return spectrum_lb(fiber, scenario.pump, scenario.grid)
    return spectrum_hb(fiber, scenario.pump, scenario.grid)


def _closed_form_flux(scenario: Scenario, fiber: FiberParams):
    pump = scenario.pump
    omegas = scenario.grid.omegas
    if scenario.regime == "LB":
        fiber_x, pump_x, swapped = _as_x_pump(fiber, pump)
        f_pump = exact_scalar_flux(fiber_x, pump_x.p0x, omegas)
        f_orth = exact_lb_orthogonal_flux(fiber_x, pump_x.p0x, omegas)
        return (f_orth, f_pump) if swapped else (f_pump, f_orth)
    if pump.p0x != 0 and pump.p0y != 0:
        raise ScenarioError(
            "closed-form method requires a single-axis pump in the HB regime"
        )
    zeros = np.zeros_like(omegas)
    if pump.p0y == 0:
        return exact_scalar_flux(fiber, pump.p0x, omegas), zeros
    return zeros, exact_scalar_flux(fiber, pump.p0y, omegas)


def _spectrum_task(scenario: Scenario, method: str, length: float, steps: int | None):
    """Compute one (method, L) slice; returns (extra header lines, f_x, f_y)."""
    fiber = replace(scenario.fiber, length=length)
    extra: list[str] = []
    if method == "first-order":
        record = _first_order_record(scenario, fiber)
        f_x, f_y = record.f_x, record.f_y
    elif method == "exact-ode":
        pump = scenario.pump
        if scenario.regime == "LB":
            fiber, pump, swapped = _as_x_pump(fiber, pump)
        else:
            swapped = False
        matrices, used_steps = integrate_transfer_grid(
            fiber, pump, scenario.regime, scenario.grid.omegas, steps=steps
        )
        f_x, f_y = flux_from_matrices(matrices)
        if swapped:
            f_x, f_y = f_y, f_x
        extra.append(f"# steps.L={_fmt(length)} = {used_steps}")
    else:
        f_x, f_y = _closed_form_flux(scenario, fiber)
    return extra, f_x, f_y


def run_spectrum(scenario: Scenario, resolved: dict, origin: list[str], args) -> str:
    methods = METHOD_ORDER if scenario.method == "all" else (scenario.method,)
    if scenario.method == "all" and scenario.regime == "HB":
        if scenario.pump.p0x != 0 and scenario.pump.p0y != 0:
            methods = ("first-order", "exact-ode")
    tasks = [(method, length) for method in methods for length in scenario.lengths]
    workers = max(1, args.workers)
    if workers == 1:
        results = [
            _spectrum_task(scenario, method, length, args.steps) for method, length in tasks
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda task: _spectrum_task(scenario, task[0], task[1], args.steps),
                    tasks,
                )
            )
    lines = _header_lines("spectrum", origin, resolved)
    for extra, _, _ in results:
        lines.extend(extra)
    lines.append("omega_rad_per_ps,f_x,f_y,method,L_km")
    omegas = scenario.grid.omegas
    for (method, length), (_, f_x, f_y) in zip(tasks, results):
        for omega, fx_val, fy_val in zip(omegas, f_x, f_y):
            lines.append(
                f"{_fmt(omega)},{_fmt(fx_val)},{_fmt(fy_val)},{method},{_fmt(length)}"
            )
    return "\n".join(lines) + "\n"


def run_compare(scenario: Scenario, resolved: dict, origin: list[str], args) -> str:
    comparisons = []
    deviations = []
    for length in scenario.lengths:
        _, fo_x, fo_y = _spectrum_task(scenario, "first-order", length, None)
        _, ex_x, ex_y = _spectrum_task(scenario, "exact-ode", length, args.steps)
        peak = max(float(np.max(ex_x)), float(np.max(ex_y)))
        if peak == 0:
            raise ScenarioError("exact spectrum is identically zero; nothing to compare")
        dev_x = np.abs(fo_x - ex_x) / peak
        dev_y = np.abs(fo_y - ex_y) / peak
        max_dev = float(max(dev_x.max(), dev_y.max()))
        mean_dev = float(np.concatenate([dev_x, dev_y]).mean())
        deviations.append(max_dev)
        comparisons.append(
            {
                "L_km": length,
                "peak_flux": peak,
                "max_rel_dev": max_dev,
                "mean_rel_dev": mean_dev,
            }
        )
    report = {
        "command": "compare",
        "scenario": {key: resolved[key] for key in _SCHEMA},
        "comparisons": comparisons,
        "deviation_increases_with_length": all(
            a < b for a, b in zip(deviations, deviations[1:])
        ),
    }
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run_classify(scenario: Scenario, resolved: dict, origin: list[str], args) -> str:
    duration = args.duration
    if duration is None:
        duration = scenario.pump.duration
    if duration is None:
        raise ScenarioError("classify needs --duration or pump.duration_ps")
    try:
        state = filtered_state(
            scenario.fiber, scenario.pump, scenario.regime, args.omega, duration
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    report = classify(state, tol=args.tol)
    payload = {
        "command": "classify",
        "scenario": {key: resolved[key] for key in _SCHEMA},
        "omega_rad_per_ps": args.omega,
        "duration_ps": duration,
        "classification": report.classification,
        "concurrence": report.concurrence,
        "relative_phase_rad": None
        if math.isnan(report.relative_phase)
        else report.relative_phase,
        "bell_phase_rad": bell_phase(scenario.pump),
        "generation_probability": state.generation_probability,
        "coeff_abs2": {
            label: float(abs(coeff) ** 2) for label, coeff in zip(BASIS, state.coeffs)
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run_mi(scenario: Scenario, resolved: dict, origin: list[str], args) -> str:
    power = scenario.pump.total
    curve = mi_gain_curve(scenario.fiber, power, scenario.grid)
    lines = _header_lines("mi", origin, resolved)
    lines.append(f"# pump_total_W = {_fmt(power)}")
    lines.append(
        "# bandwidth_ratio = "
        f"{_fmt(bandwidth_ratio(scenario.fiber, power, scenario.fiber.length))}"
    )
    lines.append("omega_rad_per_ps,gain_per_km,lambda_re_per_km,lambda_im_per_km")
    for omega, gain, lam in zip(curve.grid.omegas, curve.gain_vals, curve.lambda_vals):
        lines.append(f"{_fmt(omega)},{_fmt(gain)},{_fmt(lam.real)},{_fmt(lam.imag)}")
    return "\n".join(lines) + "\n"


def run_presets(args) -> str:
    if args.name is not None:
        if args.name not in PRESETS:
            raise ScenarioError(
                f"unknown preset {args.name!r}; available: {', '.join(sorted(PRESETS))}"
            )
        selected = {args.name: PRESETS[args.name]}
    else:
        selected = {name: PRESETS[name] for name in sorted(PRESETS)}
    return json.dumps(selected, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fps",
        description="Photon-pair spectra and modulation-instability gain "
        "for four-photon scattering in birefringent fibers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_method: bool = True) -> None:
        p.add_argument("--scenario", help="JSON scenario file")
        p.add_argument("--preset", help="built-in parameter set name")
        p.add_argument("--out", help="output file (default: stdout)")
        if with_method:
            p.add_argument(
                "--method",
                choices=METHOD_ORDER + ("all",),
                help="override the scenario method",
            )
        p.add_argument(
            "--steps", type=int, help="fixed RK4 step count for exact-ode runs"
        )

    p_spectrum = sub.add_parser("spectrum", help="flux-density sweep as CSV")
    add_common(p_spectrum)
    p_spectrum.add_argument(
        "--workers", type=int, default=1, help="parallel (method, length) tasks"
    )

    p_compare = sub.add_parser("compare", help="first-order vs exact deviations as JSON")
    add_common(p_compare, with_method=False)

    p_classify = sub.add_parser("classify", help="filtered-pair entanglement report")
    add_common(p_classify, with_method=False)
    p_classify.add_argument("--omega", type=float, required=True, help="detuning rad/ps")
    p_classify.add_argument("--duration", type=float, help="pump duration ps")
    p_classify.add_argument(
        "--tol", type=float, default=1e-3, help="significance threshold on |c|^2"
    )

    p_mi = sub.add_parser("mi", help="modulation-instability gain curve as CSV")
    add_common(p_mi, with_method=False)

    p_presets = sub.add_parser("presets", help="list built-in parameter sets")
    p_presets.add_argument("--name", help="show a single preset")
    p_presets.add_argument("--out", help="output file (default: stdout)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "presets":
            text = run_presets(args)
        else:
            scenario, resolved, origin = _resolve_scenario(args)
            runner = {
                "spectrum": run_spectrum,
                "compare": run_compare,
                "classify": run_classify,
                "mi": run_mi,
            }[args.command]
            text = runner(scenario, resolved, origin, args)
    except ScenarioError as exc:
        print(f"fps: error: {exc}", file=sys.stderr)
        return 2
    except StepCountTooSmall as exc:
        print(f"fps: numerical failure: {exc}", file=sys.stderr)
        return 3
    except FpsError as exc:
        print(f"fps: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
