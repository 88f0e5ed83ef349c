"""Variational Gaussian wave packets in magnetic fields."""

import json as _json

from ._core import (
    CanonicalState,
    Diagnostics,
    Field,
    GwpError,
    GwpValidationError,
    L2Result,
    ParameterErrors,
    PenningScalingResult,
    RunOutput,
    TrapParameters,
    WavePacketState,
    __version__,
    diagnostics,
    electron_trap,
    energy,
    l2_distance,
    l2_norm_squared,
    parameter_errors,
    penning_coherent_initial,
    penning_field,
    penning_initial,
    penning_scaling,
    preset_json,
    preset_names,
    proton_trap,
    run_experiment_json,
    run_trajectory,
    sublinear_initial,
    to_canonical,
    trig_field,
)

__all__ = [
    "CanonicalState",
    "Diagnostics",
    "Field",
    "GwpError",
    "GwpValidationError",
    "L2Result",
    "ParameterErrors",
    "PenningScalingResult",
    "RunOutput",
    "TrapParameters",
    "WavePacketState",
    "__version__",
    "diagnostics",
    "electron_trap",
    "energy",
    "l2_distance",
    "l2_norm_squared",
    "parameter_errors",
    "penning_coherent_initial",
    "penning_field",
    "penning_initial",
    "penning_scaling",
    "preset",
    "preset_json",
    "preset_names",
    "proton_trap",
    "run_experiment",
    "run_experiment_json",
    "run_trajectory",
    "sublinear_initial",
    "to_canonical",
    "trig_field",
]


def preset(name):
    """Return a named experiment specification as a dictionary."""
    return _json.loads(preset_json(name))


def run_experiment(spec, jobs=1):
    """Run a convergence experiment from a spec dict or JSON string.

    Returns the summary as a dictionary with ``runs`` and ``slopes``.
    """
    text = spec if isinstance(spec, str) else _json.dumps(spec)
    return _json.loads(run_experiment_json(text, jobs))
