"""Quantized torus systems: spectra, control propagators, holonomies and the verify battery."""

from ._core import (
    BandwidthError,
    Config,
    ConfigError,
    DimensionError,
    PreconditionError,
    SplitViolation,
    TorusModel,
    action_operator,
    classical,
    evolve,
    evolve_control,
    hamiltonian_operator,
    holonomy,
    load_config,
    parse_config,
    spectrum,
    verify,
)

__all__ = [
    "BandwidthError",
    "Config",
    "ConfigError",
    "DimensionError",
    "PreconditionError",
    "SplitViolation",
    "TorusModel",
    "action_operator",
    "classical",
    "evolve",
    "evolve_control",
    "hamiltonian_operator",
    "holonomy",
    "load_config",
    "parse_config",
    "spectrum",
    "verify",
]
