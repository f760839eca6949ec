"""Quantum frequency conversion of entangled photons via Raman-driven
molecular modulation in a gas-filled hollow-core fiber.

Layers: :mod:`~qfcsim.params` derives physical constants from an experiment
card, :mod:`~qfcsim.srs` integrates the coherence buildup along the fiber,
:mod:`~qfcsim.conversion` evolves the entangled photon state against that
coherence, :mod:`~qfcsim.bloch` and :mod:`~qfcsim.oracle` provide the exact
finite-N machinery that validates the semiclassical treatment, and
:mod:`~qfcsim.cli` is the command-line front end.
"""

from .params import (
    ConfigError,
    DerivedParams,
    ExperimentConfig,
    derive_params,
    load_config,
)
from .srs import FieldProfile, propagate_fields
from .conversion import (
    ConversionTrace,
    concurrence_closed_form,
    conversion_trace,
    entanglement_of_formation,
    evolve_bell,
    photon_numbers,
    wootters_concurrence,
)
from .oracle import (
    ReducedCoefficients,
    brute_force_coefficients,
    exact_coefficients,
    first_order_correction,
    semiclassical_gap,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "DerivedParams",
    "load_config",
    "derive_params",
    "FieldProfile",
    "propagate_fields",
    "ConversionTrace",
    "conversion_trace",
    "evolve_bell",
    "photon_numbers",
    "wootters_concurrence",
    "concurrence_closed_form",
    "entanglement_of_formation",
    "ReducedCoefficients",
    "exact_coefficients",
    "brute_force_coefficients",
    "semiclassical_gap",
    "first_order_correction",
    "__version__",
]
