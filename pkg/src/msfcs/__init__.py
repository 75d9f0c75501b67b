"""Coherent-state and semiclassical observables for charged particles in a
uniform magnetic field threaded by an idealized flux line."""

__version__ = "0.1.0"

from .params import FieldConfig, ParticleSpec, Species, decompose_flux, mu_sigma
from .qseries import (
    EvalPath,
    IndexSet,
    Regime,
    SeriesValue,
    delta_ratio,
    paths_agree,
    q_full,
    q_full_scaled,
    q_minus,
    q_minus_scaled,
    t_integral,
    varpi,
    weighted_sum,
    y_alpha,
    y_alpha_series,
)
from .coherent import CoherentState, ObservableSet, observables
from .semiclassics import classify_regime, compare_all

__all__ = [
    "FieldConfig",
    "ParticleSpec",
    "Species",
    "decompose_flux",
    "mu_sigma",
    "EvalPath",
    "IndexSet",
    "Regime",
    "SeriesValue",
    "delta_ratio",
    "paths_agree",
    "q_full",
    "q_full_scaled",
    "q_minus",
    "q_minus_scaled",
    "t_integral",
    "varpi",
    "weighted_sum",
    "y_alpha",
    "y_alpha_series",
    "CoherentState",
    "ObservableSet",
    "observables",
    "classify_regime",
    "compare_all",
    "__version__",
]
