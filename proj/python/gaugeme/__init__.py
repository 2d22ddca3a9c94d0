"""Gauge-dependent emission rates and two-level open-system dynamics."""

from ._core import (
    DensityMatrix,
    DissipatorMatrix,
    EvolveOptions,
    EvolveResult,
    GaugeRepresentation,
    LindbladDecomposition,
    PhysicalParams,
    PositivityReport,
    RateOptions,
    RateSet,
    Scenario,
    SteadyEmission,
    TrajectoryOptions,
    TrajectoryResult,
    __version__,
    a_plus_closed_form,
    build_dissipator,
    build_dissipator_from_values,
    compute_rate_set,
    cross_coefficient,
    cross_coefficient_approx,
    cross_coefficient_bound,
    diagonalize,
    emission_rate,
    evolve,
    gamma_from_dipole,
    load_scenario,
    parse_scenario,
    positivity_bound_scan,
    positivity_check,
    preset,
    preset_names,
    serialize_scenario,
    simulate_trajectories,
    spectral_weight,
    steady_emission_rate,
    steady_state,
    transition_rate,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
