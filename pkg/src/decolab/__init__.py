"""Desk-scale open-quantum-system simulations.

Two single-oscillator system-bath models with qualitatively different
decoherence: an energy-coupled bath that dephases number-state
superpositions without damping (solved exactly), and a velocity-coupled
bath whose weak-coupling limit is two-photon damping (integrated as a
Lindblad master equation), together with a classical Langevin ensemble
counterpart and the phase-space observables used to compare them.
"""

from .errors import (
    ConfigError,
    CoverageError,
    DecolabError,
    DomainError,
    NoFringeError,
    QuadratureError,
    StabilityError,
    StepError,
    TruncationError,
)
from .fock_core import (
    DensityMatrix,
    FockSpace,
    Operator,
    annihilation,
    beta_for_occupation,
    cat_density,
    coherent_state,
    creation,
    default_dim,
    displacement,
    number_operator,
    parity_expectation,
    parity_operator,
    thermal_occupation,
    truncation_deficit,
)
from .gravity_exact import (
    GravityBathParams,
    decay_function,
    decoherence_exponent,
    decoherence_integral_oracle,
    evolve_density,
    steady_state,
)
from .langevin_sde import (
    SdeParams,
    TrajectoryEnsemble,
    run_ensemble,
    step_nonrwa,
    step_rwa,
    theta_for_occupation,
    trajectory_rng,
)
from .lindblad_qed import (
    EvolutionResult,
    Liouvillian,
    QedParams,
    build_single_photon,
    build_two_photon,
    evolve,
    free_rotation,
    moment_residual,
    moment_series,
    stable_dt,
)
from .phase_space import (
    FringeReading,
    PhaseSpaceGrid,
    PositionDensity,
    WignerField,
    fringe_visibility,
    hermite_functions,
    negativity_volume,
    position_density,
    visibility,
    wigner,
    wigner_marginal,
)

__version__ = "0.1.0"
