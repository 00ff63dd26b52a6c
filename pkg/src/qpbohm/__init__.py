"""Quasiprobability toolkit: weak values, alpha-mixed distributions,
guided 1-D trajectories, and hidden-state model classification."""

from .alpha import alpha_commut_defect, alpha_product, as_alpha, parse_alpha
from .bohm import (
    BohmConfig,
    Grid1D,
    TrajectoryEnsemble,
    ValueField,
    WaveFunction,
    build_hamiltonian,
    ensemble_average,
    equivariance_check,
    evolve,
    integrate_trajectories,
    local_value,
    momentum_operator,
    position_operator,
    sample_initial_positions,
    velocity_field,
)
from .errors import (
    DimMismatch,
    GridMismatch,
    NodeEncounter,
    NonHermitian,
    NotProjector,
    OrthogonalPrePost,
    QpbohmError,
    SolverFailure,
    WrongKind,
    ZeroDensityPoint,
)
from .hilbert import (
    DensityOperator,
    Observable,
    SpectralDecomposition,
    StateVector,
    expectation,
    inner,
    projector_onto,
    spectral_decompose,
    tensor,
)
from .ontology import (
    BipartiteQP,
    OntModel,
    SynlogicalityReport,
    alt_joint_qp,
    bayes_check,
    bohmian_grid_model,
    classical_toy_model,
    classify_synlogicality,
    correlation,
    epistemic_state,
    indicator_functions,
    joint_table,
    os_toy_model,
    psi_epistemic_witness,
    reproduction_check,
    two_particle_joint_qp,
)
from .quasiprob import (
    DeterministicReferenceReport,
    FunctionalConditionsReport,
    OutcomeSet,
    QPDistribution,
    born_probabilities,
    check_functional_conditions,
    commutator_asymmetry,
    conditional_qp,
    deterministic_reference_check,
    joint_qp,
    marginal_qp,
    projector_qp_value,
    qp_of_set,
    weak_value,
    weak_value_from_qp,
)

__version__ = "0.1.0"
