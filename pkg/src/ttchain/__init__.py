"""Tensor-train quantum dynamics for exciton-phonon chains."""

from .hamiltonian import (
    COUPLED,
    EXCITON,
    PHONON,
    ChainParameters,
    EffectiveFrequencies,
    ModelError,
    SlimComponents,
    assemble_operator,
    build_slim,
    chain_operator,
    effective_frequencies,
    ladder_matrices,
    local_site_dimension,
)
from .observables import (
    InitialStateSpec,
    MetricsReport,
    build_initial_state,
    coherent_state,
    displacement,
    energy,
    expectation,
    rmsd_metrics,
    site_population,
)
from .propagators import (
    PropagatorConfig,
    UnstableStepError,
    make_propagator,
)
from .tt import (
    TensorTrainError,
    TensorTrainOperator,
    TensorTrainState,
    TruncationPolicy,
    add,
    apply_operator,
    inner_product,
    norm,
    product_state,
    truncate,
)

__version__ = "0.1.0"

__all__ = [
    "COUPLED", "EXCITON", "PHONON",
    "ChainParameters", "EffectiveFrequencies", "ModelError", "SlimComponents",
    "assemble_operator", "build_slim", "chain_operator", "effective_frequencies",
    "ladder_matrices", "local_site_dimension",
    "InitialStateSpec", "MetricsReport", "build_initial_state", "coherent_state",
    "displacement", "energy", "expectation", "rmsd_metrics", "site_population",
    "PropagatorConfig", "UnstableStepError", "make_propagator",
    "TensorTrainError", "TensorTrainOperator", "TensorTrainState", "TruncationPolicy",
    "add", "apply_operator", "inner_product", "norm", "product_state", "truncate",
    "__version__",
]
