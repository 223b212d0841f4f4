"""Quantum-like representation of probabilistic data for two dichotomous observables."""
__version__ = "0.1.0"

from .probmodel import (  # noqa: E402
    Classification,
    ContextData,
    InterferenceProfile,
    Orientation,
    TransitionMatrix,
    classical_ftp,
    interference_coefficients,
    validate_transition,
)
from .engine import (  # noqa: E402
    Basis,
    QLState,
    born_residuals,
    build_state,
    conjugate_basis,
    expand_in_conjugate_basis,
)
from .equivalence import (  # noqa: E402
    EquivalenceReport,
    MatchKind,
    UnitaryMap,
    phase_equivalent,
    proof_identity_suite,
    theorem_check,
    unitary_map,
)
from .datagen import (  # noqa: E402
    CountTable,
    GeneratedInstance,
    GenerationConstraints,
    generate,
    generate_batch,
    simulate_counts,
)
from .estimator import FrequencyEstimator, QuantumLikeRepresentation  # noqa: E402
