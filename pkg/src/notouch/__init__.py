"""Linear-optical preparation of arbitrary three-qubit states.

Three independent particles, a ten-path interferometer and coincidence
post-selection give any three-qubit state with probability 1/18, for
bosons, fermions and hard-core anyons alike.  The SLOCC module provides the
filtering baseline whose success probability can vanish.
"""

from .fock_algebra import (
    BOSONS,
    FERMIONS,
    ExchangeStatistics,
    OperatorPolynomial,
    multiply,
    normal_order,
    substitute_modes,
    transition_amplitude_oracle,
)
from .interferometer import (
    build_fixed_stages,
    build_output_stage,
    complete_to_unitary,
)
from .protocol import (
    PostSelectionResult,
    ProtocolParams,
    prepare,
    run,
    solve_params,
)
from .schmidt_canonical import (
    CanonicalParams,
    ThreeQubitState,
    decompose,
    random_state,
    reconstruct,
)
from .slocc_benchmark import (
    GhzClassParams,
    SloccOperator,
    ghz_class_state,
    slocc_operator,
    success_probability,
    sweep,
)

__version__ = "0.1.0"
