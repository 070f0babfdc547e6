"""qsimflow: composable hybrid quantum/classical simulation workflows.

A small library for programming hybrid simulations as model + workflow +
evaluator + validation, with a built-in statevector backend, first-order
Trotter dynamics, VQE, and QAOA, plus exact dense oracles for checking all
of it at desk scale.
"""

from .ansatz import TrotterSpec, qaoa_circuit, state_prep, trotter_evolution, trotter_step
from .backend import (
    ShotCounts,
    StatevectorBackend,
    derive_seed,
    get_backend,
    register_backend,
)
from .circuits import (
    Circuit,
    Gate,
    GateKind,
    ParameterRef,
    basis_change,
    embed_operator,
    unitary_of,
)
from .errors import QsimflowError
from .evaluator import EvaluatorConfig, evaluate, term_expectation
from .models import (
    HeisenbergParams,
    ModelBuilder,
    QuantumSimulationModel,
    create_custom_model,
    create_named_model,
    heisenberg_hamiltonian,
    register_model,
    register_observable,
    staggered_magnetization_observable,
)
from .optimizers import (
    OptimizerResult,
    OptimizerSettings,
    minimize,
    nelder_mead,
    register_optimizer,
)
from .paulis import (
    DenseState,
    PauliString,
    PauliSum,
    PauliTerm,
    X,
    Y,
    Z,
    exact_evolve,
    exact_expectation,
    exact_ground_energy,
    exact_observable_series,
    format_pauli_sum,
    identity,
    multiply,
    parse_pauli_sum,
    to_dense_matrix,
)
from .validation import (
    ValidationCriteria,
    ValidationDecision,
    accept_results,
    read_reference_csv,
    register_metric,
    series_distance,
    validate,
)
from .workflows import (
    QuantumSimulationWorkflow,
    WorkflowResult,
    get_workflow,
    register_workflow,
    registered_workflows,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "DenseState",
    "EvaluatorConfig",
    "Gate",
    "GateKind",
    "HeisenbergParams",
    "ModelBuilder",
    "OptimizerResult",
    "OptimizerSettings",
    "ParameterRef",
    "PauliString",
    "PauliSum",
    "PauliTerm",
    "QsimflowError",
    "QuantumSimulationModel",
    "QuantumSimulationWorkflow",
    "ShotCounts",
    "StatevectorBackend",
    "TrotterSpec",
    "ValidationCriteria",
    "ValidationDecision",
    "WorkflowResult",
    "X",
    "Y",
    "Z",
    "accept_results",
    "basis_change",
    "create_custom_model",
    "create_named_model",
    "derive_seed",
    "embed_operator",
    "evaluate",
    "exact_evolve",
    "exact_expectation",
    "exact_ground_energy",
    "exact_observable_series",
    "format_pauli_sum",
    "get_backend",
    "get_workflow",
    "heisenberg_hamiltonian",
    "identity",
    "minimize",
    "multiply",
    "nelder_mead",
    "parse_pauli_sum",
    "qaoa_circuit",
    "register_backend",
    "register_metric",
    "register_model",
    "register_observable",
    "register_optimizer",
    "register_workflow",
    "registered_workflows",
    "series_distance",
    "staggered_magnetization_observable",
    "state_prep",
    "term_expectation",
    "to_dense_matrix",
    "trotter_evolution",
    "trotter_step",
    "unitary_of",
    "validate",
]
