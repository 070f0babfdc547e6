"""Problem models: observable + Hamiltonian + state preparation.

``create_named_model`` is the factory for built-in model families (the 1D
antiferromagnetic Heisenberg chain ships by default); ``create_custom_model``
wraps a user-supplied ansatz and observable.  ``ModelBuilder`` is the
polymorphic escape hatch for anything the factories do not cover.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Mapping, Sequence

from .ansatz import state_prep
from .circuits import Circuit
from .errors import (
    ArityMismatch,
    BadParameterType,
    MissingParameter,
    QubitCountMismatch,
    TooFewSpins,
    UnknownModel,
    UnknownObservable,
    UnknownParameter,
)
from .paulis import PauliString, PauliSum, PauliTerm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuantumSimulationModel:
    """Everything a workflow needs: what to measure, what generates dynamics,
    and how to prepare the state."""

    observable: PauliSum
    hamiltonian: PauliSum
    state_prep: Circuit
    n_params: int
    n_qubits: int
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        observable = self.observable.require_hermitian("observable")
        hamiltonian = self.hamiltonian.require_hermitian("hamiltonian")
        if self.state_prep.n_params != self.n_params:
            raise ArityMismatch(
                f"state_prep declares {self.state_prep.n_params} parameters, "
                f"model declares {self.n_params}"
            )
        if self.state_prep.n_qubits != self.n_qubits:
            raise QubitCountMismatch(
                f"state_prep spans {self.state_prep.n_qubits} qubits, "
                f"model declares {self.n_qubits}"
            )
        if max(observable.n_qubits, hamiltonian.n_qubits) > self.n_qubits:
            raise QubitCountMismatch("operator acts outside the model register")
        object.__setattr__(self, "observable", observable)
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))


@dataclass(frozen=True)
class HeisenbergParams:
    """Couplings and initial state of the open-boundary 1D Heisenberg chain."""

    Jx: float
    Jy: float
    Jz: float
    h_ext: float
    num_spins: int
    initial_spins: tuple[int, ...]
    observable_name: str = "staggered_magnetization"

    def __post_init__(self):
        object.__setattr__(self, "initial_spins", tuple(self.initial_spins))
        if len(self.initial_spins) != self.num_spins:
            raise BadParameterType(
                "initial_spins",
                f"initial_spins has {len(self.initial_spins)} entries "
                f"for {self.num_spins} spins",
            )
        if any(s not in (0, 1) for s in self.initial_spins):
            raise BadParameterType("initial_spins", "initial_spins entries must be 0 or 1")


def heisenberg_hamiltonian(params: HeisenbergParams) -> PauliSum:
    """Open-chain nearest-neighbor Heisenberg Hamiltonian.

    ``sum_i Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1}`` plus
    ``h_ext sum_i Z_i``.  Zero couplings are dropped by simplification.
    """
    n = params.num_spins
    if n < 2:
        raise TooFewSpins(f"chain needs at least 2 spins, got {n}")
    terms = []
    for i in range(n - 1):
        for coupling, letter in ((params.Jx, "X"), (params.Jy, "Y"), (params.Jz, "Z")):
            terms.append(
                PauliTerm(coupling, PauliString({i: letter, i + 1: letter}))
            )
    for i in range(n):
        terms.append(PauliTerm(params.h_ext, PauliString({i: "Z"})))
    return PauliSum(terms).simplify()


def staggered_magnetization_observable(n: int) -> PauliSum:
    """``(1/n) sum_i (-1)^i Z_i``; +1 on the Neel state starting with bit 0."""
    if n < 1:
        raise TooFewSpins("need at least one spin")
    return PauliSum(
        PauliTerm((-1.0) ** i / n, PauliString({i: "Z"})) for i in range(n)
    ).simplify()


# Named observables ----------------------------------------------------------

_OBSERVABLES: dict[str, Callable[[int], PauliSum]] = {}


def register_observable(name: str, builder: Callable[[int], PauliSum]):
    if name in _OBSERVABLES:
        logger.warning("replacing observable %r", name)
    _OBSERVABLES[name] = builder


register_observable("staggered_magnetization", staggered_magnetization_observable)


# Model factory ----------------------------------------------------------------

_REQUIRED_HEISENBERG = ("Jx", "Jy", "Jz", "h_ext", "num_spins", "initial_spins")


def _real_number(params: Mapping, key: str) -> float:
    value = params[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BadParameterType(key, f"{key} must be a number, got {type(value).__name__}")
    return float(value)


def _build_heisenberg(params: Mapping[str, Any]) -> QuantumSimulationModel:
    allowed = set(_REQUIRED_HEISENBERG) | {"observable"}
    for key in params:
        if key not in allowed:
            raise UnknownParameter(key)
    for key in _REQUIRED_HEISENBERG:
        if key not in params:
            raise MissingParameter(key)

    num_spins = params["num_spins"]
    if isinstance(num_spins, bool) or not isinstance(num_spins, int):
        raise BadParameterType("num_spins", "num_spins must be an integer")
    spins = params["initial_spins"]
    if not isinstance(spins, (list, tuple)) or any(
        isinstance(s, bool) or not isinstance(s, int) for s in spins
    ):
        raise BadParameterType("initial_spins", "initial_spins must be a list of 0/1")
    observable_name = params.get("observable", "staggered_magnetization")
    if not isinstance(observable_name, str):
        raise BadParameterType("observable", "observable must be a string name")

    hp = HeisenbergParams(
        Jx=_real_number(params, "Jx"),
        Jy=_real_number(params, "Jy"),
        Jz=_real_number(params, "Jz"),
        h_ext=_real_number(params, "h_ext"),
        num_spins=num_spins,
        initial_spins=tuple(spins),
        observable_name=observable_name,
    )
    try:
        observable = _OBSERVABLES[observable_name](num_spins)
    except KeyError:
        raise UnknownObservable(
            f"no observable named {observable_name!r}; "
            f"registered: {sorted(_OBSERVABLES)}"
        ) from None
    return QuantumSimulationModel(
        observable=observable,
        hamiltonian=heisenberg_hamiltonian(hp),
        state_prep=state_prep(hp.initial_spins),
        n_params=0,
        n_qubits=num_spins,
        metadata={"model": "Heisenberg", **{k: params[k] for k in params}},
    )


_MODEL_BUILDERS: dict[str, Callable[[Mapping[str, Any]], QuantumSimulationModel]] = {}


def register_model(name: str, builder: Callable[[Mapping[str, Any]], QuantumSimulationModel]):
    """Register a named model family; re-registration replaces (last wins)."""
    if name in _MODEL_BUILDERS:
        logger.warning("replacing model builder %r", name)
    _MODEL_BUILDERS[name] = builder


register_model("Heisenberg", _build_heisenberg)


def create_named_model(name: str, params: Mapping[str, Any]) -> QuantumSimulationModel:
    """Build a registered model family from a parameter map.

    Unknown parameter keys are rejected rather than ignored.
    """
    try:
        builder = _MODEL_BUILDERS[name]
    except KeyError:
        raise UnknownModel(
            f"no model named {name!r}; registered: {sorted(_MODEL_BUILDERS)}"
        ) from None
    return builder(params)


def create_custom_model(
    ansatz: Circuit,
    observable: PauliSum,
    n_params: int,
    hamiltonian: PauliSum | None = None,
    metadata: Mapping[str, Any] | None = None,
) -> QuantumSimulationModel:
    """Model from an explicit ansatz circuit and observable.

    The Hamiltonian defaults to the observable.
    """
    if ansatz.n_params != n_params:
        raise ArityMismatch(
            f"ansatz declares {ansatz.n_params} parameters, caller claims {n_params}"
        )
    return QuantumSimulationModel(
        observable=observable,
        hamiltonian=observable if hamiltonian is None else hamiltonian,
        state_prep=ansatz,
        n_params=n_params,
        n_qubits=ansatz.n_qubits,
        metadata=metadata or {},
    )


class ModelBuilder:
    """Fluent builder behind :class:`QuantumSimulationModel`; subclass and
    override :meth:`build` for custom assembly logic."""

    def __init__(self):
        self._observable: PauliSum | None = None
        self._hamiltonian: PauliSum | None = None
        self._state_prep: Circuit | None = None
        self._n_params = 0
        self._metadata: dict[str, Any] = {}

    def set_observable(self, observable: PauliSum) -> "ModelBuilder":
        self._observable = observable
        return self

    def set_hamiltonian(self, hamiltonian: PauliSum) -> "ModelBuilder":
        self._hamiltonian = hamiltonian
        return self

    def set_state_prep(self, circuit: Circuit) -> "ModelBuilder":
        self._state_prep = circuit
        return self

    def set_n_params(self, n_params: int) -> "ModelBuilder":
        self._n_params = n_params
        return self

    def set_metadata(self, **entries) -> "ModelBuilder":
        self._metadata.update(entries)
        return self

    def build(self) -> QuantumSimulationModel:
        if self._observable is None:
            raise MissingParameter("observable")
        if self._state_prep is None:
            raise MissingParameter("state_prep")
        return QuantumSimulationModel(
            observable=self._observable,
            hamiltonian=self._hamiltonian or self._observable,
            state_prep=self._state_prep,
            n_params=self._n_params,
            n_qubits=self._state_prep.n_qubits,
            metadata=self._metadata,
        )
