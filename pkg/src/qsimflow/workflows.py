"""Hybrid simulation workflows and their runtime registry.

Workflows are plugins: ``register_workflow`` installs a factory under a name
and ``get_workflow`` instantiates one from a configuration map.  Three
built-ins ship with the library:

``td-evolution``
    Trotterized time evolution, recording an observable after every step.
``vqe``
    Variational minimization of an observable over ansatz parameters.
``qaoa``
    Alternating-operator ansatz over a diagonal cost, optimized like VQE.

Configuration keys are validated on construction; unknown keys are rejected.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Any, Callable, Iterator, Mapping

from .ansatz import qaoa_circuit, trotter_step
from .backend import derive_seed, get_backend
from .errors import (
    InvalidConfig,
    InvalidModel,
    MissingReference,
    ParameterizedModelUnsupported,
    UnknownWorkflow,
)
from .evaluator import EvaluatorConfig, evaluate
from .models import QuantumSimulationModel
from .optimizers import (
    DEFAULT_F_TOL,
    DEFAULT_MAX_EVALS,
    OptimizerSettings,
    minimize,
)
from .paulis import (
    exact_ground_energy,
    exact_observable_series,
    to_dense_matrix,
    _expectation_from_matrix,
)

logger = logging.getLogger(__name__)


class WorkflowResult(Mapping):
    """Read-only keyed result map (scalars, series, parameter vectors)."""

    def __init__(self, data: Mapping[str, Any]):
        self._data = dict(data)

    def __getitem__(self, key: str):
        return self._data[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"WorkflowResult(keys={sorted(self._data)})"


class QuantumSimulationWorkflow(ABC):
    """A configured hybrid quantum/classical procedure.

    Instances are built by :func:`get_workflow` and expose ``execute`` plus
    ``validate``.  Subclasses declare their recognized config keys in
    ``config_keys`` and read values via :meth:`_get`.
    """

    name: str = ""
    config_keys: frozenset[str] = frozenset()
    validation_key: str = "energy"

    def __init__(self, config: Mapping[str, Any] | None = None):
        config = dict(config or {})
        for key in config:
            if key not in self.config_keys:
                raise InvalidConfig(
                    key, f"workflow {self.name!r} does not recognize key {key!r}"
                )
        self.config = config

    def _get(self, key: str, default=None, required: bool = False):
        if required and key not in self.config:
            raise InvalidConfig(key, f"workflow {self.name!r} requires key {key!r}")
        return self.config.get(key, default)

    @abstractmethod
    def execute(
        self,
        model: QuantumSimulationModel,
        evaluator: EvaluatorConfig | None = None,
        backend=None,
    ) -> WorkflowResult:
        """Run the workflow and return its keyed results."""

    def reference(self, model: QuantumSimulationModel):
        """Exact-oracle reference for validation; override per workflow."""
        raise MissingReference(f"workflow {self.name!r} has no built-in reference provider")

    def validate(self, model, criteria, evaluator=None, backend=None):
        from .validation import validate as _validate

        return _validate(self, model, criteria, evaluator, backend)


def _resolve_execution(evaluator, backend):
    evaluator = evaluator if evaluator is not None else EvaluatorConfig()
    backend = backend if backend is not None else get_backend("statevector")
    return evaluator, backend


class TimeEvolutionWorkflow(QuantumSimulationWorkflow):
    """First-order Trotter evolution under the model Hamiltonian.

    Result keys: ``exp-vals`` (observable after each step), ``times``
    (k*dt), ``config``.
    """

    name = "td-evolution"
    config_keys = frozenset({"dt", "steps"})
    validation_key = "exp-vals"

    def __init__(self, config=None):
        super().__init__(config)
        dt = self._get("dt", required=True)
        steps = self._get("steps", required=True)
        if isinstance(dt, bool) or not isinstance(dt, (int, float)) or not dt > 0:
            raise InvalidConfig("dt", f"dt must be a positive number, got {dt!r}")
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
            raise InvalidConfig("steps", f"steps must be an integer >= 0, got {steps!r}")
        self.dt = float(dt)
        self.steps = steps

    def execute(self, model, evaluator=None, backend=None) -> WorkflowResult:
        evaluator, backend = _resolve_execution(evaluator, backend)
        if model.n_params != 0:
            raise ParameterizedModelUnsupported(
                "td-evolution requires a fully bound model (n_params = 0)"
            )
        times = [self.dt * (k + 1) for k in range(self.steps)]
        result = {
            "exp-vals": [],
            "times": times,
            "config": {"workflow": self.name, "dt": self.dt, "steps": self.steps},
        }
        if self.steps == 0:
            return WorkflowResult(result)

        step = trotter_step(model.hamiltonian, self.dt, model.n_qubits)
        analytic = evaluator.mode == "analytic"
        capabilities = getattr(backend, "capabilities", {})
        if analytic and capabilities.get("analytic-state"):
            # Carry the statevector across steps; identical to re-running the
            # full prefix because the kernel sequence is the same.
            obs_matrix = to_dense_matrix(model.observable, model.n_qubits)
            state = backend.run_statevector(model.state_prep)
            for _ in range(self.steps):
                state = backend.run_statevector(step, initial_state=state)
                result["exp-vals"].append(
                    _expectation_from_matrix(state.amplitudes, obs_matrix)
                )
        else:
            prefix = model.state_prep
            for k in range(self.steps):
                prefix = prefix.compose(step)
                cfg = evaluator
                if evaluator.mode == "shots":
                    cfg = evaluator.with_seed(derive_seed(evaluator.seed, "step", k))
                result["exp-vals"].append(
                    evaluate(model.observable, prefix, backend, cfg)
                )
        return WorkflowResult(result)

    def reference(self, model):
        """Observable series under exact evolution at the same times."""
        backend = get_backend("statevector")
        psi0 = backend.run_statevector(model.state_prep)
        times = [self.dt * (k + 1) for k in range(self.steps)]
        return exact_observable_series(
            model.hamiltonian, psi0, model.observable, times
        ).tolist()


class _VariationalMixin:
    """Shared optimizer plumbing for VQE-style loops."""

    def _parse_optimizer_config(self):
        method = self._get("optimizer", "nelder-mead")
        if not isinstance(method, str):
            raise InvalidConfig("optimizer", "optimizer must be a method name")
        x0 = self._get("x0")
        if x0 is not None and not isinstance(x0, (list, tuple)):
            raise InvalidConfig("x0", "x0 must be a list of numbers")
        f_tol = self._get("f_tol", DEFAULT_F_TOL)
        max_evals = self._get("max_evals", DEFAULT_MAX_EVALS)
        if isinstance(f_tol, bool) or not isinstance(f_tol, (int, float)) or not f_tol > 0:
            raise InvalidConfig("f_tol", "f_tol must be a positive number")
        if isinstance(max_evals, bool) or not isinstance(max_evals, int) or max_evals < 1:
            raise InvalidConfig("max_evals", "max_evals must be a positive integer")
        return method, x0, float(f_tol), max_evals

    def _minimize_energy(self, circuit, observable, evaluator, backend, x0):
        eval_counter = {"n": 0}

        def objective(theta):
            cfg = evaluator
            if evaluator.mode == "shots":
                cfg = evaluator.with_seed(
                    derive_seed(evaluator.seed, "eval", eval_counter["n"])
                )
            eval_counter["n"] += 1
            return evaluate(observable, circuit.bind(theta), backend, cfg)

        settings = OptimizerSettings(
            method=self._method, x0=x0, f_tol=self._f_tol, max_evals=self._max_evals
        )
        opt = minimize(objective, settings)
        if not opt.converged:
            logger.warning(
                "%s optimizer stopped after %d evaluations without reaching f_tol",
                self.name,
                opt.n_evals,
            )
        return opt


class VqeWorkflow(_VariationalMixin, QuantumSimulationWorkflow):
    """Variational minimization of the model observable.

    Result keys: ``energy`` (best found), ``opt-params``, ``energy-history``
    (best-so-far per evaluation, non-increasing), ``converged``, ``n-evals``,
    ``config``.
    """

    name = "vqe"
    config_keys = frozenset({"optimizer", "x0", "f_tol", "max_evals"})
    validation_key = "energy"

    def __init__(self, config=None):
        super().__init__(config)
        self._method, self._x0, self._f_tol, self._max_evals = self._parse_optimizer_config()

    def execute(self, model, evaluator=None, backend=None) -> WorkflowResult:
        evaluator, backend = _resolve_execution(evaluator, backend)
        if model.n_params < 1:
            raise InvalidModel("vqe requires a parameterized model (n_params >= 1)")
        x0 = self._x0 if self._x0 is not None else [0.0] * model.n_params
        if len(x0) != model.n_params:
            raise InvalidConfig(
                "x0", f"x0 has {len(x0)} entries, model takes {model.n_params}"
            )
        opt = self._minimize_energy(
            model.state_prep, model.observable, evaluator, backend, x0
        )
        return WorkflowResult(
            {
                "energy": opt.fun,
                "opt-params": [float(v) for v in opt.x],
                "energy-history": list(opt.history),
                "converged": opt.converged,
                "n-evals": opt.n_evals,
                "config": {
                    "workflow": self.name,
                    "optimizer": self._method,
                    "f_tol": self._f_tol,
                    "max_evals": self._max_evals,
                },
            }
        )

    def reference(self, model):
        """Exact ground energy of the model Hamiltonian."""
        return exact_ground_energy(model.hamiltonian, model.n_qubits)


#: Starting angle for every QAOA parameter when no x0 is configured.  Zero is
#: a stationary point of the cost landscape, so the default starts off it.
QAOA_DEFAULT_ANGLE = 0.1


class QaoaWorkflow(_VariationalMixin, QuantumSimulationWorkflow):
    """Alternating-operator optimization over a diagonal cost Hamiltonian.

    Builds the 2p-parameter ansatz from the model Hamiltonian, then runs the
    variational loop.  Result keys match :class:`VqeWorkflow`.
    """

    name = "qaoa"
    config_keys = frozenset({"p", "optimizer", "x0", "f_tol", "max_evals"})
    validation_key = "energy"

    def __init__(self, config=None):
        super().__init__(config)
        p = self._get("p", 1)
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise InvalidConfig("p", f"p must be a positive integer, got {p!r}")
        self.p = p
        self._method, self._x0, self._f_tol, self._max_evals = self._parse_optimizer_config()

    def execute(self, model, evaluator=None, backend=None) -> WorkflowResult:
        evaluator, backend = _resolve_execution(evaluator, backend)
        circuit = qaoa_circuit(model.hamiltonian, self.p, model.n_qubits)
        x0 = self._x0 if self._x0 is not None else [QAOA_DEFAULT_ANGLE] * (2 * self.p)
        if len(x0) != 2 * self.p:
            raise InvalidConfig(
                "x0", f"x0 has {len(x0)} entries, qaoa with p={self.p} takes {2 * self.p}"
            )
        opt = self._minimize_energy(
            circuit, model.observable, evaluator, backend, x0
        )
        return WorkflowResult(
            {
                "energy": opt.fun,
                "opt-params": [float(v) for v in opt.x],
                "energy-history": list(opt.history),
                "converged": opt.converged,
                "n-evals": opt.n_evals,
                "config": {
                    "workflow": self.name,
                    "p": self.p,
                    "optimizer": self._method,
                    "f_tol": self._f_tol,
                    "max_evals": self._max_evals,
                },
            }
        )

    def reference(self, model):
        """Exact ground energy of the (diagonal) cost Hamiltonian."""
        return exact_ground_energy(model.hamiltonian, model.n_qubits)


# Registry ----------------------------------------------------------------------

_WORKFLOWS: dict[str, Callable[[Mapping[str, Any]], QuantumSimulationWorkflow]] = {}


def register_workflow(name: str, factory: Callable[..., QuantumSimulationWorkflow]):
    """Install a workflow plugin; re-registration replaces (last wins, logged)."""
    if name in _WORKFLOWS:
        logger.info("replacing workflow %r", name)
    _WORKFLOWS[name] = factory


def get_workflow(name: str, config: Mapping[str, Any] | None = None) -> QuantumSimulationWorkflow:
    """Instantiate a registered workflow with the given configuration."""
    try:
        factory = _WORKFLOWS[name]
    except KeyError:
        raise UnknownWorkflow(
            f"no workflow named {name!r}; registered: {sorted(_WORKFLOWS)}"
        ) from None
    return factory(config)


def registered_workflows() -> list[str]:
    return sorted(_WORKFLOWS)


register_workflow("td-evolution", TimeEvolutionWorkflow)
register_workflow("vqe", VqeWorkflow)
register_workflow("qaoa", QaoaWorkflow)
