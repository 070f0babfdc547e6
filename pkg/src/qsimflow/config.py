"""Declarative run specifications: JSON in, validated RunSpec out, CSV out.

A run config has five blocks::

    {
      "model":      {"type": "Heisenberg", ...}      (required)
      "workflow":   {"name": "td-evolution", ...}    (required)
      "backend":    {"name": "statevector", "max_qubits": 24}
      "evaluator":  {"mode": "analytic"|"shots", "shots": N, "seed": S}
      "validation": {"key": ..., "metric": ..., "threshold": ..., "reference": ...}
      "output":     "path.csv"
    }

Every key is checked; unknown keys raise with a path-qualified message.
CSV output uses '.' decimals and 12 significant digits so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, replace
from typing import Any, Mapping

from .backend import get_backend
from .circuits import Circuit
from .errors import (
    BadParameterType,
    ConfigTypeError,
    MissingKey,
    MissingParameter,
    ParseError,
    QsimflowError,
    QubitCountMismatch,
    UnknownKey,
    UnknownParameter,
)
from .evaluator import EvaluatorConfig
from .models import QuantumSimulationModel, create_custom_model, create_named_model
from .paulis import parse_pauli_sum
from .validation import (
    ValidationCriteria,
    accept_results,
    read_reference_csv,
)
from .workflows import QuantumSimulationWorkflow, get_workflow

_MODEL_CUSTOM_KEYS = {"hamiltonian", "ansatz_file", "n_params"}


@dataclass(frozen=True)
class ValidationPlan:
    """Validation block resolved against the workflow's defaults.

    ``reference`` may be the string ``"exact"`` (derive from the oracle), a
    number, a list of numbers, or ``{"csv": path}``.
    """

    criteria: ValidationCriteria
    key: str | None = None
    derive: bool = False


@dataclass(frozen=True)
class RunSpec:
    """A fully validated run: model, workflow instance, and execution blocks."""

    model: QuantumSimulationModel
    workflow: QuantumSimulationWorkflow
    workflow_name: str
    backend_name: str
    backend_options: Mapping[str, Any]
    evaluator: EvaluatorConfig
    validation: ValidationPlan | None
    output: str | None


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigTypeError(path, f"{path} must be an object")
    return value


def _check_keys(block: dict, allowed: set[str], path: str):
    for key in block:
        if key not in allowed:
            raise UnknownKey(f"{path}.{key}")


def _typed(block: dict, key: str, types, path: str, default=None, required=False):
    if key not in block:
        if required:
            raise MissingKey(f"{path}.{key}")
        return default
    value = block[key]
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ConfigTypeError(f"{path}.{key}", f"{path}.{key} must not be a boolean")
    if not isinstance(value, types):
        raise ConfigTypeError(
            f"{path}.{key}",
            f"{path}.{key} must be {types}, got {type(value).__name__}",
        )
    return value


def _parse_model(block, base_dir: str) -> QuantumSimulationModel:
    block = _require_mapping(block, "model")
    if "type" in block:
        name = _typed(block, "type", str, "model", required=True)
        params = {k: v for k, v in block.items() if k != "type"}
        try:
            return create_named_model(name, params)
        except MissingParameter as exc:
            raise MissingKey(f"model.{exc.key}") from exc
        except BadParameterType as exc:
            raise ConfigTypeError(f"model.{exc.key}", f"model.{exc.key}: {exc}") from exc
        except UnknownParameter as exc:
            raise UnknownKey(f"model.{exc.key}") from exc
    # Custom model: textual Hamiltonian + ansatz circuit dump.
    _check_keys(block, _MODEL_CUSTOM_KEYS, "model")
    for key in _MODEL_CUSTOM_KEYS:
        if key not in block:
            raise MissingKey(f"model.{key}")
    hamiltonian_text = _typed(block, "hamiltonian", str, "model", required=True)
    ansatz_file = _typed(block, "ansatz_file", str, "model", required=True)
    n_params = _typed(block, "n_params", int, "model", required=True)
    try:
        observable = parse_pauli_sum(hamiltonian_text)
    except ParseError as exc:
        raise ParseError(f"model.hamiltonian: {exc}") from exc
    path = ansatz_file if os.path.isabs(ansatz_file) else os.path.join(base_dir, ansatz_file)
    try:
        with open(path) as fh:
            ansatz = Circuit.from_text(fh.read())
    except OSError as exc:
        raise ParseError(f"model.ansatz_file: cannot read {path}: {exc}") from exc
    except ParseError as exc:
        raise ParseError(f"model.ansatz_file: {exc}") from exc
    return create_custom_model(ansatz, observable, n_params)


def _parse_evaluator(block) -> EvaluatorConfig:
    if block is None:
        return EvaluatorConfig()
    block = _require_mapping(block, "evaluator")
    _check_keys(block, {"mode", "shots", "seed"}, "evaluator")
    shots = _typed(block, "shots", int, "evaluator", default=0)
    seed = _typed(block, "seed", int, "evaluator", default=0)
    mode = _typed(block, "mode", str, "evaluator")
    if shots < 0:
        raise ConfigTypeError("evaluator.shots", "evaluator.shots must be >= 0")
    if mode is None:
        mode = "analytic" if shots == 0 else "shots"
    if mode not in ("analytic", "shots"):
        raise ConfigTypeError("evaluator.mode", f"unknown evaluator mode {mode!r}")
    if mode == "shots" and shots == 0:
        raise ConfigTypeError("evaluator.shots", "shots mode requires shots >= 1")
    if mode == "analytic":
        shots = 0
    return EvaluatorConfig(mode, shots, seed)


def _parse_validation(block, base_dir: str) -> ValidationPlan | None:
    if block is None:
        return None
    block = _require_mapping(block, "validation")
    _check_keys(block, {"key", "metric", "threshold", "reference"}, "validation")
    key = _typed(block, "key", str, "validation")
    metric = _typed(block, "metric", str, "validation", default="max-abs")
    threshold = _typed(block, "threshold", (int, float), "validation", required=True)
    if threshold < 0:
        raise ConfigTypeError("validation.threshold", "threshold must be >= 0")
    reference = block.get("reference", "exact")
    derive = False
    if isinstance(reference, str):
        if reference != "exact":
            raise ConfigTypeError(
                "validation.reference",
                'string reference must be "exact" (or use {"csv": path})',
            )
        derive, reference = True, None
    elif isinstance(reference, dict):
        _check_keys(reference, {"csv"}, "validation.reference")
        csv_path = _typed(reference, "csv", str, "validation.reference", required=True)
        if not os.path.isabs(csv_path):
            csv_path = os.path.join(base_dir, csv_path)
        reference = read_reference_csv(csv_path)
    elif isinstance(reference, list):
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in reference):
            raise ConfigTypeError("validation.reference", "reference list must be numeric")
    elif isinstance(reference, bool) or not isinstance(reference, (int, float)):
        raise ConfigTypeError("validation.reference", "unsupported reference form")
    criteria = ValidationCriteria(metric=metric, threshold=float(threshold), reference=reference)
    return ValidationPlan(criteria=criteria, key=key, derive=derive)


def parse_config(text: str, base_dir: str = ".") -> RunSpec:
    """Parse and fully validate a JSON run config.

    ``base_dir`` anchors relative paths (ansatz files, reference CSVs);
    pass the config file's directory.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: {exc.msg}") from exc
    doc = _require_mapping(doc, "config")
    _check_keys(
        doc, {"model", "workflow", "backend", "evaluator", "validation", "output"}, "config"
    )
    for key in ("model", "workflow"):
        if key not in doc:
            raise MissingKey(key)

    model = _parse_model(doc["model"], base_dir)

    wf_block = _require_mapping(doc["workflow"], "workflow")
    wf_name = _typed(wf_block, "name", str, "workflow", required=True)
    wf_config = {k: v for k, v in wf_block.items() if k != "name"}
    workflow = get_workflow(wf_name, wf_config)

    backend_block = doc.get("backend")
    backend_name, backend_options = "statevector", {}
    if backend_block is not None:
        backend_block = _require_mapping(backend_block, "backend")
        _check_keys(backend_block, {"name", "max_qubits"}, "backend")
        backend_name = _typed(backend_block, "name", str, "backend", default="statevector")
        max_qubits = _typed(backend_block, "max_qubits", int, "backend")
        if max_qubits is not None:
            if max_qubits < 1:
                raise ConfigTypeError("backend.max_qubits", "max_qubits must be >= 1")
            backend_options["max_qubits"] = max_qubits
            if model.n_qubits > max_qubits:
                raise QubitCountMismatch(
                    f"model needs {model.n_qubits} qubits, backend caps at {max_qubits}"
                )

    evaluator = _parse_evaluator(doc.get("evaluator"))
    validation = _parse_validation(doc.get("validation"), base_dir)
    output = _typed(doc, "output", str, "config")
    return RunSpec(
        model=model,
        workflow=workflow,
        workflow_name=wf_name,
        backend_name=backend_name,
        backend_options=backend_options,
        evaluator=evaluator,
        validation=validation,
        output=output,
    )


def load_config(path: str) -> RunSpec:
    with open(path) as fh:
        text = fh.read()
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))


# Output ------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{float(value):.12g}"


def _render_csv(spec: RunSpec, result) -> str:
    if spec.workflow_name == "td-evolution":
        lines = ["step,time,exp_val"]
        for k, (t, v) in enumerate(zip(result["times"], result["exp-vals"]), start=1):
            lines.append(f"{k},{_fmt(t)},{_fmt(v)}")
    else:
        lines = ["eval,best_energy"]
        for k, v in enumerate(result["energy-history"], start=1):
            lines.append(f"{k},{_fmt(v)}")
        params = ",".join(_fmt(p) for p in result["opt-params"])
        lines.append(f"opt-params,{params}")
    return "\n".join(lines) + "\n"


def run(spec: RunSpec, stream=None) -> int:
    """Execute a run spec: workflow, CSV output, optional validation.

    Returns the process exit status: 0 on success (validation accepted or
    absent), 2 when validation rejects.  Lower-layer errors propagate as
    :class:`~qsimflow.errors.QsimflowError` for the CLI to map to status 1.
    """
    stream = stream if stream is not None else sys.stdout
    backend = get_backend(spec.backend_name, **spec.backend_options)
    result = spec.workflow.execute(spec.model, spec.evaluator, backend)

    csv_text = _render_csv(spec, result)
    if spec.output:
        with open(spec.output, "w", newline="") as fh:
            fh.write(csv_text)
    else:
        stream.write(csv_text)

    status = 0
    if spec.validation is not None:
        plan = spec.validation
        criteria = plan.criteria
        if plan.derive:
            criteria = replace(criteria, reference=spec.workflow.reference(spec.model))
        key = plan.key or spec.workflow.validation_key
        decision = accept_results(result, key, criteria)
        stream.write(str(decision) + "\n")
        if not decision.accepted:
            status = 2
    return status
