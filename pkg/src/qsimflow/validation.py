"""Distance-based acceptance of workflow results against references.

A reference is either supplied explicitly (series, scalar, or CSV file) or
derived from the exact dense oracles when the register is small enough.
``accept_results`` turns a distance and a threshold into a binary decision;
ties (distance == threshold) accept.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import (
    EmptySeries,
    LengthMismatch,
    MissingKey,
    MissingReference,
    UnknownMetric,
)

logger = logging.getLogger(__name__)

# Metric registry ------------------------------------------------------------


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def _rmse(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.mean((a - b) ** 2)))


def _final_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(a[-1] - b[-1]))


_METRICS: dict[str, Callable[[np.ndarray, np.ndarray], float]] = {}


def register_metric(name: str, fn: Callable[[np.ndarray, np.ndarray], float]):
    """Register a series distance; re-registration replaces (last wins)."""
    if name in _METRICS:
        logger.warning("replacing metric %r", name)
    _METRICS[name] = fn


register_metric("max-abs", _max_abs)
register_metric("rmse", _rmse)
register_metric("final-abs", _final_abs)


def _resolve_metric(metric) -> tuple[str, Callable]:
    if callable(metric):
        return getattr(metric, "__name__", "custom"), metric
    try:
        return metric, _METRICS[metric]
    except KeyError:
        raise UnknownMetric(
            f"no metric named {metric!r}; registered: {sorted(_METRICS)}"
        ) from None


def series_distance(a: Sequence[float], b: Sequence[float], metric="max-abs") -> float:
    """Distance between two equal-length series under the given metric."""
    _, fn = _resolve_metric(metric)
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise EmptySeries("series must be non-empty")
    if a.size != b.size:
        raise LengthMismatch(f"series lengths differ: {a.size} vs {b.size}")
    return fn(a, b)


# Criteria and decisions -------------------------------------------------------


@dataclass(frozen=True)
class ValidationCriteria:
    """What to compare against, how, and how close is close enough.

    ``reference=None`` means "derive from the exact oracle" when used through
    :func:`validate`.
    """

    metric: "str | Callable" = "max-abs"
    threshold: float = 0.0
    reference: "float | Sequence[float] | None" = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        _resolve_metric(self.metric)
        ref = self.reference
        if ref is not None and not np.isscalar(ref) and len(np.atleast_1d(ref)) == 0:
            raise ValueError("reference must be non-empty when supplied")


@dataclass(frozen=True)
class ValidationDecision:
    distance: float
    threshold: float
    accepted: bool
    metric: str

    def __post_init__(self):
        if self.accepted != (self.distance <= self.threshold):
            raise ValueError("accepted flag contradicts distance/threshold")

    @classmethod
    def decide(cls, distance: float, threshold: float, metric: str) -> "ValidationDecision":
        return cls(distance, threshold, distance <= threshold, metric)

    def __str__(self) -> str:
        verdict = "accepted" if self.accepted else "rejected"
        return (
            f"validation: metric={self.metric} distance={self.distance:.12g} "
            f"threshold={self.threshold:.12g} -> {verdict}"
        )


def accept_results(result, key: str, criteria: ValidationCriteria) -> ValidationDecision:
    """Compare ``result[key]`` to the criteria's reference."""
    if key not in result:
        raise MissingKey(key, f"result has no key {key!r}; keys: {sorted(result.keys())}")
    if criteria.reference is None:
        raise MissingReference("criteria carry no reference series or scalar")
    value = np.atleast_1d(np.asarray(result[key], dtype=float))
    reference = np.atleast_1d(np.asarray(criteria.reference, dtype=float))
    name, fn = _resolve_metric(criteria.metric)
    distance = series_distance(value, reference, fn)
    return ValidationDecision.decide(distance, criteria.threshold, name)


def validate(workflow, model, criteria: ValidationCriteria, evaluator=None, backend=None):
    """Execute ``workflow`` on ``model`` and accept/reject its headline result.

    When the criteria carry no reference, the workflow's built-in provider
    derives one from the exact dense oracle (bounded at 12 qubits).
    """
    result = workflow.execute(model, evaluator, backend)
    criteria_resolved = criteria
    if criteria.reference is None:
        criteria_resolved = replace(criteria, reference=workflow.reference(model))
    return accept_results(result, workflow.validation_key, criteria_resolved)


def read_reference_csv(path) -> list[float]:
    """Load a reference series from CSV columns ``(index-or-time, value)``."""
    values = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                values.append(float(row[-1]))
            except ValueError:
                continue  # header row
    if not values:
        raise EmptySeries(f"no numeric rows in {path}")
    return values
