"""Derivative-free optimizers behind a common minimize interface.

``nelder-mead`` is the built-in reference implementation (reflection 1,
expansion 2, contraction 0.5, shrink 0.5; terminates when the simplex
f-spread drops below ``f_tol`` or the evaluation budget runs out).
``cobyla`` and ``lbfgs-fd`` delegate to scipy behind the same interface;
their tolerance semantics follow scipy's.

Every wrapped objective tracks the best point seen and a best-so-far history
with one entry per function evaluation, so optimizer results are comparable
across methods.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import UnknownOptimizer

logger = logging.getLogger(__name__)

DEFAULT_F_TOL = 1e-6
DEFAULT_MAX_EVALS = 500

# Initial simplex: per-coordinate step of 0.05, or 0.00025 where x0_i == 0.
_SIMPLEX_STEP = 0.05
_SIMPLEX_STEP_ZERO = 0.00025


@dataclass(frozen=True)
class OptimizerSettings:
    method: str = "nelder-mead"
    x0: Sequence[float] = field(default_factory=tuple)
    f_tol: float = DEFAULT_F_TOL
    max_evals: int = DEFAULT_MAX_EVALS

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        if not all(np.isfinite(self.x0)):
            raise ValueError("x0 must be finite")
        if not self.f_tol > 0:
            raise ValueError("f_tol must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")


@dataclass(frozen=True)
class OptimizerResult:
    x: np.ndarray
    fun: float
    history: tuple[float, ...]
    n_evals: int
    converged: bool


class _BudgetExceeded(Exception):
    pass


class _Tracker:
    """Objective wrapper: counts evaluations, records best-so-far."""

    def __init__(self, f: Callable, max_evals: int):
        self._f = f
        self._max_evals = max_evals
        self.n_evals = 0
        self.history: list[float] = []
        self.best_x: np.ndarray | None = None
        self.best_f = np.inf

    def __call__(self, x) -> float:
        if self.n_evals >= self._max_evals:
            raise _BudgetExceeded
        x = np.asarray(x, dtype=float)
        value = float(self._f(x))
        self.n_evals += 1
        if value < self.best_f:
            self.best_f = value
            self.best_x = x.copy()
        self.history.append(self.best_f)
        return value

    def result(self, converged: bool) -> OptimizerResult:
        assert self.best_x is not None, "objective was never evaluated"
        return OptimizerResult(
            x=self.best_x,
            fun=self.best_f,
            history=tuple(self.history),
            n_evals=self.n_evals,
            converged=converged,
        )


def nelder_mead(f: Callable, settings: OptimizerSettings) -> OptimizerResult:
    """Standard downhill-simplex minimization.

    Returns the best point found; ``converged`` is False when the evaluation
    budget ran out before the simplex f-spread fell below ``f_tol``
    (non-convergence is flagged, never raised).
    """
    x0 = np.asarray(settings.x0, dtype=float)
    n = x0.size
    if n == 0:
        raise ValueError("x0 must have at least one coordinate")
    rho, chi, psi, sigma = 1.0, 2.0, 0.5, 0.5

    tracker = _Tracker(f, settings.max_evals)
    try:
        sim = [x0]
        fvals = [tracker(x0)]
        for i in range(n):
            vertex = x0.copy()
            vertex[i] += _SIMPLEX_STEP if x0[i] != 0.0 else _SIMPLEX_STEP_ZERO
            sim.append(vertex)
            fvals.append(tracker(vertex))
        sim = np.asarray(sim)
        fvals = np.asarray(fvals)

        while True:
            order = np.argsort(fvals, kind="stable")
            sim, fvals = sim[order], fvals[order]
            if fvals[-1] - fvals[0] < settings.f_tol:
                return tracker.result(converged=True)

            centroid = sim[:-1].mean(axis=0)
            reflected = centroid + rho * (centroid - sim[-1])
            f_reflected = tracker(reflected)
            if f_reflected < fvals[0]:
                expanded = centroid + rho * chi * (centroid - sim[-1])
                f_expanded = tracker(expanded)
                if f_expanded < f_reflected:
                    sim[-1], fvals[-1] = expanded, f_expanded
                else:
                    sim[-1], fvals[-1] = reflected, f_reflected
            elif f_reflected < fvals[-2]:
                sim[-1], fvals[-1] = reflected, f_reflected
            else:
                if f_reflected < fvals[-1]:
                    contracted = centroid + psi * rho * (centroid - sim[-1])
                    f_contracted = tracker(contracted)
                    accept = f_contracted <= f_reflected
                else:
                    contracted = centroid - psi * (centroid - sim[-1])
                    f_contracted = tracker(contracted)
                    accept = f_contracted < fvals[-1]
                if accept:
                    sim[-1], fvals[-1] = contracted, f_contracted
                else:
                    for k in range(1, n + 1):
                        sim[k] = sim[0] + sigma * (sim[k] - sim[0])
                        fvals[k] = tracker(sim[k])
    except _BudgetExceeded:
        return tracker.result(converged=False)


def _scipy_minimize(method: str, scipy_kwargs_fn):
    def run(f: Callable, settings: OptimizerSettings) -> OptimizerResult:
        from scipy import optimize as _sciopt

        tracker = _Tracker(f, settings.max_evals)
        converged = False
        try:
            result = _sciopt.minimize(
                tracker,
                np.asarray(settings.x0, dtype=float),
                method=method,
                **scipy_kwargs_fn(settings),
            )
            converged = bool(result.success)
        except _BudgetExceeded:
            pass
        if tracker.n_evals == 0:
            tracker(np.asarray(settings.x0, dtype=float))
        return tracker.result(converged=converged)

    return run


cobyla = _scipy_minimize(
    "COBYLA", lambda s: {"tol": s.f_tol, "options": {"maxiter": s.max_evals}}
)
lbfgs_fd = _scipy_minimize(
    "L-BFGS-B", lambda s: {"options": {"ftol": s.f_tol, "maxfun": s.max_evals}}
)


_OPTIMIZERS: dict[str, Callable[[Callable, OptimizerSettings], OptimizerResult]] = {}


def register_optimizer(name: str, fn: Callable[[Callable, OptimizerSettings], OptimizerResult]):
    """Register a minimizer; re-registration replaces (last wins)."""
    if name in _OPTIMIZERS:
        logger.warning("replacing optimizer %r", name)
    _OPTIMIZERS[name] = fn


def get_optimizer(name: str) -> Callable[[Callable, OptimizerSettings], OptimizerResult]:
    try:
        return _OPTIMIZERS[name]
    except KeyError:
        raise UnknownOptimizer(
            f"no optimizer named {name!r}; registered: {sorted(_OPTIMIZERS)}"
        ) from None


def minimize(f: Callable, settings: OptimizerSettings) -> OptimizerResult:
    """Minimize with the method named in ``settings``."""
    return get_optimizer(settings.method)(f, settings)


register_optimizer("nelder-mead", nelder_mead)
register_optimizer("cobyla", cobyla)
register_optimizer("lbfgs-fd", lbfgs_fd)
