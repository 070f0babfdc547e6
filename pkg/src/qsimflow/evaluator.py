"""Expectation-value evaluation: analytic from the statevector, or estimated
from shots via change-of-basis partial tomography.

In shots mode every non-identity term of the observable gets its own circuit
(prep followed by the term's basis change) and its own derived seed, so term
evaluations are reproducible even if executed out of order.  The weighted
sum runs in canonical term order to keep results bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .backend import ShotCounts, derive_seed
from .circuits import Circuit, basis_change
from .errors import DimensionMismatch, EmptyCounts
from .paulis import PauliString, PauliSum, exact_expectation

_MODES = ("analytic", "shots")


@dataclass(frozen=True)
class EvaluatorConfig:
    """How to turn circuits into expectation values.

    ``shots == 0`` is the analytic sentinel: expectation values are computed
    exactly from the statevector.
    """

    mode: str = "analytic"
    shots: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.mode == "shots" and self.shots < 1:
            raise ValueError("shots mode requires shots >= 1")

    @classmethod
    def from_shots(cls, shots: int, seed: int = 0) -> "EvaluatorConfig":
        """shots=0 selects analytic mode, anything larger selects shots mode."""
        if shots == 0:
            return cls("analytic", 0, seed)
        return cls("shots", shots, seed)

    def with_seed(self, seed: int) -> "EvaluatorConfig":
        return replace(self, seed=seed)


def term_expectation(counts: ShotCounts, term: PauliString) -> float:
    """Z-basis parity expectation of ``term``'s support over measured counts.

    Assumes the counts were taken after the term's basis-change circuit.
    Bitstring keys follow the library convention: qubit 0 is the rightmost
    character.
    """
    if counts.shots == 0 or not counts.counts:
        raise EmptyCounts("no shots recorded")
    if term.n_qubits > counts.n_qubits:
        raise DimensionMismatch(
            f"term {term!r} acts outside the {counts.n_qubits}-qubit register"
        )
    n = counts.n_qubits
    acc = 0
    for bitstring, count in counts.counts.items():
        parity = sum(int(bitstring[n - 1 - q]) for q in term.support) & 1
        acc += -count if parity else count
    return acc / counts.shots


def evaluate(
    obs: PauliSum, prep: Circuit, backend, cfg: EvaluatorConfig = EvaluatorConfig()
) -> float:
    """Expectation value of ``obs`` on the state prepared by ``prep``."""
    herm = obs.require_hermitian("observable")
    if cfg.mode == "analytic":
        return exact_expectation(backend.run_statevector(prep), herm)
    total = 0.0
    for index, term in enumerate(herm.terms):
        coefficient = term.coefficient.real
        if term.string.is_identity:
            total += coefficient
            continue
        circuit = prep.compose(basis_change(term.string, prep.n_qubits))
        counts = backend.sample(circuit, cfg.shots, derive_seed(cfg.seed, index))
        total += coefficient * term_expectation(counts, term.string)
    return total
