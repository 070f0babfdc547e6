"""Circuit generators: initial-state preparation, first-order Trotter
evolution, and the QAOA alternating ansatz.

Every Pauli exponential uses the standard construction: rotate X/Y factors
onto Z, entangle the support with a CNOT ladder, apply ``Rz(2 c dt)`` on the
last support qubit, and unwind.  Terms are emitted in canonical order
(sorted by support, then X before Y before Z) so generated circuits are
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .circuits import Circuit, Gate, ParameterRef
from .errors import NotDiagonal
from .paulis import PauliSum


@dataclass(frozen=True)
class TrotterSpec:
    """Step size and step count for first-order Trotter evolution."""

    dt: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not isinstance(self.steps, int) or isinstance(self.steps, bool) or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")


def state_prep(initial_spins: Sequence[int]) -> Circuit:
    """X gate on every spin marked 1; prepares the matching basis state."""
    spins = list(initial_spins)
    if not spins:
        raise ValueError("initial_spins must be non-empty")
    if any(s not in (0, 1) for s in spins):
        raise ValueError("initial_spins entries must be 0 or 1")
    gates = tuple(Gate.x(q) for q, s in enumerate(spins) if s == 1)
    return Circuit(len(spins), gates)


def _scaled_angle(coefficient: float, dt):
    # Rz angle for exp(-i c dt P) is 2 c dt; ParameterRefs absorb the factor.
    if isinstance(dt, ParameterRef):
        return ParameterRef(dt.index, 2.0 * coefficient * dt.scale, 2.0 * coefficient * dt.offset)
    return 2.0 * coefficient * dt


def _pauli_exponential(ops: dict[int, str], angle) -> list[Gate]:
    support = sorted(ops)
    enter: list[Gate] = []
    for q in support:
        if ops[q] == "X":
            enter.append(Gate.h(q))
        elif ops[q] == "Y":
            enter.append(Gate.sdg(q))
            enter.append(Gate.h(q))
    ladder = [Gate.cnot(a, b) for a, b in zip(support, support[1:])]
    core = [Gate.rz(support[-1], angle)]
    exit_basis: list[Gate] = []
    for q in support:
        if ops[q] == "X":
            exit_basis.append(Gate.h(q))
        elif ops[q] == "Y":
            exit_basis.append(Gate.h(q))
            exit_basis.append(Gate.s(q))
    return enter + ladder + core + list(reversed(ladder)) + exit_basis


def trotter_step(h: PauliSum, dt, n_qubits: int | None = None) -> Circuit:
    """One first-order Trotter step: the product of per-term exponentials.

    ``dt`` may be a number or a :class:`ParameterRef` (used by QAOA to make
    the step angle a free parameter).  Identity terms contribute only a
    global phase and are skipped.
    """
    herm = h.require_hermitian("hamiltonian")
    n = n_qubits if n_qubits is not None else max(herm.n_qubits, 1)
    gates: list[Gate] = []
    for term in herm.terms:
        if term.string.is_identity:
            continue
        gates.extend(_pauli_exponential(term.string.ops, _scaled_angle(term.coefficient.real, dt)))
    n_params = dt.index + 1 if isinstance(dt, ParameterRef) else 0
    return Circuit(n, tuple(gates), n_params)


def trotter_evolution(h: PauliSum, spec: TrotterSpec, n_qubits: int | None = None) -> list[Circuit]:
    """Cumulative Trotter prefixes: entry k implements evolution to (k+1)*dt."""
    step = trotter_step(h, spec.dt, n_qubits)
    prefixes = [step]
    for _ in range(spec.steps - 1):
        prefixes.append(prefixes[-1].compose(step))
    return prefixes


def qaoa_circuit(h_cost: PauliSum, p: int, n_qubits: int | None = None) -> Circuit:
    """Alternating-operator ansatz with ``2p`` parameters.

    Starts from the uniform superposition; layer l applies
    ``exp(-i gamma_l H_cost)`` followed by ``exp(-i beta_l X_j)`` on every
    qubit.  Parameters are ordered ``[gamma_1, beta_1, ..., gamma_p, beta_p]``.
    """
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    cost = h_cost.require_hermitian("cost operator")
    for term in cost.terms:
        letters = set(term.string.ops.values())
        if letters - {"Z"}:
            raise NotDiagonal(f"cost term {term.string!r} is not diagonal (Z/I only)")
    n = n_qubits if n_qubits is not None else max(cost.n_qubits, 1)
    gates: list[Gate] = [Gate.h(q) for q in range(n)]
    for layer in range(p):
        gamma = ParameterRef(2 * layer)
        beta = ParameterRef(2 * layer + 1, scale=2.0)
        gates.extend(trotter_step(cost, gamma, n).gates)
        gates.extend(Gate.rx(q, beta) for q in range(n))
    return Circuit(n, tuple(gates), 2 * p)
