"""Noiseless statevector execution with deterministic shot sampling.

Backends expose two operations, ``run_statevector`` and ``sample``; the
registry lets third-party implementations be looked up by name.  Sampling is
reproducible across platforms: a 64-bit seed drives numpy's PCG64 stream and
samples are drawn by inverse transform over the cumulative distribution.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .circuits import Circuit, GateKind, SINGLE_QUBIT_KINDS
from .errors import DimensionMismatch, TooManyQubits, UnboundCircuit, UnknownBackend
from .paulis import DenseState

logger = logging.getLogger(__name__)

DEFAULT_MAX_QUBITS = 24

_U64 = (1 << 64) - 1


def derive_seed(base_seed: int, *parts) -> int:
    """Stable 64-bit sub-seed from a base seed and hashable context parts.

    Used to give every circuit execution its own reproducible stream, so
    concurrent or reordered execution cannot change the randomness seen by
    any one circuit.
    """
    payload = repr((int(base_seed),) + parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "little")


@dataclass(frozen=True)
class ShotCounts:
    """Measured bitstring histogram.

    Keys are length-``n_qubits`` strings of '0'/'1' with qubit 0 as the
    rightmost character; values sum to ``shots``.
    """

    counts: Mapping[str, int]
    shots: int
    n_qubits: int

    def __post_init__(self):
        counts = dict(self.counts)
        total = 0
        for key, value in counts.items():
            if len(key) != self.n_qubits or set(key) - {"0", "1"}:
                raise ValueError(f"bad bitstring key {key!r} for {self.n_qubits} qubits")
            if value < 0:
                raise ValueError(f"negative count for {key!r}")
            total += value
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")
        object.__setattr__(self, "counts", MappingProxyType(counts))

    def frequency(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots


# Gate kernels ---------------------------------------------------------------
# In-place style amplitude updates; deliberately independent of the matrix
# embedding used by circuits.unitary_of, which serves as their test oracle.


def _apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    axis = n - 1 - qubit
    t = np.moveaxis(state.reshape([2] * n), axis, 0)
    t = np.tensordot(matrix, t, axes=(1, 0))
    return np.moveaxis(t, 0, axis).reshape(-1)


def _apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    idx = np.arange(state.shape[0])
    mask = ((idx >> control) & 1).astype(bool)
    out = state.copy()
    out[idx[mask]] = state[idx[mask] ^ (1 << target)]
    return out


def _apply_cz(state: np.ndarray, a: int, b: int) -> np.ndarray:
    idx = np.arange(state.shape[0])
    mask = (((idx >> a) & (idx >> b)) & 1).astype(bool)
    out = state.copy()
    out[mask] *= -1
    return out


def _apply_dense(state: np.ndarray, matrix: np.ndarray, targets, n: int) -> np.ndarray:
    k = len(targets)
    t = state.reshape([2] * n)
    mt = matrix.reshape([2] * (2 * k))
    # Axis order: matrix rows split MSB-first, i.e. targets reversed.
    axes = [n - 1 - q for q in reversed(targets)]
    t = np.tensordot(mt, t, axes=(list(range(k, 2 * k)), axes))
    t = np.moveaxis(t, list(range(k)), axes)
    return t.reshape(-1)


def _apply_gate(state: np.ndarray, gate, n: int) -> np.ndarray:
    if gate.kind in SINGLE_QUBIT_KINDS:
        return _apply_1q(state, gate.bound_matrix(), gate.targets[0], n)
    if gate.kind is GateKind.CNOT:
        return _apply_cnot(state, gate.targets[0], gate.targets[1])
    if gate.kind is GateKind.CZ:
        return _apply_cz(state, gate.targets[0], gate.targets[1])
    return _apply_dense(state, gate.bound_matrix(), gate.targets, n)


class StatevectorBackend:
    """Dense statevector simulator with exact amplitudes and seeded sampling."""

    name = "statevector"
    capabilities = MappingProxyType({"analytic-state": True, "shots": True})

    def __init__(self, max_qubits: int = DEFAULT_MAX_QUBITS):
        if max_qubits < 1:
            raise ValueError("max_qubits must be positive")
        self.max_qubits = max_qubits

    def run_statevector(
        self, circuit: Circuit, initial_state: DenseState | None = None
    ) -> DenseState:
        """Apply ``circuit`` to |0...0> (or ``initial_state``) and return the state."""
        if not circuit.is_bound:
            raise UnboundCircuit("circuit has unbound parameters")
        n = circuit.n_qubits
        if n > self.max_qubits:
            raise TooManyQubits(f"{n} qubits exceeds backend cap {self.max_qubits}")
        if initial_state is None:
            state = np.zeros(1 << n, dtype=complex)
            state[0] = 1.0
        else:
            if initial_state.n_qubits != n:
                raise DimensionMismatch(
                    f"initial state has {initial_state.n_qubits} qubits, circuit {n}"
                )
            state = initial_state.amplitudes.copy()
        for gate in circuit.gates:
            state = _apply_gate(state, gate, n)
        norm_sq = float(np.sum(np.abs(state) ** 2))
        assert abs(norm_sq - 1.0) < 1e-10, f"norm drifted to {norm_sq}"
        return DenseState(state, n)

    def sample(self, circuit: Circuit, shots: int, seed: int) -> ShotCounts:
        """Draw ``shots`` full-register measurements from the output distribution."""
        if shots < 1:
            raise ValueError("shots must be >= 1")
        state = self.run_statevector(circuit)
        probs = np.abs(state.amplitudes) ** 2
        probs /= probs.sum()
        rng = np.random.Generator(np.random.PCG64(int(seed) & _U64))
        cdf = np.cumsum(probs)
        cdf[-1] = 1.0
        draws = rng.random(shots)
        outcomes = np.searchsorted(cdf, draws, side="right")
        np.clip(outcomes, 0, probs.shape[0] - 1, out=outcomes)
        values, freqs = np.unique(outcomes, return_counts=True)
        n = circuit.n_qubits
        counts = {format(int(v), f"0{n}b"): int(c) for v, c in zip(values, freqs)}
        return ShotCounts(counts, shots, n)


# Registry --------------------------------------------------------------------

_BACKENDS: dict[str, Callable[..., object]] = {}


def register_backend(name: str, factory: Callable[..., object]):
    """Register a backend factory; re-registration replaces (last wins)."""
    if name in _BACKENDS:
        logger.warning("replacing backend %r", name)
    _BACKENDS[name] = factory


def get_backend(name: str = "statevector", **options):
    """Instantiate a registered backend by name."""
    try:
        factory = _BACKENDS[name]
    except KeyError:
        raise UnknownBackend(
            f"no backend named {name!r}; registered: {sorted(_BACKENDS)}"
        ) from None
    return factory(**options)


register_backend("statevector", StatevectorBackend)
