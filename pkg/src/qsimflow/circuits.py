"""Gate-level circuit IR: parameterized gates, composition, measurement-basis
changes, and a small-register unitary oracle.

:func:`unitary_of` builds the full matrix product gate by gate.  It is the
independent reference the statevector backend is tested against, so it
deliberately shares no kernel code with :mod:`qsimflow.backend`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    OracleTooLarge,
    ParseError,
    QubitCountMismatch,
    UnboundCircuit,
)
from .paulis import PauliString

#: ``unitary_of`` refuses registers larger than this.
UNITARY_ORACLE_MAX_QUBITS = 10

#: RawUnitary matrices must satisfy max|U+U - 1| <= this.
UNITARY_TOL = 1e-8


class GateKind(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    SDG = "SDG"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    CZ = "CZ"
    RAW_UNITARY = "UNITARY"


ROTATION_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})
TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.CZ})
SINGLE_QUBIT_KINDS = frozenset(
    {GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S, GateKind.SDG}
) | ROTATION_KINDS

_FIXED_1Q = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
}

# Two-qubit matrices with targets[0] as the least significant local bit.
_CNOT_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)
_CZ_MAT = np.diag([1, 1, 1, -1]).astype(complex)


@dataclass(frozen=True)
class ParameterRef:
    """Reference into a parameter vector: bound angle = scale*theta[index] + offset."""

    index: int
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if not isinstance(self.index, int) or isinstance(self.index, bool) or self.index < 0:
            raise ValueError(f"parameter index must be a non-negative int, got {self.index!r}")
        if not (math.isfinite(self.scale) and math.isfinite(self.offset)):
            raise ValueError("scale and offset must be finite")

    def resolve(self, params: Sequence[float]) -> float:
        return self.scale * float(params[self.index]) + self.offset


def _rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    half = angle / 2.0
    c, s = math.cos(half), math.sin(half)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    ``targets[0]`` is the control for CNOT/CZ.  RawUnitary matrices act on
    the targets with ``targets[0]`` as the least significant bit of the
    matrix row/column index.
    """

    kind: GateKind
    targets: tuple[int, ...]
    angle: "float | ParameterRef | None" = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        targets = tuple(int(q) for q in self.targets)
        if any(q < 0 for q in targets):
            raise ValueError("negative qubit index")
        if len(set(targets)) != len(targets):
            raise ValueError(f"duplicate targets in {targets}")
        object.__setattr__(self, "targets", targets)

        kind = self.kind
        if kind in SINGLE_QUBIT_KINDS and len(targets) != 1:
            raise ValueError(f"{kind.value} takes exactly one target")
        if kind in TWO_QUBIT_KINDS and len(targets) != 2:
            raise ValueError(f"{kind.value} takes exactly two targets")

        if kind in ROTATION_KINDS:
            if self.angle is None:
                raise ValueError(f"{kind.value} requires an angle")
            if not isinstance(self.angle, ParameterRef):
                angle = float(self.angle)
                if not math.isfinite(angle):
                    raise ValueError("angle must be finite")
                object.__setattr__(self, "angle", angle)
        elif self.angle is not None:
            raise ValueError(f"{kind.value} takes no angle")

        if kind is GateKind.RAW_UNITARY:
            if len(targets) < 1:
                raise ValueError("RawUnitary needs at least one target")
            if self.matrix is None:
                raise ValueError("RawUnitary requires a matrix")
            mat = np.asarray(self.matrix, dtype=complex)
            dim = 1 << len(targets)
            if mat.shape != (dim, dim):
                raise ValueError(f"matrix must be {dim}x{dim} for {len(targets)} targets")
            defect = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
            if defect > UNITARY_TOL:
                raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
            mat = mat.copy()
            mat.flags.writeable = False
            object.__setattr__(self, "matrix", mat)
        elif self.matrix is not None:
            raise ValueError(f"{kind.value} takes no matrix")

    # Constructors ----------------------------------------------------------

    @classmethod
    def x(cls, q: int) -> "Gate":
        return cls(GateKind.X, (q,))

    @classmethod
    def y(cls, q: int) -> "Gate":
        return cls(GateKind.Y, (q,))

    @classmethod
    def z(cls, q: int) -> "Gate":
        return cls(GateKind.Z, (q,))

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls(GateKind.H, (q,))

    @classmethod
    def s(cls, q: int) -> "Gate":
        return cls(GateKind.S, (q,))

    @classmethod
    def sdg(cls, q: int) -> "Gate":
        return cls(GateKind.SDG, (q,))

    @classmethod
    def rx(cls, q: int, angle) -> "Gate":
        return cls(GateKind.RX, (q,), angle)

    @classmethod
    def ry(cls, q: int, angle) -> "Gate":
        return cls(GateKind.RY, (q,), angle)

    @classmethod
    def rz(cls, q: int, angle) -> "Gate":
        return cls(GateKind.RZ, (q,), angle)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def cz(cls, a: int, b: int) -> "Gate":
        return cls(GateKind.CZ, (a, b))

    @classmethod
    def unitary(cls, targets: Iterable[int], matrix) -> "Gate":
        return cls(GateKind.RAW_UNITARY, tuple(targets), matrix=matrix)

    # Queries ---------------------------------------------------------------

    @property
    def is_bound(self) -> bool:
        return not isinstance(self.angle, ParameterRef)

    def bound_matrix(self) -> np.ndarray:
        """Local gate matrix (2^k x 2^k); requires a bound angle."""
        if self.kind in _FIXED_1Q:
            return _FIXED_1Q[self.kind]
        if self.kind in ROTATION_KINDS:
            if isinstance(self.angle, ParameterRef):
                raise UnboundCircuit(f"{self.kind.value} gate has an unbound parameter")
            return _rotation_matrix(self.kind, self.angle)
        if self.kind is GateKind.CNOT:
            return _CNOT_MAT
        if self.kind is GateKind.CZ:
            return _CZ_MAT
        return self.matrix


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over an ``n_qubits`` register with ``n_params`` free parameters."""

    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)
    n_params: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        if self.n_params < 0:
            raise ValueError("n_params must be non-negative")
        gates = tuple(self.gates)
        for gate in gates:
            if not isinstance(gate, Gate):
                raise TypeError(f"expected Gate, got {type(gate).__name__}")
            if max(gate.targets) >= self.n_qubits:
                raise ValueError(
                    f"gate {gate.kind.value} targets {gate.targets} outside "
                    f"{self.n_qubits}-qubit register"
                )
            if isinstance(gate.angle, ParameterRef) and gate.angle.index >= self.n_params:
                raise ValueError(
                    f"parameter index {gate.angle.index} out of range "
                    f"(n_params={self.n_params})"
                )
        object.__setattr__(self, "gates", gates)

    @classmethod
    def empty(cls, n_qubits: int) -> "Circuit":
        return cls(n_qubits, ())

    @property
    def is_bound(self) -> bool:
        return self.n_params == 0

    def bind(self, params: Sequence[float]) -> "Circuit":
        """Substitute the parameter vector, producing a fully bound circuit."""
        params = [float(p) for p in params]
        if len(params) != self.n_params:
            raise ArityMismatch(
                f"circuit takes {self.n_params} parameters, got {len(params)}"
            )
        bound = []
        for gate in self.gates:
            if isinstance(gate.angle, ParameterRef):
                gate = Gate(gate.kind, gate.targets, gate.angle.resolve(params))
            bound.append(gate)
        return Circuit(self.n_qubits, tuple(bound), 0)

    def compose(self, other: "Circuit") -> "Circuit":
        """This circuit followed by ``other`` on the same register."""
        if self.n_qubits != other.n_qubits:
            raise QubitCountMismatch(
                f"cannot compose {self.n_qubits}-qubit and {other.n_qubits}-qubit circuits"
            )
        return Circuit(
            self.n_qubits,
            self.gates + other.gates,
            max(self.n_params, other.n_params),
        )

    def __len__(self) -> int:
        return len(self.gates)

    # Text dump (debugging / golden tests; not a stable interchange format) --

    def to_text(self) -> str:
        lines = [f"QUBITS {self.n_qubits}", f"PARAMS {self.n_params}"]
        for gate in self.gates:
            if gate.kind is GateKind.RAW_UNITARY:
                raise ValueError("raw-unitary gates have no text form")
            tokens = [gate.kind.value] + [str(q) for q in gate.targets]
            if gate.kind in ROTATION_KINDS:
                tokens.append(_angle_to_text(gate.angle))
            lines.append(" ".join(tokens))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        n_qubits = n_params = None
        gates = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            head = tokens[0].upper()
            try:
                if head == "QUBITS":
                    n_qubits = int(tokens[1])
                elif head == "PARAMS":
                    n_params = int(tokens[1])
                else:
                    gates.append(_gate_from_tokens(head, tokens[1:]))
            except (IndexError, ValueError) as exc:
                raise ParseError(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
        if n_qubits is None:
            raise ParseError("missing QUBITS header")
        return cls(n_qubits, tuple(gates), n_params or 0)


_ANGLE_REF_RE = re.compile(
    r"@(?P<index>\d+)"
    r"(?:\*(?P<scale>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?"
    r"(?P<offset>[-+](?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?"
)


def _angle_to_text(angle) -> str:
    if isinstance(angle, ParameterRef):
        out = f"@{angle.index}"
        if angle.scale != 1.0:
            out += f"*{angle.scale:.17g}"
        if angle.offset != 0.0:
            out += f"{angle.offset:+.17g}"
        return out
    return f"{angle:.17g}"


def _angle_from_text(token: str):
    if token.startswith("@"):
        m = _ANGLE_REF_RE.fullmatch(token)
        if m is None:
            raise ValueError(f"bad parameter reference {token!r}")
        return ParameterRef(
            int(m.group("index")),
            float(m.group("scale")) if m.group("scale") else 1.0,
            float(m.group("offset")) if m.group("offset") else 0.0,
        )
    return float(token)


def _gate_from_tokens(head: str, rest: list[str]) -> Gate:
    try:
        kind = GateKind(head)
    except ValueError:
        raise ValueError(f"unknown gate {head!r}") from None
    if kind is GateKind.RAW_UNITARY:
        raise ValueError("raw-unitary gates have no text form")
    if kind in ROTATION_KINDS:
        *targets, angle = rest
        return Gate(kind, tuple(int(q) for q in targets), _angle_from_text(angle))
    return Gate(kind, tuple(int(q) for q in rest))


# Basis changes ---------------------------------------------------------------


def basis_change(term: PauliString, n_qubits: int) -> Circuit:
    """Circuit rotating each X/Y factor of ``term`` onto the Z axis.

    After this circuit, the term's expectation equals a Z-basis parity
    expectation on the same support: H maps X to Z, and Sdg followed by H
    maps Y to Z.
    """
    if term.n_qubits > n_qubits:
        raise QubitCountMismatch(
            f"term {term!r} needs {term.n_qubits} qubits, register has {n_qubits}"
        )
    gates = []
    for qubit, letter in sorted(term.ops.items()):
        if letter == "X":
            gates.append(Gate.h(qubit))
        elif letter == "Y":
            gates.append(Gate.sdg(qubit))
            gates.append(Gate.h(qubit))
    return Circuit(n_qubits, tuple(gates))


# Unitary oracle --------------------------------------------------------------


def embed_operator(matrix: np.ndarray, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Embed a ``2^k x 2^k`` operator on ``targets`` into the full register.

    ``targets[0]`` is the least significant bit of the local index.
    """
    k = len(targets)
    dim = 1 << n_qubits
    j = np.arange(dim)
    local_in = np.zeros(dim, dtype=np.int64)
    rest = j.copy()
    for b, q in enumerate(targets):
        local_in |= ((j >> q) & 1) << b
        rest &= ~(1 << q)
    full = np.zeros((dim, dim), dtype=complex)
    for local_out in range(1 << k):
        i = rest.copy()
        for b, q in enumerate(targets):
            if (local_out >> b) & 1:
                i |= 1 << q
        full[i, j] = matrix[local_out, local_in]
    return full


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Full-register unitary: product of gate matrices in application order.

    Raises:
        UnboundCircuit: if free parameters remain.
        OracleTooLarge: beyond ``UNITARY_ORACLE_MAX_QUBITS``.
    """
    if not circuit.is_bound:
        raise UnboundCircuit("cannot build the unitary of a parameterized circuit")
    if circuit.n_qubits > UNITARY_ORACLE_MAX_QUBITS:
        raise OracleTooLarge(
            f"unitary oracle capped at {UNITARY_ORACLE_MAX_QUBITS} qubits, "
            f"got {circuit.n_qubits}"
        )
    dim = 1 << circuit.n_qubits
    u = np.eye(dim, dtype=complex)
    for gate in circuit.gates:
        u = embed_operator(gate.bound_matrix(), gate.targets, circuit.n_qubits) @ u
    return u
