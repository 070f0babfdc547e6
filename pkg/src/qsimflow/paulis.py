"""Pauli-string algebra, Hermitian observables, and dense-matrix oracles.

Operators are represented as sums of Pauli strings with complex
coefficients.  The dense-matrix routines (:func:`to_dense_matrix`,
:func:`exact_ground_energy`, :func:`exact_evolve`,
:func:`exact_expectation`) are the exact oracles the rest of the library is
validated against; they are intentionally straightforward and capped at
``ORACLE_MAX_QUBITS``.

Convention used everywhere in this package: qubit 0 is the least
significant bit of a basis-state index, so the full matrix of a string is
``P_{n-1} (x) ... (x) P_1 (x) P_0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian, OracleTooLarge, ParseError

#: Dense oracles refuse registers larger than this (4096-dim matrices).
ORACLE_MAX_QUBITS = 12

#: Terms with |coefficient| below this are dropped by ``simplify``.
DEDUP_EPSILON = 1e-12

#: Coefficients with |imag| at or below this count as real for hermiticity.
HERMITIAN_TOL = 1e-10

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Single-qubit products a.b -> (phase, result), identity omitted.
_PRODUCT = {
    ("X", "X"): (1.0, "I"),
    ("Y", "Y"): (1.0, "I"),
    ("Z", "Z"): (1.0, "I"),
    ("X", "Y"): (1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"),
    ("Z", "Y"): (-1j, "X"),
    ("X", "Z"): (-1j, "Y"),
}


class PauliString:
    """Tensor product of single-qubit Pauli operators, identity elsewhere.

    Constructed from a mapping of qubit index to one of ``"X"``, ``"Y"``,
    ``"Z"`` (case-insensitive).  The empty mapping is the identity string.
    Instances are immutable, hashable, and ordered canonically by
    ``sort_key``.
    """

    __slots__ = ("_pairs",)

    def __init__(self, ops: Mapping[int, str] | Iterable[tuple[int, str]] = ()):
        items = ops.items() if isinstance(ops, Mapping) else list(ops)
        seen: set[int] = set()
        pairs = []
        for qubit, letter in items:
            if not isinstance(qubit, int) or isinstance(qubit, bool) or qubit < 0:
                raise ValueError(f"qubit index must be a non-negative int, got {qubit!r}")
            letter = str(letter).upper()
            if letter == "I":
                continue
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"invalid Pauli letter {letter!r}")
            if qubit in seen:
                raise ValueError(f"qubit {qubit} appears twice")
            seen.add(qubit)
            pairs.append((qubit, letter))
        self._pairs = tuple(sorted(pairs))

    @property
    def ops(self) -> dict[int, str]:
        return dict(self._pairs)

    @property
    def support(self) -> tuple[int, ...]:
        """Qubit indices acted on non-trivially, ascending."""
        return tuple(q for q, _ in self._pairs)

    @property
    def is_identity(self) -> bool:
        return not self._pairs

    @property
    def weight(self) -> int:
        return len(self._pairs)

    @property
    def n_qubits(self) -> int:
        """Smallest register size that contains this string."""
        return self._pairs[-1][0] + 1 if self._pairs else 0

    def sort_key(self) -> tuple:
        # Sort by support first, then X before Y before Z on each qubit.
        return (self.support, tuple(p for _, p in self._pairs))

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliString) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        if not self._pairs:
            return "I"
        return " ".join(f"{p}{q}" for q, p in self._pairs)


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings.

    Returns ``(phase, product)`` with ``phase`` in ``{1, -1, 1j, -1j}`` such
    that ``phase * product`` equals the operator product ``a . b``.
    """
    phase = 1 + 0j
    ops = a.ops
    for qubit, letter in b.ops.items():
        if qubit in ops:
            ph, result = _PRODUCT[(ops[qubit], letter)]
            phase *= ph
            if result == "I":
                del ops[qubit]
            else:
                ops[qubit] = result
        else:
            ops[qubit] = letter
    return phase, PauliString(ops)


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string: ``coefficient * string``."""

    coefficient: complex
    string: PauliString

    def __post_init__(self):
        c = complex(self.coefficient)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"coefficient must be finite, got {self.coefficient!r}")
        object.__setattr__(self, "coefficient", c)
        if not isinstance(self.string, PauliString):
            raise TypeError("string must be a PauliString")


class PauliSum:
    """Linear combination of Pauli strings with complex coefficients.

    Supports ``+``, ``-``, scalar ``*`` and ``/``, and operator products via
    ``*`` between sums.  Use :meth:`simplify` to merge like terms and drop
    negligible ones; simplified sums list terms in canonical order.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[PauliTerm] = ()):
        terms = tuple(terms)
        for t in terms:
            if not isinstance(t, PauliTerm):
                raise TypeError(f"expected PauliTerm, got {type(t).__name__}")
        self._terms = terms

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        return self._terms

    @property
    def n_qubits(self) -> int:
        """Smallest register size that contains every term."""
        return max((t.string.n_qubits for t in self._terms), default=0)

    def simplify(self, eps: float = DEDUP_EPSILON) -> "PauliSum":
        """Merge like terms, drop |coefficient| < ``eps``, sort canonically."""
        acc: dict[PauliString, complex] = {}
        for term in self._terms:
            acc[term.string] = acc.get(term.string, 0j) + term.coefficient
        kept = [(s, c) for s, c in acc.items() if abs(c) >= eps]
        kept.sort(key=lambda item: item[0].sort_key())
        return PauliSum(PauliTerm(c, s) for s, c in kept)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        """True when every coefficient is real (after simplification)."""
        return all(abs(t.coefficient.imag) <= tol for t in self.simplify().terms)

    def require_hermitian(self, what: str = "operator") -> "PauliSum":
        """Return the simplified sum with real coefficients, or raise.

        Raises:
            NotHermitian: if any simplified coefficient has an imaginary
                part above ``HERMITIAN_TOL``.
        """
        simplified = self.simplify()
        for t in simplified.terms:
            if abs(t.coefficient.imag) > HERMITIAN_TOL:
                raise NotHermitian(
                    f"{what} has non-real coefficient {t.coefficient} on {t.string!r}"
                )
        return PauliSum(PauliTerm(t.coefficient.real, t.string) for t in simplified.terms)

    # Arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "PauliSum":
        other = _as_sum(other)
        if other is NotImplemented:
            return NotImplemented
        return PauliSum(self._terms + other._terms)

    __radd__ = __add__

    def __sub__(self, other) -> "PauliSum":
        other = _as_sum(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PauliSum":
        other = _as_sum(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "PauliSum":
        return PauliSum(PauliTerm(-t.coefficient, t.string) for t in self._terms)

    def __mul__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex)) and not isinstance(other, bool):
            return PauliSum(PauliTerm(t.coefficient * other, t.string) for t in self._terms)
        if isinstance(other, PauliString):
            other = PauliSum([PauliTerm(1.0, other)])
        if isinstance(other, PauliSum):
            out = []
            for ta in self._terms:
                for tb in other._terms:
                    phase, product = multiply(ta.string, tb.string)
                    out.append(PauliTerm(ta.coefficient * tb.coefficient * phase, product))
            return PauliSum(out)
        return NotImplemented

    def __rmul__(self, other) -> "PauliSum":
        if isinstance(other, (int, float, complex)) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "PauliSum":
        return self * (1.0 / other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.simplify().terms == other.simplify().terms

    def __repr__(self) -> str:
        return f"PauliSum({format_pauli_sum(self)!r})"

    def __str__(self) -> str:
        return format_pauli_sum(self)


def _as_sum(value) -> "PauliSum":
    if isinstance(value, PauliSum):
        return value
    if isinstance(value, PauliString):
        return PauliSum([PauliTerm(1.0, value)])
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return PauliSum([PauliTerm(value, PauliString())])
    return NotImplemented


def X(qubit: int) -> PauliSum:
    return PauliSum([PauliTerm(1.0, PauliString({qubit: "X"}))])


def Y(qubit: int) -> PauliSum:
    return PauliSum([PauliTerm(1.0, PauliString({qubit: "Y"}))])


def Z(qubit: int) -> PauliSum:
    return PauliSum([PauliTerm(1.0, PauliString({qubit: "Z"}))])


def identity(coefficient: complex = 1.0) -> PauliSum:
    return PauliSum([PauliTerm(coefficient, PauliString())])


# Dense oracles -------------------------------------------------------------


@dataclass(frozen=True)
class DenseState:
    """Normalized statevector over ``n_qubits`` qubits.

    ``amplitudes[i]`` is the amplitude of basis state ``i`` with qubit 0 as
    the least significant bit of ``i``.
    """

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 1 << self.n_qubits:
            raise DimensionMismatch(
                f"expected {1 << self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-10:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm_sq!r}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def ground(cls, n_qubits: int) -> "DenseState":
        """The all-zeros computational basis state."""
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps, n_qubits)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "DenseState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(math.log2(amps.shape[0])))
        if 1 << n != amps.shape[0]:
            raise DimensionMismatch(f"length {amps.shape[0]} is not a power of two")
        return cls(amps, n)


def _coerce_state(psi) -> DenseState:
    if isinstance(psi, DenseState):
        return psi
    return DenseState.from_amplitudes(psi)


def _check_oracle_size(n: int):
    if n > ORACLE_MAX_QUBITS:
        raise OracleTooLarge(f"dense oracle capped at {ORACLE_MAX_QUBITS} qubits, got {n}")


def string_to_matrix(string: PauliString, n_qubits: int) -> np.ndarray:
    """Dense matrix of a single Pauli string on an ``n_qubits`` register."""
    _check_oracle_size(n_qubits)
    if n_qubits < max(string.n_qubits, 1):
        raise DimensionMismatch(
            f"string {string!r} needs at least {string.n_qubits} qubits, got {n_qubits}"
        )
    ops = string.ops
    factors = [PAULI_MATRICES[ops.get(q, "I")] for q in range(n_qubits - 1, -1, -1)]
    return reduce(np.kron, factors)


def to_dense_matrix(s: PauliSum, n_qubits: int) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of a Pauli sum.

    Raises:
        OracleTooLarge: when ``n_qubits`` exceeds ``ORACLE_MAX_QUBITS``.
        DimensionMismatch: when a term acts outside the register.
    """
    _check_oracle_size(n_qubits)
    if n_qubits < 1:
        raise DimensionMismatch("need at least one qubit")
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for term in s.terms:
        out += term.coefficient * string_to_matrix(term.string, n_qubits)
    return out


def exact_ground_energy(s: PauliSum, n_qubits: int) -> float:
    """Minimum eigenvalue of a Hermitian Pauli sum, by exact diagonalization."""
    h = s.require_hermitian("hamiltonian")
    mat = to_dense_matrix(h, n_qubits)
    return float(np.linalg.eigvalsh(mat)[0])


def exact_evolve(h: PauliSum, psi, t: float) -> DenseState:
    """Evolve ``psi`` under ``exp(-i h t)`` via exact eigendecomposition."""
    state = _coerce_state(psi)
    herm = h.require_hermitian("hamiltonian")
    if herm.n_qubits > state.n_qubits:
        raise DimensionMismatch(
            f"hamiltonian acts on {herm.n_qubits} qubits, state has {state.n_qubits}"
        )
    mat = to_dense_matrix(herm, state.n_qubits)
    evals, evecs = np.linalg.eigh(mat)
    amps = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ state.amplitudes))
    norm = float(np.linalg.norm(amps))
    assert abs(norm - 1.0) < 1e-9, "evolution drifted off the unit sphere"
    return DenseState(amps, state.n_qubits)


def _expectation_from_matrix(amplitudes: np.ndarray, matrix: np.ndarray) -> float:
    value = complex(np.vdot(amplitudes, matrix @ amplitudes))
    assert abs(value.imag) < 1e-9, f"expectation has imaginary part {value.imag}"
    return float(value.real)


def exact_expectation(psi, s: PauliSum) -> float:
    """``<psi| S |psi>`` for a Hermitian Pauli sum."""
    state = _coerce_state(psi)
    herm = s.require_hermitian("observable")
    if herm.n_qubits > state.n_qubits:
        raise DimensionMismatch(
            f"observable acts on {herm.n_qubits} qubits, state has {state.n_qubits}"
        )
    mat = to_dense_matrix(herm, state.n_qubits)
    return _expectation_from_matrix(state.amplitudes, mat)


def exact_observable_series(
    h: PauliSum, psi, obs: PauliSum, times: Sequence[float]
) -> np.ndarray:
    """``<obs>`` under exact evolution of ``psi`` by ``h`` at each time.

    One eigendecomposition is shared across all requested times, so this is
    the efficient reference for long time series.
    """
    state = _coerce_state(psi)
    herm = h.require_hermitian("hamiltonian")
    obs_h = obs.require_hermitian("observable")
    n = state.n_qubits
    if max(herm.n_qubits, obs_h.n_qubits) > n:
        raise DimensionMismatch("operator acts outside the state's register")
    evals, evecs = np.linalg.eigh(to_dense_matrix(herm, n))
    obs_mat = to_dense_matrix(obs_h, n)
    coeffs = evecs.conj().T @ state.amplitudes
    out = np.empty(len(times), dtype=float)
    for k, t in enumerate(times):
        amps = evecs @ (np.exp(-1j * evals * t) * coeffs)
        out[k] = _expectation_from_matrix(amps, obs_mat)
    return out


# Text format ---------------------------------------------------------------

_NUMBER_RE = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?")
_FACTOR_RE = re.compile(r"([IXYZ])(\d*)", re.IGNORECASE)


def _split_terms(text: str) -> list[str]:
    chunks, start = [], 0
    for i in range(1, len(text)):
        if text[i] not in "+-":
            continue
        prev = text[:i].rstrip()
        # Keep exponent signs ("1e-5") and signs right after '*' attached.
        if not prev or prev[-1] in "eE*":
            continue
        chunks.append(text[start:i])
        start = i
    chunks.append(text[start:])
    return chunks


def _parse_term(chunk: str) -> PauliTerm:
    original = chunk.strip()
    chunk = original
    sign = 1.0
    while chunk and chunk[0] in "+-":
        if chunk[0] == "-":
            sign = -sign
        chunk = chunk[1:].lstrip()
    coeff = sign
    m = _NUMBER_RE.match(chunk)
    if m:
        coeff = sign * float(m.group())
        chunk = chunk[m.end():].lstrip()
    if chunk.startswith("*"):
        chunk = chunk[1:].lstrip()
    if not chunk:
        return PauliTerm(coeff, PauliString())
    ops: dict[int, str] = {}
    for token in chunk.split():
        m = _FACTOR_RE.fullmatch(token)
        if m is None:
            raise ParseError(f"bad Pauli factor {token!r} in term {original!r}")
        letter, index = m.group(1).upper(), m.group(2)
        if letter == "I":
            continue
        if not index:
            raise ParseError(f"factor {token!r} needs a qubit index in term {original!r}")
        qubit = int(index)
        if qubit in ops:
            raise ParseError(f"qubit {qubit} repeated in term {original!r}")
        ops[qubit] = letter
    return PauliTerm(coeff, PauliString(ops))


def parse_pauli_sum(text: str) -> PauliSum:
    """Parse the textual operator format, e.g. ``-2.1433 * X0 X1 + 5.907``.

    Terms are joined by ``+``/``-``; each is ``coeff * P_i P_j ...`` with an
    optional coefficient (default 1) and optional ``*``.  ``I`` (or a bare
    coefficient, or an empty document) denotes the identity.  Pauli letters
    are case-insensitive.
    """
    stripped = text.strip()
    if not stripped:
        return identity()
    return PauliSum(_parse_term(chunk) for chunk in _split_terms(stripped))


def _format_coefficient(c: complex) -> str:
    if abs(c.imag) <= 1e-14:
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def format_pauli_sum(s: PauliSum) -> str:
    """Inverse of :func:`parse_pauli_sum` (up to float formatting)."""
    if not s.terms:
        return "0"
    parts = []
    for k, term in enumerate(s.terms):
        c = term.coefficient
        if k == 0:
            body = _format_coefficient(c)
        elif abs(c.imag) <= 1e-14 and c.real < 0:
            body = f"- {_format_coefficient(-c)}"
        else:
            body = f"+ {_format_coefficient(c)}"
        parts.append(f"{body} * {term.string!r}")
    return " ".join(parts)
