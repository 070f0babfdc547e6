"""Exception hierarchy shared across the library.

Everything raised on a contract violation derives from :class:`QsimflowError`
so callers (and the CLI) can catch library failures in one place.
"""


class QsimflowError(Exception):
    """Base class for all qsimflow errors."""


# Operator algebra and dense oracles -------------------------------------

class OracleTooLarge(QsimflowError):
    """A dense-matrix oracle was requested beyond its qubit bound."""


class NotHermitian(QsimflowError):
    """An operator is not Hermitian where hermiticity is required."""


class DimensionMismatch(QsimflowError):
    """State and operator dimensions disagree."""


class ParseError(QsimflowError):
    """Malformed textual input (Pauli sums, circuit dumps, JSON configs)."""


# Circuits ----------------------------------------------------------------

class ArityMismatch(QsimflowError):
    """A parameter vector has the wrong length for its target."""


class QubitCountMismatch(QsimflowError):
    """Two circuits or a circuit and an operator disagree on register size."""


class UnboundCircuit(QsimflowError):
    """An operation requires a fully bound circuit but free parameters remain."""


# Backend -----------------------------------------------------------------

class TooManyQubits(QsimflowError):
    """Circuit exceeds the backend's configured qubit cap."""


class UnknownBackend(QsimflowError):
    """No backend registered under the requested name."""


# Models ------------------------------------------------------------------

class TooFewSpins(QsimflowError):
    """Chain Hamiltonians need at least two spins."""


class UnknownModel(QsimflowError):
    """No model builder registered under the requested name."""


class UnknownObservable(QsimflowError):
    """No named observable registered under the requested name."""


class MissingParameter(QsimflowError):
    """A required model parameter is absent."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"missing required parameter {key!r}")


class BadParameterType(QsimflowError):
    """A model parameter has the wrong type or an invalid value."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"parameter {key!r} has the wrong type")


class UnknownParameter(QsimflowError):
    """A model parameter key is not recognized (typo guard)."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"unknown parameter {key!r}")


class InvalidModel(QsimflowError):
    """A model does not meet a workflow's requirements."""


# Ansatz ------------------------------------------------------------------

class NotDiagonal(QsimflowError):
    """A cost operator contains X/Y factors where only Z/I are allowed."""


# Evaluator ---------------------------------------------------------------

class EmptyCounts(QsimflowError):
    """Shot counts are empty; no expectation value can be formed."""


# Workflows ---------------------------------------------------------------

class UnknownWorkflow(QsimflowError):
    """No workflow registered under the requested name."""


class UnknownOptimizer(QsimflowError):
    """No optimizer registered under the requested name."""


class InvalidConfig(QsimflowError):
    """A workflow configuration key is unknown, missing, or ill-typed."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"invalid configuration key {key!r}")


class ParameterizedModelUnsupported(QsimflowError):
    """Time evolution requires a fully bound (parameter-free) model."""


# Validation --------------------------------------------------------------

class LengthMismatch(QsimflowError):
    """Two series must have equal length to be compared."""


class EmptySeries(QsimflowError):
    """Distance measures are undefined on empty series."""


class MissingKey(QsimflowError):
    """A result or config key is absent."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"missing key {key!r}")


class UnknownMetric(QsimflowError):
    """No distance metric registered under the requested name."""


class MissingReference(QsimflowError):
    """No reference supplied and none derivable for validation."""


# Config / CLI ------------------------------------------------------------

class UnknownKey(QsimflowError):
    """A config document contains an unrecognized key."""

    def __init__(self, path, message=None):
        self.path = path
        super().__init__(message or f"unknown key {path}")


class ConfigTypeError(QsimflowError):
    """A config value has the wrong JSON type."""

    def __init__(self, path, message=None):
        self.path = path
        super().__init__(message or f"wrong type at {path}")
