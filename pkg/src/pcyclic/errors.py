"""Exception hierarchy shared by every module of the package."""


class PCyclicError(Exception):
    """Base class for all errors raised by pcyclic."""


class ContainmentViolation(PCyclicError):
    """A sublattice is not contained in the ambient lattice."""


class NotPPrimary(PCyclicError):
    """A finite quotient has a prime factor other than p."""


class InfiniteQuotient(PCyclicError):
    """A quotient of lattices has positive rank."""


class BadLevel(PCyclicError):
    """A subgroup level index is out of range."""


class BadIndex(PCyclicError):
    """An indecomposable index Y_i is out of range."""


class InvalidLattice(PCyclicError):
    """The action matrix does not define a lattice over the cyclic group."""


class InvalidModule(PCyclicError):
    """Presentation data does not define a finite module or module map."""


class MixedGroup(PCyclicError):
    """Objects over different (p, n) were combined."""


class NotUnimodular(PCyclicError):
    """A change-of-basis matrix is not invertible over the integers."""


class WitnessNotFound(PCyclicError):
    """The bounded search for free-summand witnesses failed.

    ``rank`` still carries the (formula-derived) free rank.
    """

    def __init__(self, message, rank):
        super().__init__(message)
        self.rank = rank


class ExponentTooLarge(PCyclicError):
    """An operation requiring exponent p received a larger exponent."""


class CapExceeded(PCyclicError):
    """An exhaustive search would exceed the configured size cap."""


class InconsistentProfile(PCyclicError):
    """A reference character profile yields negative multiplicities."""


class UnsupportedLevel(PCyclicError):
    """Enumeration was requested for an unsupported group level."""


class MissingField(PCyclicError):
    """A bound evaluator was called without a required input."""


class AxiomViolation(PCyclicError):
    """A Yakovlev diagram or module map failed an axiom check."""

    def __init__(self, message, dump=""):
        super().__init__(message)
        self.dump = dump


class OracleMismatch(PCyclicError):
    """Two independent computations of the same quantity disagree."""


class FileSyntaxError(PCyclicError):
    """A lattice file is not well-formed JSON; carries line and column."""

    def __init__(self, message, line=0, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(PCyclicError):
    """A lattice file is well-formed but describes no valid lattice."""

    def __init__(self, message, field=""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class VersionError(PCyclicError):
    """A lattice file declares an unsupported format version."""
