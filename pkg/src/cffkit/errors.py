"""Exception types raised across the package.

Every error is a subclass of :class:`CffkitError`, so callers can catch the
whole family with one clause.  Errors that correspond to a stdlib category
also inherit from it (``DivisionByZero`` is a ``ZeroDivisionError``, index
errors are ``IndexError``) so generic code keeps working.
"""


class CffkitError(Exception):
    """Base class for all cffkit errors."""


# --- finite fields ---

class NotPrime(CffkitError):
    """The requested characteristic is not a prime number."""


class DegreeZero(CffkitError):
    """Extension degree must be at least 1."""


class FieldTooLarge(CffkitError):
    """Field order exceeds the configured materialization bound."""


class LevelMismatch(CffkitError):
    """Operands belong to different (or incompatible) tower levels."""


class DivisionByZero(CffkitError, ZeroDivisionError):
    """Multiplicative inverse of the additive identity requested."""


# --- incidence matrices / group testing ---

class MatrixTooLarge(CffkitError):
    """Requested matrix exceeds the configured size limits."""


class NotBlockStructured(CffkitError):
    """Operation needs a matrix with polynomial block provenance."""


class TooFewBlocks(CffkitError):
    """More row blocks requested than the matrix provides."""


class BudgetExceeded(CffkitError):
    """Exhaustive search passed its work budget without finishing."""


class ColumnWeightNotConstant(CffkitError):
    """Certificate check requires all columns to have the same weight."""


class IndexOutOfRange(CffkitError, IndexError):
    """Column or row index outside the matrix dimensions."""


class TooManyCandidates(CffkitError):
    """Decoder found more surviving columns than the cover-free bound allows."""

    def __init__(self, candidates, d):
        self.candidates = sorted(candidates)
        self.d = d
        super().__init__(
            f"{len(self.candidates)} candidate defectives exceed capability d={d}"
        )


class InconsistentOutcome(CffkitError):
    """A failing test is not explained by any surviving column."""

    def __init__(self, row, candidates):
        self.row = row
        self.candidates = sorted(candidates)
        super().__init__(f"failing test {row} contains no candidate defective")


# --- parameter schedules / embeddings ---

class ParamViolation(CffkitError):
    """Construction hypothesis on (q, k, d, ...) does not hold."""


# --- combinatorial designs ---

class ArrayTooLarge(CffkitError):
    """Requested design array exceeds the configured cell limit."""


class WTooLarge(CffkitError):
    """Separation parameter above the (k-1)/(t-1) bound of the array."""


class TooFewColumns(CffkitError):
    """Column restriction asks for more columns than the array has."""


class NotNested(CffkitError):
    """Consecutive arrays lack the required top-left block structure."""


# --- tables / metrics ---

class UnknownTable(CffkitError):
    """No built-in table with the given identifier."""


class DUndefined(CffkitError):
    """Information bound is singular for d < 2."""
