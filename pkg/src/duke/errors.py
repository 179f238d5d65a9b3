"""Package exception types.

Every error renders as one machine-parsable line ``Name{key=value,...}`` so the
CLI can print it to stderr without formatting logic. ``exit_code`` drives the
process exit status: 1 usage, 2 data/contract, 3 verification failure.
"""

from __future__ import annotations


class DukeError(Exception):
    exit_code = 2

    def __init__(self, **details):
        self.details = dict(details)
        super().__init__(self._render())

    def _render(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.details.items())
        return f"{type(self).__name__}{{{inner}}}"


class UsageError(DukeError):
    """Bad command-line arguments or flag combinations."""

    exit_code = 1


class InvariantViolation(DukeError):
    """A verification property failed on a concrete instance."""

    exit_code = 3


# data ingestion
class RaggedRow(DukeError):
    """A CSV row whose arity differs from the first row."""


class MalformedValue(DukeError):
    """A token that does not parse as a float."""


class NonFiniteValue(DukeError):
    """NaN or infinity in loaded data."""


class TruncatedInput(DukeError):
    """raw-float32 payload not a whole number of rows."""


class EmptyInput(DukeError):
    """No data rows in the input."""


class MissingFile(DukeError):
    """Input path does not exist or cannot be read."""


class SizeMismatch(DukeError):
    """Companion file row count differs from the embedding file."""


# dataset semantics
class TooFewClasses(DukeError):
    """Margin weights need at least two probability columns."""


class ProbabilityOutOfRange(DukeError):
    """Probability entry outside [0, 1]."""


class RowSumError(DukeError):
    """Probability row does not sum to 1 within tolerance."""


class ZeroVectorCosine(DukeError):
    """Cosine distance is undefined for an all-zero row."""


class UnknownMetric(DukeError):
    """Metric name not in the supported set."""


# selection
class EmptyCenters(DukeError):
    """Cost of an empty center set is undefined."""


class BudgetExceedsGroundSet(DukeError):
    """k outside [1, n]."""


class GraphMismatch(DukeError):
    """Neighbor graph built over a different ground set."""


class TooManyWorkers(DukeError):
    """Partition count outside [1, n]."""


class InstanceTooLarge(DukeError):
    """C(n, k) exceeds the enumeration cap."""


class InvalidArgument(DukeError):
    """Generic precondition violation without a dedicated name."""
