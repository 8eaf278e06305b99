"""Exception hierarchy for the cube engine.

Every error exposes a stable ``name`` (its class name).  The HTTP layer puts
that name verbatim in 400/404 response bodies and the CLI prints it, so the
class names are part of the public contract and must not be renamed casually.
"""


class CubeError(Exception):
    """Base class for all engine errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# --- column addressing ------------------------------------------------------

class UnknownColumn(CubeError):
    """A column name does not exist in the cube."""


class IndexOutOfRange(CubeError):
    """A row or column index is outside the valid range."""


# --- ingest -----------------------------------------------------------------

class EmptyInput(CubeError):
    """The CSV source contains no header row."""


class RaggedRow(CubeError):
    """A data row has a different cell count than the header."""


class MalformedCsv(CubeError):
    """The source is not parseable CSV (bad quoting, not UTF-8, ...)."""


# --- query state ------------------------------------------------------------

class NotAMeasure(CubeError):
    """A dimension column was used where a measure is required."""


class ColumnInUse(CubeError):
    """The column already plays another role in the query state."""


class AlreadyDrilled(CubeError):
    """The column is already in the drill-down list."""


class NotDrilled(CubeError):
    """The operation requires the column to be drilled down first."""


class FilterExists(CubeError):
    """The exact (column, value) filter is already present."""


class FilterNotFound(CubeError):
    """No such (column, value) filter to remove."""


# --- evaluation -------------------------------------------------------------

class StateInvalid(CubeError):
    """A query state is inconsistent with the cube it is evaluated against."""


class OffsetOutOfRange(CubeError):
    """A fact-table offset lies beyond the row count."""


# --- plotting ---------------------------------------------------------------

class EmptyPlot(CubeError):
    """The plot would contain no drawable data."""


class NegativePieValue(CubeError):
    """Pie charts cannot represent negative slice values."""


class RenderFailure(CubeError):
    """The renderer could not produce an image from a plot spec."""


# --- server -----------------------------------------------------------------

class UnknownDataset(CubeError):
    """No dataset with the given id is loaded."""


# --- benchmark --------------------------------------------------------------

class ProtocolUnsupported(CubeError):
    """The dataset does not have the shape the benchmark protocol needs."""
