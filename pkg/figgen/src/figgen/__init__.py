"""figgen: publication-style figures from qdnoise result CSVs."""

__version__ = "0.1.0"

from .render import FigureSpec, RenderResult, count_local_minima, render
from .schema import EXPECTED_COLUMNS, KINDS, ResultTable, SchemaError, read_result_csv, validate_kind

__all__ = [
    "__version__",
    "EXPECTED_COLUMNS",
    "KINDS",
    "FigureSpec",
    "RenderResult",
    "ResultTable",
    "SchemaError",
    "count_local_minima",
    "read_result_csv",
    "render",
    "validate_kind",
]
