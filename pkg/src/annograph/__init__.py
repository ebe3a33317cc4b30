"""Annotation graphs with editors and codecs for time-aligned linguistic data."""

from .core import (
    AgError,
    Anchor,
    Annotation,
    AnnotationGraph,
    Region,
    Violation,
    format_seconds,
    parse_seconds,
)

__version__ = "0.1.0"

__all__ = [
    "AgError",
    "Anchor",
    "Annotation",
    "AnnotationGraph",
    "Region",
    "Violation",
    "format_seconds",
    "parse_seconds",
    "__version__",
]
