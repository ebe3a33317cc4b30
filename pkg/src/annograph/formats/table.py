"""Delimiter-separated tables of timed rows.

The first two fields of every record are start and end times in decimal
seconds; the remaining fields are feature columns named by a
:class:`TableConfig`.  Quoting follows the usual spreadsheet convention:
fields containing the delimiter, a double quote or a line break are wrapped
in double quotes, and embedded quotes are doubled.

Empty time fields are read as unplaced anchors so that any document, timed
or not, survives an emit/parse cycle.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ..core import AgError, AnnotationGraph, format_seconds, id_number, parse_seconds


class BadTimeError(AgError):
    code = "bad-time"

    def __init__(self, message: str, row: int):
        super().__init__(f"{message} (record {row})")
        self.row = row


class ColumnCountMismatchError(AgError):
    code = "column-count-mismatch"

    def __init__(self, message: str, row: int):
        super().__init__(f"{message} (record {row})")
        self.row = row


@dataclass(frozen=True)
class Column:
    name: str
    width: int = 10


@dataclass
class TableConfig:
    """Column layout for a table document.

    ``columns`` names the feature columns only; start and end times are
    implicit and always come first.  ``delimiter`` is a single character.
    """

    delimiter: str = ","
    columns: list[Column] = field(default_factory=list)
    has_header: bool = False

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise AgError("delimiter must be a single character")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise AgError("column names must be unique")
        for c in self.columns:
            if not c.name:
                raise AgError("column names must be non-empty")

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]


def parse_table(text: str, config: TableConfig) -> AnnotationGraph:
    """Parse records into a graph of ``row`` annotations.

    Every record must have exactly ``2 + len(columns)`` fields.  Empty time
    fields yield unplaced anchors; malformed ones raise :class:`BadTimeError`.
    """
    graph = AnnotationGraph()
    reader = csv.reader(io.StringIO(text), delimiter=config.delimiter)
    expected = 2 + len(config.columns)
    for number, record in enumerate(reader, start=1):
        if not record:
            continue
        if len(record) != expected:
            raise ColumnCountMismatchError(
                f"expected {expected} fields, found {len(record)}", number
            )
        if config.has_header and number == 1:
            continue
        times = []
        for cell in record[:2]:
            if cell == "":
                times.append(None)
                continue
            try:
                times.append(parse_seconds(cell))
            except ValueError as exc:
                raise BadTimeError(str(exc), number) from None
        start = graph.add_anchor(times[0])
        end = graph.add_anchor(times[1])
        features = dict(zip(config.column_names(), record[2:]))
        graph.add_annotation("row", start, end, features)
    return graph


def emit_table(
    graph: AnnotationGraph,
    config: TableConfig,
    row_order: list[str] | None = None,
) -> str:
    """Emit ``row`` annotations, one record each, in ``row_order`` or id order."""
    if row_order is None:
        row_order = sorted(
            (e for e, a in graph.annotations.items() if a.type == "row"),
            key=id_number,
        )
    out = io.StringIO()
    writer = csv.writer(out, delimiter=config.delimiter, lineterminator="\n")
    if config.has_header:
        writer.writerow(["start", "end", *config.column_names()])
    for ident in row_order:
        ann = graph.annotations[ident]
        record = []
        for ref in (ann.start, ann.end):
            offset = graph.anchors[ref].offset
            record.append("" if offset is None else format_seconds(offset))
        record.extend(ann.features.get(name, "") for name in config.column_names())
        writer.writerow(record)
    return out.getvalue()


def emit_table_config(config: TableConfig) -> str:
    """Two delimited lines: column names, then column widths."""
    out = io.StringIO()
    writer = csv.writer(out, delimiter=config.delimiter, lineterminator="\n")
    writer.writerow(config.column_names())
    writer.writerow([c.width for c in config.columns])
    return out.getvalue()


def parse_table_config(
    text: str,
    delimiter: str | None = None,
    has_header: bool = False,
) -> TableConfig:
    """Read a config file written by :func:`emit_table_config`.

    When ``delimiter`` is not given it is recovered from the widths line as
    the first character that is not a digit (single-column files fall back
    to a comma).
    """
    lines = text.splitlines()
    if len(lines) < 2:
        raise AgError("config needs a names line and a widths line")
    if delimiter is None:
        delimiter = next((ch for ch in lines[1] if not ch.isdigit()), ",")
    names = next(csv.reader(io.StringIO(lines[0]), delimiter=delimiter))
    widths = next(csv.reader(io.StringIO(lines[1]), delimiter=delimiter))
    if len(names) != len(widths):
        raise ColumnCountMismatchError(
            f"{len(names)} names but {len(widths)} widths", 2
        )
    try:
        columns = [Column(n, int(w)) for n, w in zip(names, widths)]
    except ValueError as exc:
        raise AgError(f"bad width: {exc}") from None
    return TableConfig(delimiter=delimiter, columns=columns, has_header=has_header)
