"""Spreadsheet-style editing of timed rows.

A :class:`TableDoc` wraps an annotation graph whose ``row`` annotations are
the spreadsheet rows, plus presentation state: a display order, a cursor
(row, feature column, character offset), an optional captured time region,
and a visible-row filter.  Filters snapshot the matching rows, so rows
created afterwards stay visible until the filter changes.

A single ``config`` annotation inside the graph carries the column layout
and the display order, which keeps a saved document self-describing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    AgError,
    AnnotationGraph,
    Annotation,
    Region,
    format_seconds,
    id_number,
    parse_seconds,
)
from .formats.table import Column, TableConfig


class NoCurrentRowError(AgError):
    code = "no-current-row"


class NoRegionError(AgError):
    code = "no-region"


class UnknownColumnError(AgError):
    code = "unknown-column"


class EmptyQueryError(AgError):
    code = "empty-query"


class NoCursorError(AgError):
    code = "no-cursor"


class UnknownRowError(AgError):
    code = "unknown-row"


@dataclass
class Cursor:
    row: str
    column: int = 0
    offset: int = 0


class TableDoc:
    """Rows in a graph plus cursor, region, order and visibility state."""

    def __init__(self, config: TableConfig, graph: AnnotationGraph | None = None):
        self.config = config
        self.graph = graph if graph is not None else AnnotationGraph()
        self.row_order: list[str] = sorted(
            (e for e, a in self.graph.annotations.items() if a.type == "row"),
            key=id_number,
        )
        self.cursor: Cursor | None = None
        self.current_region: Region | None = None
        self.visible_ids: set[str] | None = None  # None means everything

    # -- state helpers -----------------------------------------------------

    @property
    def current_row(self) -> str | None:
        return self.cursor.row if self.cursor else None

    def visible_rows(self) -> list[str]:
        if self.visible_ids is None:
            return list(self.row_order)
        return [r for r in self.row_order if r in self.visible_ids]

    def row(self, ident: str) -> Annotation:
        ann = self.graph.annotations.get(ident)
        if ann is None or ann.type != "row":
            raise UnknownRowError(ident)
        return ann

    def cell(self, ident: str, column: int) -> str:
        names = self.config.column_names()
        if not 0 <= column < len(names):
            return ""
        return self.row(ident).features.get(names[column], "")

    def select_row(self, ident: str) -> None:
        self.row(ident)
        self.cursor = Cursor(ident)

    def set_region(self, region: Region | None) -> None:
        self.current_region = region

    # -- editing -----------------------------------------------------------

    def insert_row(self) -> str:
        """Add an empty row after the current one (else at the end).

        The captured region, when set, becomes the row's times.  The new
        row becomes current and stays visible under an active filter.
        """
        region = self.current_region
        start = self.graph.add_anchor(region.start if region else None)
        end = self.graph.add_anchor(region.end if region else None)
        features = {name: "" for name in self.config.column_names()}
        ident = self.graph.add_annotation("row", start, end, features)
        if self.cursor and self.cursor.row in self.row_order:
            at = self.row_order.index(self.cursor.row) + 1
        else:
            at = len(self.row_order)
        self.row_order.insert(at, ident)
        if self.visible_ids is not None:
            self.visible_ids.add(ident)
        self.cursor = Cursor(ident)
        return ident

    def delete_row(self) -> None:
        """Drop the current row; the cursor slides to the next visible row."""
        if not self.cursor:
            raise NoCurrentRowError("no row selected")
        ident = self.cursor.row
        at = self.row_order.index(ident)
        self.graph.delete_annotation(ident)
        self.row_order.remove(ident)
        if self.visible_ids is not None:
            self.visible_ids.discard(ident)
        column = self.cursor.column
        following = [r for r in self.row_order[at:] if self._visible(r)]
        preceding = [r for r in reversed(self.row_order[:at]) if self._visible(r)]
        if following:
            self.cursor = Cursor(following[0], column)
        elif preceding:
            self.cursor = Cursor(preceding[0], column)
        else:
            self.cursor = None

    def update_row_times(self) -> None:
        """Stamp the captured region onto the current row's anchors."""
        if not self.cursor:
            raise NoCurrentRowError("no row selected")
        if not self.current_region:
            raise NoRegionError("no region captured")
        ann = self.row(self.cursor.row)
        self.graph.anchors[ann.start].offset = self.current_region.start
        self.graph.anchors[ann.end].offset = self.current_region.end

    def set_cell(self, ident: str, column: str, value: str) -> None:
        if column not in self.config.column_names():
            raise UnknownColumnError(column)
        self.row(ident).features[column] = value

    def sort_rows(self, key: str) -> None:
        """Stable sort of the display order.

        ``start``/``end`` sort numerically with unset times first; any
        configured column sorts as text.
        """
        if key in ("start", "end"):
            def sort_key(ident: str):
                ann = self.row(ident)
                ref = ann.start if key == "start" else ann.end
                offset = self.graph.anchors[ref].offset
                return (0, 0) if offset is None else (1, offset)
        elif key in self.config.column_names():
            def sort_key(ident: str):
                return self.row(ident).features.get(key, "")
        else:
            raise UnknownColumnError(key)
        self.row_order.sort(key=sort_key)

    # -- search ------------------------------------------------------------

    def find(self, query: str) -> tuple[str, int, tuple[int, int]] | None:
        """Case-sensitive substring search over visible feature cells.

        Scanning starts at the cursor's cell and sweeps forward through the
        visible rows, wrapping once, so every visible cell is inspected
        exactly once.  A hit moves the cursor there and returns
        ``(row, column, (match_start, match_end))``.
        """
        if not query:
            raise EmptyQueryError("empty query")
        rows = self.visible_rows()
        if not rows:
            return None
        ncols = len(self.config.columns)
        if self.cursor and self.cursor.row in rows:
            row_at = rows.index(self.cursor.row)
            col_at = min(self.cursor.column, max(ncols - 1, 0))
        else:
            row_at, col_at = 0, 0
        cells = [
            (r, c)
            for i in range(len(rows))
            for r in [rows[(row_at + i) % len(rows)]]
            for c in range(ncols)
        ]
        offset = col_at  # skip the columns left of the cursor on the first row
        cells = cells[offset:] + cells[:offset]
        for ident, column in cells:
            text = self.cell(ident, column)
            at = text.find(query)
            if at >= 0:
                self.cursor = Cursor(ident, column, at)
                return ident, column, (at, at + len(query))
        return None

    # -- visibility --------------------------------------------------------

    def set_view_filter(self, column: str, value: str) -> None:
        """Show only rows whose ``column`` equals ``value`` exactly."""
        if column not in self.config.column_names():
            raise UnknownColumnError(column)
        self.visible_ids = {
            r for r in self.row_order if self.row(r).features.get(column, "") == value
        }
        self._rehome_cursor()

    def clear_view_filter(self) -> None:
        self.visible_ids = None

    def hide_all(self) -> None:
        self.visible_ids = set()
        self.cursor = None

    def _visible(self, ident: str) -> bool:
        return self.visible_ids is None or ident in self.visible_ids

    def _rehome_cursor(self) -> None:
        if self.cursor and not self._visible(self.cursor.row):
            at = self.row_order.index(self.cursor.row)
            column = self.cursor.column
            following = [r for r in self.row_order[at:] if self._visible(r)]
            preceding = [r for r in reversed(self.row_order[:at]) if self._visible(r)]
            if following:
                self.cursor = Cursor(following[0], column)
            elif preceding:
                self.cursor = Cursor(preceding[0], column)
            else:
                self.cursor = None

    # -- cursor movement ---------------------------------------------------

    def move_cursor(self, direction: str) -> None:
        """Move the cursor: up/down between rows, left/right/tab between
        columns, cell-left/cell-right within the cell text.  Every move
        clamps at the edges."""
        if not self.cursor:
            raise NoCursorError("no cursor")
        ncols = len(self.config.columns)
        last_col = max(ncols - 1, 0)
        cur = self.cursor
        if direction in ("right", "tab"):
            cur.column = min(cur.column + 1, last_col)
            cur.offset = 0
        elif direction == "left":
            cur.column = max(cur.column - 1, 0)
            cur.offset = 0
        elif direction in ("up", "down"):
            rows = self.visible_rows()
            if cur.row not in rows:
                return
            at = rows.index(cur.row)
            at = max(at - 1, 0) if direction == "up" else min(at + 1, len(rows) - 1)
            cur.row = rows[at]
            cur.offset = 0
        elif direction == "cell-left":
            cur.offset = max(cur.offset - 1, 0)
        elif direction == "cell-right":
            cur.offset = min(cur.offset + 1, len(self.cell(cur.row, cur.column)))
        else:
            raise AgError(f"unknown direction {direction!r}")

    # -- persistence -------------------------------------------------------

    def to_graph(self) -> AnnotationGraph:
        """Return the backing graph with the config annotation refreshed."""
        ann = _config_annotation(self.graph)
        if ann is None:
            start = self.graph.add_anchor()
            ident = self.graph.add_annotation("config", start, start, {"@kind": "table"})
            ann = self.graph.annotations[ident]
        features = {
            "@kind": "table",
            "@delimiter": self.config.delimiter,
            "@header": "1" if self.config.has_header else "0",
            "@roworder": " ".join(self.row_order),
        }
        for col in self.config.columns:
            features[f"col:{col.name}"] = str(col.width)
        ann.features = features
        return self.graph

    @classmethod
    def from_graph(cls, graph: AnnotationGraph) -> "TableDoc":
        ann = _config_annotation(graph)
        if ann is None:
            config = TableConfig()
        else:
            columns = [
                Column(name[4:], _safe_int(width))
                for name, width in ann.features.items()
                if name.startswith("col:")
            ]
            config = TableConfig(
                delimiter=ann.features.get("@delimiter", ","),
                columns=columns,
                has_header=ann.features.get("@header") == "1",
            )
        doc = cls(config, graph)
        if ann is not None:
            listed = [
                r
                for r in ann.features.get("@roworder", "").split()
                if r in graph.annotations and graph.annotations[r].type == "row"
            ]
            rest = [r for r in doc.row_order if r not in listed]
            doc.row_order = listed + rest
        return doc


def _config_annotation(graph: AnnotationGraph) -> Annotation | None:
    for ann in graph.annotations.values():
        if ann.type == "config":
            return ann
    return None


def _safe_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        return 10


def region_from_strings(start: str, end: str) -> Region:
    """Build a region from canonical second strings (service plumbing)."""
    try:
        return Region(parse_seconds(start), parse_seconds(end))
    except ValueError as exc:
        raise AgError(str(exc)) from None


def region_strings(region: Region) -> tuple[str, str]:
    return format_seconds(region.start), format_seconds(region.end)
