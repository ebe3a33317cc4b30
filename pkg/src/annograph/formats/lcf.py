"""Line-oriented transcript files.

Each line is ``<start> <end> <speaker>: <text>`` with times in decimal
seconds.  Lines starting with ``#`` and blank lines are skipped.  Parsing
yields ``segment`` annotations with ``speaker`` and ``text`` features;
emission writes segments in time order with canonical six-digit times.
"""

from __future__ import annotations

import re

from ..core import AgError, AnnotationGraph, format_seconds, id_number, parse_seconds


class BadLineError(AgError):
    code = "bad-line"

    def __init__(self, message: str, lineno: int):
        super().__init__(f"{message} (line {lineno})")
        self.lineno = lineno


_LINE_RE = re.compile(r"(\S+)\s+(\S+)\s+([^:]*): ?(.*)", re.DOTALL)


def parse_lcf(text: str) -> AnnotationGraph:
    graph = AnnotationGraph()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _LINE_RE.fullmatch(line)
        if not m:
            raise BadLineError(f"expected start end speaker: text, got {line!r}", lineno)
        try:
            t0 = parse_seconds(m.group(1))
            t1 = parse_seconds(m.group(2))
        except ValueError as exc:
            raise BadLineError(str(exc), lineno) from None
        if t0 > t1:
            raise BadLineError("start after end", lineno)
        start = graph.add_anchor(t0)
        end = graph.add_anchor(t1)
        graph.add_annotation(
            "segment", start, end, {"speaker": m.group(3), "text": m.group(4)}
        )
    return graph


def emit_lcf(graph: AnnotationGraph) -> str:
    """Emit ``segment`` annotations in (start, end, id) order, one per line.

    Segments must have both anchors placed; other annotation types are
    passed over.
    """
    rows = []
    for ident, ann in graph.annotations.items():
        if ann.type != "segment":
            continue
        t0 = graph.anchors[ann.start].offset
        t1 = graph.anchors[ann.end].offset
        if t0 is None or t1 is None:
            raise BadLineError(f"segment {ident} has unplaced anchors", 0)
        rows.append((t0, t1, id_number(ident), ann))
    rows.sort(key=lambda r: r[:3])
    lines = []
    for t0, t1, _, ann in rows:
        speaker = ann.features.get("speaker", "")
        text = ann.features.get("text", "")
        lines.append(
            f"{format_seconds(t0)} {format_seconds(t1)} {speaker}: {text}"
        )
    return "".join(line + "\n" for line in lines)
