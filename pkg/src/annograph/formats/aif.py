"""Canonical XML serialization for annotation graphs.

The document shape is fixed::

    <AGSet id="S">
     <AG id="g1">
      <Anchor id="a1" offset="1.500000" unit="sec"/>
      <Annotation id="e1" type="segment" start="a1" end="a2">
       <Feature name="text">hi</Feature>
      </Annotation>
     </AG>
    </AGSet>

Emission is canonical: UTF-8, one space of indent per depth, anchors and
annotations ordered by numeric id, features in insertion order, offsets with
six fractional digits.  Re-emitting a parsed canonical file reproduces it
byte for byte.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from ..core import (
    AgError,
    ANCHOR_ID_RE,
    ANNOTATION_ID_RE,
    Anchor,
    Annotation,
    AnnotationGraph,
    format_seconds,
    id_number,
    parse_seconds,
)


class MalformedXmlError(AgError):
    code = "malformed-xml"

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class SchemaViolationError(AgError):
    code = "schema-violation"

    def __init__(self, element: str, reason: str):
        super().__init__(f"<{element}>: {reason}")
        self.element = element
        self.reason = reason


class DuplicateIdError(AgError):
    code = "duplicate-id"


def parse_aif(text: str | bytes) -> list[AnnotationGraph]:
    """Parse an AGSet document into one graph per AG element."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else 0
        raise MalformedXmlError(str(exc), line) from None
    if root.tag != "AGSet":
        raise SchemaViolationError(root.tag, "document root must be AGSet")
    if "id" not in root.attrib:
        raise SchemaViolationError("AGSet", "missing id")
    graphs = []
    seen_graphs = set()
    for child in root:
        if child.tag != "AG":
            raise SchemaViolationError(child.tag, "AGSet holds only AG elements")
        graph = _parse_ag(child)
        if graph.id in seen_graphs:
            raise DuplicateIdError(graph.id)
        seen_graphs.add(graph.id)
        graphs.append(graph)
    return graphs


def _parse_ag(element: ET.Element) -> AnnotationGraph:
    if "id" not in element.attrib:
        raise SchemaViolationError("AG", "missing id")
    graph = AnnotationGraph(element.attrib["id"])
    for child in element:
        if child.tag == "Anchor":
            _parse_anchor(graph, child)
        elif child.tag == "Annotation":
            _parse_annotation(graph, child)
        else:
            raise SchemaViolationError(
                child.tag, "AG holds only Anchor and Annotation elements"
            )
    for ann in graph.annotations.values():
        for ref in (ann.start, ann.end):
            if ref not in graph.anchors:
                raise SchemaViolationError(
                    "Annotation", f"{ann.id} references missing anchor {ref}"
                )
    graph.sync_counters()
    return graph


def _parse_anchor(graph: AnnotationGraph, element: ET.Element) -> None:
    ident = element.attrib.get("id")
    if ident is None or not ANCHOR_ID_RE.fullmatch(ident):
        raise SchemaViolationError("Anchor", f"bad id {ident!r}")
    if ident in graph.anchors:
        raise DuplicateIdError(ident)
    if element.attrib.get("unit", "sec") != "sec":
        raise SchemaViolationError("Anchor", "unit must be sec")
    offset = None
    if "offset" in element.attrib:
        try:
            offset = parse_seconds(element.attrib["offset"])
        except ValueError as exc:
            raise SchemaViolationError("Anchor", str(exc)) from None
    if len(element) or (element.text or "").strip():
        raise SchemaViolationError("Anchor", "anchors are empty elements")
    graph.anchors[ident] = Anchor(ident, offset)


def _parse_annotation(graph: AnnotationGraph, element: ET.Element) -> None:
    ident = element.attrib.get("id")
    if ident is None or not ANNOTATION_ID_RE.fullmatch(ident):
        raise SchemaViolationError("Annotation", f"bad id {ident!r}")
    if ident in graph.annotations:
        raise DuplicateIdError(ident)
    for required in ("type", "start", "end"):
        if required not in element.attrib:
            raise SchemaViolationError("Annotation", f"{ident} missing {required}")
    features: dict[str, str] = {}
    for child in element:
        if child.tag != "Feature":
            raise SchemaViolationError(
                child.tag, "annotations hold only Feature elements"
            )
        name = child.attrib.get("name")
        if not name:
            raise SchemaViolationError("Feature", "missing or empty name")
        if name in features:
            raise DuplicateIdError(f"feature {name!r} on {ident}")
        if len(child):
            raise SchemaViolationError("Feature", "features hold text only")
        features[name] = child.text or ""
    graph.annotations[ident] = Annotation(
        ident,
        element.attrib["type"],
        element.attrib["start"],
        element.attrib["end"],
        features,
    )


def emit_aif(graphs: list[AnnotationGraph], set_id: str = "S") -> str:
    """Emit graphs as one canonical AGSet document."""
    lines = [f"<AGSet id={quoteattr(set_id)}>"]
    for graph in graphs:
        lines.append(f" <AG id={quoteattr(graph.id)}>")
        for anchor in sorted(graph.anchors.values(), key=lambda a: id_number(a.id)):
            attrs = f"id={quoteattr(anchor.id)}"
            if anchor.offset is not None:
                attrs += f" offset={quoteattr(format_seconds(anchor.offset))}"
            attrs += f" unit={quoteattr(anchor.unit)}"
            lines.append(f"  <Anchor {attrs}/>")
        for ann in sorted(graph.annotations.values(), key=lambda e: id_number(e.id)):
            attrs = (
                f"id={quoteattr(ann.id)} type={quoteattr(ann.type)} "
                f"start={quoteattr(ann.start)} end={quoteattr(ann.end)}"
            )
            if not ann.features:
                lines.append(f"  <Annotation {attrs}/>")
                continue
            lines.append(f"  <Annotation {attrs}>")
            for name, value in ann.features.items():
                if value:
                    body = escape(value, {"\r": "&#13;"})
                    lines.append(
                        f"   <Feature name={quoteattr(name)}>{body}</Feature>"
                    )
                else:
                    lines.append(f"   <Feature name={quoteattr(name)}/>")
            lines.append("  </Annotation>")
        lines.append(" </AG>")
    lines.append("</AGSet>")
    return "\n".join(lines) + "\n"
