"""Core annotation-graph model.

An annotation graph is a directed acyclic graph whose nodes ("anchors")
optionally carry time offsets and whose edges ("annotations") carry a type
plus an ordered feature map.  Times are integer microseconds everywhere; the
canonical text form is seconds with exactly six fractional digits, which
round-trips losslessly in both directions.

Graphs are plain mutable objects.  Deserializers may build them field by
field and then call :meth:`AnnotationGraph.sync_counters`; :meth:`validate`
reports invariant violations as data rather than raising, so damaged input
can be inspected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class AgError(Exception):
    """Base class for all domain errors.

    ``code`` is a stable kebab-case identifier, reused verbatim by the edit
    service when mapping errors onto HTTP responses.
    """

    code = "error"


class UnknownAnchorError(AgError):
    code = "unknown-anchor"


class UnknownAnnotationError(AgError):
    code = "unknown-annotation"


class CycleWouldFormError(AgError):
    code = "cycle-would-form"


class ReversedTimesError(AgError):
    code = "reversed-times"


class BadRangeError(AgError):
    code = "bad-range"


class BadRegionError(AgError):
    code = "bad-region"


# ---------------------------------------------------------------------------
# time values
# ---------------------------------------------------------------------------

_SECONDS_RE = re.compile(r"(\d+)(?:\.(\d{1,6}))?")


def format_seconds(micros: int) -> str:
    """Render integer microseconds as canonical seconds, e.g. ``1.500000``."""
    if micros < 0:
        raise ValueError("time offsets are non-negative")
    return f"{micros // 1_000_000}.{micros % 1_000_000:06d}"


def parse_seconds(text: str) -> int:
    """Parse a decimal seconds string into integer microseconds.

    At most six fractional digits are accepted; anything finer would not
    survive a round trip and is rejected.
    """
    m = _SECONDS_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad time value: {text!r}")
    whole, frac = m.group(1), m.group(2) or ""
    return int(whole) * 1_000_000 + int(frac.ljust(6, "0") or "0")


@dataclass(frozen=True)
class Region:
    """A closed time interval in integer microseconds, start <= end."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < 0:
            raise BadRegionError("region times are non-negative")
        if self.start > self.end:
            raise BadRegionError(
                f"region start {format_seconds(self.start)} after end "
                f"{format_seconds(self.end)}"
            )

    def __str__(self):
        return f"[{format_seconds(self.start)}, {format_seconds(self.end)}]"


# ---------------------------------------------------------------------------
# graph elements
# ---------------------------------------------------------------------------

ANCHOR_ID_RE = re.compile(r"a[1-9][0-9]*")
ANNOTATION_ID_RE = re.compile(r"e[1-9][0-9]*")


def id_number(ident: str) -> int:
    """Numeric part of an ``a<n>``/``e<n>`` id, used for ordering."""
    return int(ident[1:])


@dataclass
class Anchor:
    """A graph node; ``offset`` is microseconds or None when unplaced."""

    id: str
    offset: int | None = None
    unit: str = "sec"


@dataclass
class Annotation:
    """A labeled edge from ``start`` anchor to ``end`` anchor.

    ``features`` is insertion-ordered; names must be non-empty.
    """

    id: str
    type: str
    start: str
    end: str
    features: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :meth:`AnnotationGraph.validate`."""

    code: str
    ids: tuple[str, ...]
    detail: str = ""


class AnnotationGraph:
    """Anchors plus annotations, with monotonically increasing fresh ids.

    Ids are never reused within one graph's lifetime, including after
    deletions.
    """

    def __init__(self, id: str = "g1"):
        self.id = id
        self.anchors: dict[str, Anchor] = {}
        self.annotations: dict[str, Annotation] = {}
        self._next_anchor = 1
        self._next_annotation = 1

    def __eq__(self, other):
        if not isinstance(other, AnnotationGraph):
            return NotImplemented
        return (
            self.id == other.id
            and self.anchors == other.anchors
            and self.annotations == other.annotations
        )

    def __repr__(self):
        return (
            f"<AnnotationGraph {self.id}: {len(self.anchors)} anchors, "
            f"{len(self.annotations)} annotations>"
        )

    # -- construction ------------------------------------------------------

    def add_anchor(self, offset: int | None = None) -> str:
        """Create an anchor, optionally at ``offset`` microseconds."""
        if offset is not None and offset < 0:
            raise BadRegionError("anchor offsets are non-negative")
        ident = f"a{self._next_anchor}"
        self._next_anchor += 1
        self.anchors[ident] = Anchor(ident, offset)
        return ident

    def add_annotation(
        self,
        type: str,
        start: str,
        end: str,
        features: dict[str, str] | None = None,
    ) -> str:
        """Create an annotation from ``start`` to ``end``.

        The new edge must keep anchor precedence acyclic (zero-length
        annotations with ``start == end`` are fine) and must not reverse
        time order when both anchors are placed.
        """
        if start not in self.anchors:
            raise UnknownAnchorError(start)
        if end not in self.anchors:
            raise UnknownAnchorError(end)
        if start != end and self._has_path(end, start):
            raise CycleWouldFormError(f"{start} -> {end} closes a cycle")
        t0 = self.anchors[start].offset
        t1 = self.anchors[end].offset
        if t0 is not None and t1 is not None and t0 > t1:
            raise ReversedTimesError(
                f"{start}@{format_seconds(t0)} after {end}@{format_seconds(t1)}"
            )
        feats = dict(features) if features else {}
        for name in feats:
            if not name:
                raise AgError("feature names must be non-empty")
        ident = f"e{self._next_annotation}"
        self._next_annotation += 1
        self.annotations[ident] = Annotation(ident, type, start, end, feats)
        return ident

    def delete_annotation(self, ident: str) -> None:
        """Remove an annotation and garbage-collect anchors it orphaned."""
        if ident not in self.annotations:
            raise UnknownAnnotationError(ident)
        del self.annotations[ident]
        used = set()
        for ann in self.annotations.values():
            used.add(ann.start)
            used.add(ann.end)
        for aid in [a for a in self.anchors if a not in used]:
            del self.anchors[aid]

    # -- queries -----------------------------------------------------------

    def annotations_in_range(
        self, t0: int, t1: int, type: str | None = None
    ) -> list[str]:
        """Ids of annotations overlapping [t0, t1], point touches included.

        Only annotations whose two anchors both carry offsets participate.
        Results are ordered by (start, end, id).
        """
        if t0 > t1:
            raise BadRangeError(f"{format_seconds(t0)} > {format_seconds(t1)}")
        hits = []
        for ann in self.annotations.values():
            if type is not None and ann.type != type:
                continue
            s = self.anchors[ann.start].offset if ann.start in self.anchors else None
            e = self.anchors[ann.end].offset if ann.end in self.anchors else None
            if s is None or e is None:
                continue
            if s <= t1 and e >= t0:
                hits.append((s, e, id_number(ann.id), ann.id))
        return [ident for _, _, _, ident in sorted(hits)]

    # -- validation --------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every structural invariant; return violations as data.

        An empty report means the graph is well formed.  Works on graphs
        assembled by hand, so nothing here assumes constructor checks ran.
        """
        out: list[Violation] = []
        for aid, anchor in self.anchors.items():
            if not ANCHOR_ID_RE.fullmatch(aid):
                out.append(Violation("bad-anchor-id", (aid,)))
            if anchor.offset is not None and anchor.offset < 0:
                out.append(Violation("negative-offset", (aid,)))
        for eid, ann in self.annotations.items():
            if not ANNOTATION_ID_RE.fullmatch(eid):
                out.append(Violation("bad-annotation-id", (eid,)))
            for ref in (ann.start, ann.end):
                if ref not in self.anchors:
                    out.append(Violation("unknown-anchor", (eid, ref)))
            if ann.start in self.anchors and ann.end in self.anchors:
                s = self.anchors[ann.start].offset
                e = self.anchors[ann.end].offset
                if s is not None and e is not None and s > e:
                    out.append(Violation("reversed-times", (eid,)))
            for name in ann.features:
                if not name:
                    out.append(Violation("empty-feature-name", (eid,)))
        for component in self._cycles():
            out.append(
                Violation(
                    "cycle",
                    tuple(sorted(component, key=id_number)),
                    "anchor precedence is cyclic",
                )
            )
        return out

    # -- internals ---------------------------------------------------------

    def sync_counters(self) -> None:
        """Advance id counters past any id already present (after a load)."""
        for aid in self.anchors:
            if ANCHOR_ID_RE.fullmatch(aid):
                self._next_anchor = max(self._next_anchor, id_number(aid) + 1)
        for eid in self.annotations:
            if ANNOTATION_ID_RE.fullmatch(eid):
                self._next_annotation = max(
                    self._next_annotation, id_number(eid) + 1
                )

    def _edges(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {a: [] for a in self.anchors}
        for ann in self.annotations.values():
            if ann.start in self.anchors and ann.end in self.anchors:
                if ann.start != ann.end:
                    adj[ann.start].append(ann.end)
        return adj

    def _has_path(self, src: str, dst: str) -> bool:
        adj = self._edges()
        seen = {src}
        frontier = [src]
        while frontier:
            node = frontier.pop()
            if node == dst:
                return True
            for nxt in adj.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False

    def _cycles(self) -> list[list[str]]:
        """Strongly connected components of size > 1 (Tarjan, iterative)."""
        adj = self._edges()
        index: dict[str, int] = {}
        low: dict[str, int] = {}
        on_stack: set[str] = set()
        stack: list[str] = []
        counter = [0]
        components: list[list[str]] = []

        for root in adj:
            if root in index:
                continue
            work = [(root, iter(adj[root]))]
            index[root] = low[root] = counter[0]
            counter[0] += 1
            stack.append(root)
            on_stack.add(root)
            while work:
                node, it = work[-1]
                advanced = False
                for nxt in it:
                    if nxt not in index:
                        index[nxt] = low[nxt] = counter[0]
                        counter[0] += 1
                        stack.append(nxt)
                        on_stack.add(nxt)
                        work.append((nxt, iter(adj[nxt])))
                        advanced = True
                        break
                    if nxt in on_stack:
                        low[node] = min(low[node], index[nxt])
                if advanced:
                    continue
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    component = []
                    while True:
                        member = stack.pop()
                        on_stack.discard(member)
                        component.append(member)
                        if member == node:
                            break
                    if len(component) > 1:
                        components.append(component)
        return components
