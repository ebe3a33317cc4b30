"""Interlinear text: aligned tiers of cells under sentence units.

A :class:`TypeConfig` declares the tier types (say FT, WD, MP, MP-GLOSS),
which type dominates which (WD over MP), and which types are equivalent
views of one thing (MP and MP-GLOSS).  Equivalence-class members live on a
single :class:`Cell` as one text per member type, so the class can never
fall out of step.  Dominance is restricted to chains: a tier has at most
one parent tier and at most one child tier, which is what keeps the graph
serialization (span nesting over unit-local anchors) unambiguous.

Units hold an ordered run of top-tier cells plus a free-translation text.
Splitting a cell splits its co-texts at the same (clamped) offset and deals
children to the halves by cumulative text length; joining concatenates
texts with the per-type separator and merges child runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    AgError,
    Annotation,
    AnnotationGraph,
    Region,
    format_seconds,
    id_number,
    parse_seconds,
)


class NoCurrentError(AgError):
    code = "no-current"


class BadTextOffsetError(AgError):
    code = "bad-text-offset"


class SplitPointOutOfRangeError(AgError):
    code = "split-point-out-of-range"


class NoPreviousSiblingError(AgError):
    code = "no-previous-sibling"


class OutsideParentError(AgError):
    code = "outside-parent"


class InvalidTypeConfigError(AgError):
    code = "invalid-type-config"


class UnknownCellError(AgError):
    code = "unknown-cell"


class IlEncodingError(AgError):
    code = "bad-interlinear-encoding"


FT_DEFAULT = "FT"


@dataclass
class TypeConfig:
    """Tier declarations: order, dominance chain, equivalence, separators."""

    types: list[str] = field(default_factory=list)
    dominates: list[tuple[str, str]] = field(default_factory=list)
    classes: list[list[str]] = field(default_factory=list)
    separators: dict[str, str] = field(default_factory=dict)
    ft_type: str = FT_DEFAULT

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        seen = set()
        for name in self.types:
            if not name or any(ch.isspace() for ch in name) or ";" in name or ">" in name:
                raise InvalidTypeConfigError(f"bad type name {name!r}")
            if name in seen:
                raise InvalidTypeConfigError(f"type {name!r} declared twice")
            seen.add(name)
        claimed = set()
        for members in self.classes:
            for member in members:
                if member not in seen:
                    raise InvalidTypeConfigError(f"unknown type {member!r} in class")
                if member in claimed:
                    raise InvalidTypeConfigError(f"{member!r} is in two classes")
                claimed.add(member)
        for parent, child in self.dominates:
            for name in (parent, child):
                if name not in seen:
                    raise InvalidTypeConfigError(f"unknown type {name!r} in dominance")
            if self.ft_type in (parent, child):
                raise InvalidTypeConfigError("the free-translation tier stands alone")
        # Lift dominance to classes and demand a chain forest.
        up: dict[str, str] = {}
        down: dict[str, str] = {}
        for parent, child in self.dominates:
            prep, crep = self.representative(parent), self.representative(child)
            if prep == crep:
                raise InvalidTypeConfigError(f"{parent!r} dominates its own class")
            if up.get(crep, prep) != prep:
                raise InvalidTypeConfigError(f"{child!r} has two parent tiers")
            if down.get(prep, crep) != crep:
                raise InvalidTypeConfigError(f"{parent!r} dominates two tiers")
            up[crep] = prep
            down[prep] = crep
        for start in up:
            node, steps = start, 0
            while node in up:
                node = up[node]
                steps += 1
                if steps > len(self.types):
                    raise InvalidTypeConfigError("dominance loops")

    # -- class/chain lookups ------------------------------------------------

    def class_of(self, type_name: str) -> list[str]:
        for members in self.classes:
            if type_name in members:
                return [t for t in self.types if t in members]
        return [type_name]

    def representative(self, type_name: str) -> str:
        return self.class_of(type_name)[0]

    def child_class(self, type_name: str) -> str | None:
        rep = self.representative(type_name)
        for parent, child in self.dominates:
            if self.representative(parent) == rep:
                return self.representative(child)
        return None

    def parent_class(self, type_name: str) -> str | None:
        rep = self.representative(type_name)
        for parent, child in self.dominates:
            if self.representative(child) == rep:
                return self.representative(parent)
        return None

    def top_class(self) -> str | None:
        for name in self.types:
            if name == self.ft_type:
                continue
            if self.parent_class(name) is None:
                return self.representative(name)
        return None

    def separator(self, type_name: str) -> str:
        return self.separators.get(type_name, "")

    def class_depth(self, type_name: str) -> int:
        depth = 0
        node = self.representative(type_name)
        while (parent := self.parent_class(node)) is not None:
            node = parent
            depth += 1
        return depth


@dataclass
class Cell:
    """One tier item; ``texts`` holds every equivalence-class member text."""

    id: str
    type: str  # class representative
    texts: dict[str, str]
    region: Region | None = None
    parent: str | None = None
    children: list[str] = field(default_factory=list)


@dataclass
class Unit:
    """A sentence: top-tier cells in order plus the free translation."""

    id: str
    ft: str = ""
    tops: list[str] = field(default_factory=list)


class IlDoc:
    """Units and cells under one :class:`TypeConfig`."""

    def __init__(self, config: TypeConfig):
        self.config = config
        self.units: list[Unit] = []
        self.cells: dict[str, Cell] = {}
        self.current: tuple[str, str] | None = None  # (cell id, viewed type)
        self.current_unit: str | None = None
        self._next_id = 1

    # -- plumbing ------------------------------------------------------------

    def _fresh_id(self, prefix: str = "c") -> str:
        ident = f"{prefix}{self._next_id}"
        self._next_id += 1
        return ident

    def cell(self, ident: str) -> Cell:
        try:
            return self.cells[ident]
        except KeyError:
            raise UnknownCellError(ident) from None

    def unit(self, ident: str) -> Unit:
        for u in self.units:
            if u.id == ident:
                return u
        raise UnknownCellError(ident)

    def unit_of(self, ident: str) -> Unit:
        cell = self.cell(ident)
        while cell.parent is not None:
            cell = self.cell(cell.parent)
        for u in self.units:
            if cell.id in u.tops:
                return u
        raise UnknownCellError(ident)

    def add_unit(self, ft: str = "") -> str:
        unit = Unit(self._fresh_id("u"), ft)
        self.units.append(unit)
        self.current_unit = unit.id
        return unit.id

    def set_free_translation(self, unit_id: str, text: str) -> None:
        self.unit(unit_id).ft = text

    def select_cell(self, ident: str, type_name: str | None = None) -> None:
        cell = self.cell(ident)
        viewed = cell.type if type_name is None else type_name
        if self.config.representative(viewed) != cell.type:
            raise UnknownCellError(f"{ident} has no {viewed} text")
        self.current = (ident, viewed)
        self.current_unit = self.unit_of(ident).id

    def select_unit(self, ident: str) -> None:
        self.unit(ident)
        self.current = None
        self.current_unit = ident

    def set_cell_text(self, ident: str, type_name: str, text: str) -> None:
        cell = self.cell(ident)
        if type_name not in cell.texts:
            raise UnknownCellError(f"{ident} has no {type_name} text")
        cell.texts[type_name] = text

    def siblings(self, cell: Cell) -> list[str]:
        if cell.parent is not None:
            return self.cell(cell.parent).children
        return self.unit_of(cell.id).tops

    def cells_of_type(self, unit: Unit, type_name: str) -> list[str]:
        """The unit's cells of one tier, in document order."""
        rep = self.config.representative(type_name)
        level = [t for t in unit.tops]
        while level:
            if self.cells[level[0]].type == rep:
                return level
            nxt: list[str] = []
            for ident in level:
                nxt.extend(self.cells[ident].children)
            level = nxt
        return []

    def _empty_cell(self, type_name: str, parent: str | None) -> str:
        rep = self.config.representative(type_name)
        texts = {t: "" for t in self.config.class_of(rep)}
        ident = self._fresh_id()
        self.cells[ident] = Cell(ident, rep, texts, parent=parent)
        return ident

    def _cascade_children(self, ident: str) -> None:
        cell = self.cells[ident]
        child = self.config.child_class(cell.type)
        if child is None:
            return
        child_id = self._empty_cell(child, ident)
        cell.children.append(child_id)
        self._cascade_children(child_id)

    # -- editing ---------------------------------------------------------------

    def insert_cell_after(self) -> str:
        """Insert an empty cell after the current one (same tier, same
        parent), with one empty child per dominated tier; with only a unit
        selected, start that unit's top tier instead."""
        if self.current is not None:
            ident, viewed = self.current
            cell = self.cell(ident)
            fresh = self._empty_cell(cell.type, cell.parent)
            self._cascade_children(fresh)
            siblings = self.siblings(cell)
            siblings.insert(siblings.index(ident) + 1, fresh)
            self.current = (fresh, viewed)
            return fresh
        if self.current_unit is not None:
            top = self.config.top_class()
            if top is None:
                raise InvalidTypeConfigError("no tiers configured")
            unit = self.unit(self.current_unit)
            fresh = self._empty_cell(top, None)
            self._cascade_children(fresh)
            unit.tops.append(fresh)
            self.current = (fresh, top)
            return fresh
        raise NoCurrentError("nothing selected")

    def delete_cell(self, ident: str) -> None:
        """Remove a cell, everything it dominates, and its co-texts with it."""
        cell = self.cell(ident)
        self.siblings(cell).remove(ident)
        stack = [ident]
        while stack:
            cid = stack.pop()
            stack.extend(self.cells[cid].children)
            del self.cells[cid]
        if self.current and self.current[0] not in self.cells:
            self.current = None

    def split_cell(self, text_offset: int, t: int | None = None) -> tuple[str, str]:
        """Split the current cell in two at ``text_offset``.

        Co-texts split at the same offset, clamped to their length; the
        boundary loses trailing spaces on the left and leading spaces on
        the right.  Children go to whichever half the running total of
        their text lengths reaches first.  With a split time the region
        divides at ``t``; without one the halves are unaligned.
        """
        if self.current is None:
            raise NoCurrentError("no cell selected")
        ident, viewed = self.current
        cell = self.cell(ident)
        text = cell.texts[viewed]
        if not 0 <= text_offset <= len(text):
            raise BadTextOffsetError(f"{text_offset} outside the {viewed} text")
        regions: tuple[Region | None, Region | None] = (None, None)
        if t is not None:
            if cell.region is None or not cell.region.start < t < cell.region.end:
                raise SplitPointOutOfRangeError(
                    f"{format_seconds(t)} outside {cell.region}"
                )
            regions = (Region(cell.region.start, t), Region(t, cell.region.end))

        left = Cell(self._fresh_id(), cell.type, {}, regions[0], cell.parent)
        right = Cell(self._fresh_id(), cell.type, {}, regions[1], cell.parent)
        for member, value in cell.texts.items():
            at = text_offset if member == viewed else min(text_offset, len(value))
            left.texts[member] = value[:at].rstrip(" ")
            right.texts[member] = value[at:].lstrip(" ")

        boundary = 0
        for child_id in cell.children:
            child = self.cells[child_id]
            boundary += len(child.texts[child.type])
            side = left if boundary <= text_offset else right
            side.children.append(child_id)
            child.parent = side.id

        siblings = self.siblings(cell)
        at = siblings.index(ident)
        self.cells[left.id] = left
        self.cells[right.id] = right
        siblings[at : at + 1] = [left.id, right.id]
        del self.cells[ident]
        self.current = (right.id, viewed)
        return left.id, right.id

    def join_cell(self) -> str:
        """Merge the current cell into the sibling just before it.

        Texts (and co-texts) concatenate with the tier's separator;
        children line up back to back; regions merge only when both halves
        had one.
        """
        if self.current is None:
            raise NoCurrentError("no cell selected")
        ident, viewed = self.current
        cell = self.cell(ident)
        siblings = self.siblings(cell)
        at = siblings.index(ident)
        if at == 0:
            raise NoPreviousSiblingError(ident)
        prev = self.cell(siblings[at - 1])
        sep = self.config.separator(viewed)
        merged = Cell(self._fresh_id(), cell.type, {}, None, cell.parent)
        for member in cell.texts:
            merged.texts[member] = prev.texts[member] + sep + cell.texts[member]
        if prev.region is not None and cell.region is not None:
            merged.region = Region(prev.region.start, cell.region.end)
        merged.children = prev.children + cell.children
        for child_id in merged.children:
            self.cells[child_id].parent = merged.id
        self.cells[merged.id] = merged
        siblings[at - 1 : at + 1] = [merged.id]
        del self.cells[ident]
        del self.cells[prev.id]
        self.current = (merged.id, viewed)
        return merged.id

    def align_cell(self, ident: str, region: Region) -> None:
        """Give a cell a time region, nested inside its parent's when set."""
        cell = self.cell(ident)
        if cell.parent is not None:
            parent = self.cell(cell.parent)
            if parent.region is not None and not (
                parent.region.start <= region.start
                and region.end <= parent.region.end
            ):
                raise OutsideParentError(f"{region} outside {parent.region}")
        cell.region = region

    # -- persistence -----------------------------------------------------------

    def to_graph(self) -> AnnotationGraph:
        graph = AnnotationGraph()
        anchor = graph.add_anchor()
        graph.add_annotation("config", anchor, anchor, _config_features(self.config))
        for unit in self.units:
            slots = sum(self._slot_count(c) for c in unit.tops)
            anchors = [graph.add_anchor() for _ in range(slots + 1)]
            graph.add_annotation(
                self.config.ft_type,
                anchors[0],
                anchors[-1],
                {self.config.ft_type: unit.ft},
            )
            cursor = [0]
            for top in unit.tops:
                self._emit_cell(graph, anchors, cursor, top)
        return graph

    def _slot_count(self, ident: str) -> int:
        cell = self.cells[ident]
        if not cell.children:
            return 1
        return sum(self._slot_count(c) for c in cell.children)

    def _emit_cell(self, graph, anchors, cursor, ident) -> tuple[int, int]:
        cell = self.cells[ident]
        lo = cursor[0]
        if not cell.children:
            cursor[0] += 1
        features: dict[str, str] = dict(cell.texts)
        if cell.region is not None:
            features["@start"] = format_seconds(cell.region.start)
            features["@end"] = format_seconds(cell.region.end)
        spans = [self._emit_cell(graph, anchors, cursor, c) for c in cell.children]
        hi = spans[-1][1] if spans else lo + 1
        graph.add_annotation(cell.type, anchors[lo], anchors[hi], features)
        return lo, hi

    @classmethod
    def from_graph(cls, graph: AnnotationGraph) -> "IlDoc":
        config_ann = None
        for ann in graph.annotations.values():
            if ann.type == "config":
                config_ann = ann
                break
        config = _parse_config_features(config_ann.features if config_ann else {})
        doc = cls(config)
        ft_anns = sorted(
            (a for a in graph.annotations.values() if a.type == config.ft_type),
            key=lambda a: id_number(a.id),
        )
        reps = {config.representative(t) for t in config.types if t != config.ft_type}
        cell_anns = [
            a
            for a in graph.annotations.values()
            if a.type not in ("config", config.ft_type)
        ]
        for ann in cell_anns:
            if ann.type not in reps:
                raise IlEncodingError(f"unexpected tier {ann.type!r} on {ann.id}")

        for ft in ft_anns:
            unit = Unit(ft.id, ft.features.get(config.ft_type, ""))
            doc.units.append(unit)
            lo_num, hi_num = id_number(ft.start), id_number(ft.end)
            chain = sorted(
                (
                    a
                    for a in graph.anchors
                    if lo_num <= id_number(a) <= hi_num
                ),
                key=id_number,
            )
            index = {a: i for i, a in enumerate(chain)}
            spans = []
            for ann in cell_anns:
                if ann.start not in index:
                    continue
                if ann.end not in index:
                    raise IlEncodingError(f"{ann.id} leaves its unit")
                lo, hi = index[ann.start], index[ann.end]
                if lo >= hi:
                    raise IlEncodingError(f"{ann.id} spans nothing")
                spans.append((lo, -hi, config.class_depth(ann.type), ann))
            spans.sort(key=lambda s: (s[0], s[1], s[2], id_number(s[3].id)))
            stack: list[tuple[int, int, str]] = []
            for lo, neg_hi, _, ann in spans:
                hi = -neg_hi
                while stack and stack[-1][1] <= lo:
                    stack.pop()
                parent_id = None
                if stack:
                    plo, phi, pid = stack[-1]
                    if hi > phi:
                        raise IlEncodingError(f"{ann.id} crosses {pid}")
                    parent_id = pid
                cell = _cell_from_annotation(config, ann)
                expected = config.parent_class(ann.type)
                if parent_id is None:
                    if expected is not None:
                        raise IlEncodingError(f"{ann.id} floats without a parent")
                    unit.tops.append(cell.id)
                else:
                    parent = doc.cells[parent_id]
                    if parent.type != expected:
                        raise IlEncodingError(f"{ann.id} nests under {parent.type}")
                    cell.parent = parent_id
                    parent.children.append(cell.id)
                doc.cells[cell.id] = cell
                stack.append((lo, hi, cell.id))
        claimed = {c for u in doc.units for c in _descendants(doc, u.tops)}
        for ann in cell_anns:
            if ann.id not in claimed:
                raise IlEncodingError(f"{ann.id} belongs to no unit")
        return doc


def _descendants(doc: IlDoc, tops: list[str]) -> list[str]:
    out = []
    stack = list(tops)
    while stack:
        ident = stack.pop()
        out.append(ident)
        stack.extend(doc.cells[ident].children)
    return out


def _cell_from_annotation(config: TypeConfig, ann: Annotation) -> Cell:
    members = config.class_of(ann.type)
    texts = {m: ann.features.get(m, "") for m in members}
    region = None
    if "@start" in ann.features and "@end" in ann.features:
        region = Region(
            parse_seconds(ann.features["@start"]),
            parse_seconds(ann.features["@end"]),
        )
    return Cell(ann.id, ann.type, texts, region)


def _config_features(config: TypeConfig) -> dict[str, str]:
    features = {
        "@kind": "interlinear",
        "@types": " ".join(config.types),
        "@ft": config.ft_type,
    }
    if config.dominates:
        features["@dom"] = " ".join(f"{p}>{c}" for p, c in config.dominates)
    if config.classes:
        features["@classes"] = ";".join(" ".join(m) for m in config.classes)
    for name, sep in config.separators.items():
        features[f"sep:{name}"] = sep
    return features


def _parse_config_features(features: dict[str, str]) -> TypeConfig:
    types = features.get("@types", "").split()
    dominates = []
    for pair in features.get("@dom", "").split():
        parent, _, child = pair.partition(">")
        dominates.append((parent, child))
    classes = [
        group.split()
        for group in features.get("@classes", "").split(";")
        if group.strip()
    ]
    separators = {
        name[4:]: value for name, value in features.items() if name.startswith("sep:")
    }
    return TypeConfig(
        types=types,
        dominates=dominates,
        classes=classes,
        separators=separators,
        ft_type=features.get("@ft", FT_DEFAULT),
    )
