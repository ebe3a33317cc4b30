"""Segment editing for multi-channel transcription.

A :class:`ChannelDoc` holds the segments of one audio channel, always kept
sorted by (start, end, id).  Segments may overlap; a "current" pointer
tracks one segment by id through reorderings.  Anchor presses support the
two-step creation gesture: the first press remembers a boundary, the second
turns the pair into a region; stopping playback discards a pending press.

A :class:`MultiChannelDoc` bundles the channels of one recording and
(de)serializes them into a single annotation graph of ``segment``
annotations carrying ``speaker``, ``text`` and ``channel`` features.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    AgError,
    AnnotationGraph,
    Region,
    format_seconds,
    id_number,
    parse_seconds,
)

class NoCurrentError(AgError):
    code = "no-current"


class NoPreviousError(AgError):
    code = "no-previous"


class WouldInvertError(AgError):
    code = "would-invert"


class SplitPointOutOfRangeError(AgError):
    code = "split-point-out-of-range"


class BadTextOffsetError(AgError):
    code = "bad-text-offset"


class UnknownSegmentError(AgError):
    code = "unknown-segment"


@dataclass
class Segment:
    id: str
    region: Region
    speaker: str = ""
    text: str = ""

    def sort_key(self):
        return (self.region.start, self.region.end, self.id)


class ChannelDoc:
    """One channel's segments, a current pointer and a pending anchor press."""

    def __init__(self, channel: int = 0, speaker: str = ""):
        self.channel = channel
        self.speaker = speaker
        self.segments: list[Segment] = []
        self.current: str | None = None
        self.pending_anchor: int | None = None
        self._next_id = 1

    # -- helpers -----------------------------------------------------------

    def _fresh_id(self) -> str:
        ident = f"s{self._next_id}"
        self._next_id += 1
        return ident

    def _resort(self) -> None:
        self.segments.sort(key=Segment.sort_key)

    def segment(self, ident: str) -> Segment:
        for seg in self.segments:
            if seg.id == ident:
                return seg
        raise UnknownSegmentError(ident)

    def _current(self) -> Segment:
        if self.current is None:
            raise NoCurrentError("no segment selected")
        return self.segment(self.current)

    def _previous(self, seg: Segment) -> Segment:
        at = self.segments.index(seg)
        if at == 0:
            raise NoPreviousError(seg.id)
        return self.segments[at - 1]

    def select(self, ident: str) -> None:
        self.segment(ident)
        self.current = ident

    # -- creation ----------------------------------------------------------

    def create_segment(self, region: Region) -> str:
        """Insert an empty segment over ``region``; it becomes current."""
        seg = Segment(self._fresh_id(), region, self.speaker)
        self.segments.append(seg)
        self._resort()
        self.current = seg.id
        return seg.id

    def press_anchor(self, t: int) -> str | None:
        """One boundary press.  The second press completes a segment
        spanning the two pressed times in either order."""
        if t < 0:
            raise AgError("times are non-negative")
        if self.pending_anchor is None:
            self.pending_anchor = t
            return None
        t0, t1 = sorted((self.pending_anchor, t))
        self.pending_anchor = None
        return self.create_segment(Region(t0, t1))

    def stop_playback(self) -> None:
        """Ending playback forgets a half-made segment."""
        self.pending_anchor = None

    # -- editing -----------------------------------------------------------

    def delete_segment(self) -> None:
        seg = self._current()
        self.segments.remove(seg)
        self.current = None

    def change_boundaries(self, region: Region) -> None:
        seg = self._current()
        seg.region = region
        self._resort()

    def set_text(self, text: str) -> None:
        self._current().text = text

    def set_speaker(self, speaker: str) -> None:
        self._current().speaker = speaker

    def split_segment(self, text_offset: int, t: int) -> tuple[str, str]:
        """Split the current segment at time ``t`` and text ``text_offset``.

        The left half keeps the text up to the offset with trailing spaces
        trimmed; the right half takes the rest with leading spaces trimmed,
        inherits the speaker, and becomes current.
        """
        seg = self._current()
        if not seg.region.start < t < seg.region.end:
            raise SplitPointOutOfRangeError(
                f"{format_seconds(t)} outside {seg.region}"
            )
        if not 0 <= text_offset <= len(seg.text):
            raise BadTextOffsetError(f"{text_offset} outside the text")
        left = Segment(
            self._fresh_id(),
            Region(seg.region.start, t),
            seg.speaker,
            seg.text[:text_offset].rstrip(" "),
        )
        right = Segment(
            self._fresh_id(),
            Region(t, seg.region.end),
            seg.speaker,
            seg.text[text_offset:].lstrip(" "),
        )
        self.segments.remove(seg)
        self.segments.extend([left, right])
        self._resort()
        self.current = right.id
        return left.id, right.id

    def join_with_previous(self) -> str:
        """Merge the current segment into its predecessor in sort order.

        The merged segment spans [previous.start, current.end], joins the
        texts with a single space (an empty side simply disappears), keeps
        the previous speaker, and becomes current.
        """
        seg = self._current()
        prev = self._previous(seg)
        if prev.text and seg.text:
            text = f"{prev.text} {seg.text}"
        else:
            text = prev.text or seg.text
        merged = Segment(
            self._fresh_id(),
            Region(prev.region.start, seg.region.end),
            prev.speaker,
            text,
        )
        self.segments.remove(seg)
        self.segments.remove(prev)
        self.segments.append(merged)
        self._resort()
        self.current = merged.id
        return merged.id

    def squeeze(self) -> None:
        """Snap the current segment's start to the previous segment's end."""
        seg = self._current()
        prev = self._previous(seg)
        if prev.region.end > seg.region.end:
            raise WouldInvertError(
                f"previous ends at {format_seconds(prev.region.end)}, "
                f"after {format_seconds(seg.region.end)}"
            )
        seg.region = replace(seg.region, start=prev.region.end)
        self._resort()


class MultiChannelDoc:
    """All channels of one recording, serialized to a single graph."""

    def __init__(self):
        self.channels: dict[int, ChannelDoc] = {}

    def channel(self, index: int) -> ChannelDoc:
        if index < 0:
            raise AgError("channel indexes are non-negative")
        if index not in self.channels:
            self.channels[index] = ChannelDoc(index)
        return self.channels[index]

    def to_graph(self) -> AnnotationGraph:
        graph = AnnotationGraph()
        anchor = graph.add_anchor()
        features = {"@kind": "segments"}
        for index in sorted(self.channels):
            ch = self.channels[index]
            if ch.speaker:
                features[f"@speaker:{index}"] = ch.speaker
            if ch.pending_anchor is not None:
                features[f"@pending:{index}"] = format_seconds(ch.pending_anchor)
        graph.add_annotation("config", anchor, anchor, features)
        for index in sorted(self.channels):
            for seg in self.channels[index].segments:
                start = graph.add_anchor(seg.region.start)
                end = graph.add_anchor(seg.region.end)
                graph.add_annotation(
                    "segment",
                    start,
                    end,
                    {"speaker": seg.speaker, "text": seg.text, "channel": str(index)},
                )
        return graph

    @classmethod
    def from_graph(cls, graph: AnnotationGraph) -> "MultiChannelDoc":
        doc = cls()
        config = None
        for ann in graph.annotations.values():
            if ann.type == "config":
                config = ann
                break
        for ident, ann in graph.annotations.items():
            if ann.type != "segment":
                continue
            index = _parse_channel(ann.features.get("channel", "0"))
            ch = doc.channel(index)
            t0 = graph.anchors[ann.start].offset
            t1 = graph.anchors[ann.end].offset
            if t0 is None or t1 is None:
                raise AgError(f"segment {ident} has unplaced anchors")
            ch.segments.append(
                Segment(
                    ident,
                    Region(t0, t1),
                    ann.features.get("speaker", ""),
                    ann.features.get("text", ""),
                )
            )
        for ch in doc.channels.values():
            ch._resort()
            if ch.segments and not ch.speaker:
                ch.speaker = ch.segments[0].speaker
        if config is not None:
            for name, value in config.features.items():
                if name.startswith("@speaker:"):
                    doc.channel(_parse_channel(name[9:])).speaker = value
                elif name.startswith("@pending:"):
                    doc.channel(_parse_channel(name[9:])).pending_anchor = (
                        parse_seconds(value)
                    )
        return doc


def _parse_channel(text: str) -> int:
    try:
        index = int(text)
    except ValueError:
        raise AgError(f"bad channel {text!r}") from None
    if index < 0:
        raise AgError(f"bad channel {text!r}")
    return index
