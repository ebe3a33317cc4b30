// Projections from a parsed payload to what the widgets draw: timed spans
// for the segment timeline, column/row shapes for the table view, and the
// kind marker stored in the document's config annotation.

import { Graph } from "./aif.js";
import { TableView } from "./svg.js";
import { TimedSpan } from "./timeline.js";

export function documentKind(graph: Graph): string | null {
  for (const ann of graph.annotations.values())
    if (ann.type === "config") return ann.features.get("@kind") ?? null;
  const types = new Set([...graph.annotations.values()].map((a) => a.type));
  if (types.size === 0) return null;
  if ([...types].every((t) => t === "syn" || t === "pos" || t === "wrd"))
    return "tree";
  return null;
}

export function timedSpans(graph: Graph, type = "segment"): TimedSpan[] {
  const spans: TimedSpan[] = [];
  for (const ann of graph.annotations.values()) {
    if (ann.type !== type) continue;
    const start = graph.anchors.get(ann.start)?.offset;
    const end = graph.anchors.get(ann.end)?.offset;
    if (start == null || end == null) continue; // unplaced rows stay off the timeline
    spans.push({ id: ann.id, start, end });
  }
  spans.sort((a, b) => a.start - b.start || a.end - b.end || (a.id < b.id ? -1 : 1));
  return spans;
}

export function tableView(graph: Graph): TableView {
  let columns: string[] = [];
  let rowOrder: string[] | null = null;
  for (const ann of graph.annotations.values()) {
    if (ann.type !== "config") continue;
    for (const [name] of ann.features)
      if (name.startsWith("col:")) columns.push(name.slice(4));
    const order = ann.features.get("@roworder");
    if (order) rowOrder = order.split(" ");
  }
  const rows = [...graph.annotations.values()].filter((a) => a.type === "row");
  if (columns.length === 0) {
    const names = new Set<string>();
    for (const row of rows) for (const [name] of row.features) names.add(name);
    columns = [...names];
  }
  if (rowOrder) {
    const position = new Map(rowOrder.map((id, i) => [id, i]));
    rows.sort(
      (a, b) => (position.get(a.id) ?? rows.length) - (position.get(b.id) ?? rows.length),
    );
  }
  const fmt = (offset: number | null | undefined) =>
    offset == null ? "" : offset.toFixed(6);
  return {
    columns: ["start", "end", ...columns],
    rows: rows.map((row) => ({
      id: row.id,
      cells: [
        fmt(graph.anchors.get(row.start)?.offset),
        fmt(graph.anchors.get(row.end)?.offset),
        ...columns.map((c) => row.features.get(c) ?? ""),
      ],
    })),
  };
}
