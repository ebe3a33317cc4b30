// String renderers. Everything here is a pure function from data to
// markup so the views can be asserted on without a DOM.

import { LayoutNode } from "./layout.js";
import { TimedSpan } from "./timeline.js";

const KIND_FILL: Record<string, string> = {
  syn: "#dbeafe",
  pos: "#dcfce7",
  wrd: "#fef9c3",
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderTree(nodes: LayoutNode[], selected: Set<number> = new Set()): string {
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const pad = 60;
  const maxX = Math.max(...nodes.map((n) => n.x)) + pad;
  const maxY = Math.max(...nodes.map((n) => n.y)) + pad;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${-pad} ${-pad} ${maxX + pad} ${maxY + pad}">`,
  ];
  for (const node of nodes)
    for (const childId of node.children) {
      const child = byId.get(childId)!;
      parts.push(
        `<line x1="${node.x}" y1="${node.y}" x2="${child.x}" y2="${child.y}" stroke="#94a3b8"/>`,
      );
    }
  for (const node of nodes) {
    const stroke = selected.has(node.id) ? "#dc2626" : "#334155";
    parts.push(
      `<g data-node="${node.id}">` +
        `<rect x="${node.x - node.width / 2}" y="${node.y - node.height / 2}"` +
        ` width="${node.width}" height="${node.height}" rx="4"` +
        ` fill="${KIND_FILL[node.kind] ?? "#e2e8f0"}" stroke="${stroke}"/>` +
        `<text x="${node.x}" y="${node.y + 4}" text-anchor="middle" font-size="12">` +
        `${esc(node.label)}</text></g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderTimeline(
  spans: TimedSpan[],
  cursorT: number,
  highlighted: Set<string>,
  pxPerSecond = 40,
): string {
  const last = Math.max(1, ...spans.map((s) => s.end));
  const width = last * pxPerSecond + 20;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} 60" data-role="timeline">`,
  ];
  for (const span of spans) {
    const x = span.start * pxPerSecond;
    const w = Math.max(2, (span.end - span.start) * pxPerSecond);
    const fill = highlighted.has(span.id) ? "#fb923c" : "#a5b4fc";
    parts.push(
      `<rect data-span="${esc(span.id)}" x="${x}" y="16" width="${w}" height="28" fill="${fill}"/>`,
    );
  }
  parts.push(
    `<line data-role="cursor" x1="${cursorT * pxPerSecond}" y1="0" x2="${cursorT * pxPerSecond}" y2="60" stroke="#dc2626" stroke-width="2"/>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

export interface TableView {
  columns: string[];
  rows: { id: string; cells: string[] }[];
}

export function renderTable(view: TableView, highlighted: Set<string>): string {
  const head = view.columns.map((c) => `<th>${esc(c)}</th>`).join("");
  const body = view.rows
    .map((row) => {
      const cls = highlighted.has(row.id) ? ' class="highlight"' : "";
      const cells = row.cells.map((c) => `<td>${esc(c)}</td>`).join("");
      return `<tr data-row="${esc(row.id)}"${cls}>${cells}</tr>`;
    })
    .join("\n");
  return `<table><thead><tr>${head}</tr></thead>\n<tbody>\n${body}\n</tbody></table>`;
}
