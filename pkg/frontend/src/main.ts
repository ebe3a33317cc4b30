// Browser entry point: a document picker, the kind-appropriate view, a
// command bar driven by the current selection, and the simulated playback
// cursor. All edits travel through DocSession so the page always shows a
// committed server revision.

import { parsePayload } from "./aif.js";
import { StoreClient } from "./api.js";
import { LayoutMode, layoutTree } from "./layout.js";
import { DocSession, Notice } from "./session.js";
import { renderTable, renderTimeline, renderTree } from "./svg.js";
import { TimelineCursor, regionOfSpans, spansInRegion } from "./timeline.js";
import { decodeTree } from "./tree.js";
import { documentKind, tableView, timedSpans } from "./views.js";

const $ = (id: string) => document.getElementById(id)!;

let session: DocSession | null = null;
let mode: LayoutMode = "top-down";
let selection: string[] = [];
let highlighted = new Set<string>();
const cursor = new TimelineCursor([]);

function notice(n: Notice): void {
  const box = $("notices");
  const line = document.createElement("div");
  line.className = `notice notice-${n.kind}`;
  line.textContent = `${n.kind}: ${n.code} ${n.detail}`;
  box.prepend(line);
}

function redraw(): void {
  if (!session) return;
  $("revision").textContent = `revision ${session.revision}`;
  const graph = parsePayload(session.payload)[0];
  const kind = documentKind(graph);
  const view = $("view");
  if (kind === "tree") {
    try {
      const nodes = layoutTree(decodeTree(graph), mode);
      const ids = new Set(selection.map((s) => parseInt(s.replace(/^e/, ""), 10)));
      view.innerHTML = renderTree(nodes, ids);
    } catch {
      view.textContent = "empty tree: build one with the buttons above";
    }
    $("timeline").innerHTML = "";
  } else {
    const spanType = kind === "table" ? "row" : "segment";
    const spans = timedSpans(graph, spanType);
    cursor.setSpans(spans);
    $("timeline").innerHTML = renderTimeline(spans, cursor.t, highlighted);
    view.innerHTML =
      kind === "table"
        ? renderTable(tableView(graph), highlighted)
        : renderTimeline(spans, cursor.t, highlighted, 80);
  }
  wireClicks();
}

function wireClicks(): void {
  for (const el of document.querySelectorAll<SVGGElement>("[data-node]"))
    el.addEventListener("click", () => {
      const id = `e${el.dataset.node}`;
      selection = selection.includes(id)
        ? selection.filter((s) => s !== id)
        : [...selection, id];
      redraw();
    });
  for (const el of document.querySelectorAll<SVGRectElement>("[data-span]"))
    el.addEventListener("click", () => {
      const id = el.dataset.span!;
      highlighted = new Set(highlighted.has(id) ? [] : [id]);
      if (!session) return;
      const graph = parsePayload(session.payload)[0];
      const kind = documentKind(graph);
      const region = regionOfSpans(
        timedSpans(graph, kind === "table" ? "row" : "segment"),
        [...highlighted],
      );
      if (region) cursor.seek(region.start);
      redraw();
    });
  for (const el of document.querySelectorAll<HTMLTableRowElement>("[data-row]"))
    el.addEventListener("click", () => {
      highlighted = new Set([el.dataset.row!]);
      redraw();
    });
}

async function dispatch(op: string, args: Record<string, unknown> = {}): Promise<void> {
  if (!session) return;
  const command =
    selection.length > 0 ? { op, args, selection: [...selection] } : { op, args };
  if (await session.dispatch(command)) selection = [];
  redraw();
}

async function openDoc(docId: string): Promise<void> {
  const client = new StoreClient(($("server") as HTMLInputElement).value);
  session = new DocSession(client, docId, redraw, notice);
  selection = [];
  highlighted = new Set();
  await session.open();
}

function selectRegion(t0: number, t1: number): void {
  if (!session) return;
  const graph = parsePayload(session.payload)[0];
  const kind = documentKind(graph);
  const spans = timedSpans(graph, kind === "table" ? "row" : "segment");
  highlighted = new Set(spansInRegion(spans, t0, t1));
  cursor.seek(t0);
  redraw();
}

function bind(): void {
  $("open").addEventListener("click", () => {
    void openDoc(($("docid") as HTMLInputElement).value);
  });
  for (const m of ["top-down", "bottom-up", "vertical"] as LayoutMode[])
    $(`mode-${m}`).addEventListener("click", () => {
      mode = m;
      redraw();
    });
  $("op-build").addEventListener("click", () => {
    const tokens = prompt("tokens, space separated", "the dog ran") ?? "";
    void dispatch("build_default_tree", { tokens: tokens.split(/\s+/).filter(Boolean) });
  });
  $("op-insert").addEventListener("click", () => {
    void dispatch("insert_internal_node", { label: prompt("label", "NP") ?? "NP" });
  });
  $("op-move").addEventListener("click", () => void dispatch("move_node"));
  $("op-delete").addEventListener("click", () => {
    if (selection.length === 1) void dispatch("delete_node", { id: selection[0] });
  });
  $("op-relabel").addEventListener("click", () => {
    if (selection.length === 1)
      void dispatch("change_label", {
        id: selection[0],
        label: prompt("new label", "NP") ?? "",
      });
  });
  $("region").addEventListener("change", () => {
    const [a, b] = ($("region") as HTMLInputElement).value.split("-").map(Number);
    if (!Number.isNaN(a) && !Number.isNaN(b)) selectRegion(a, b);
  });
  $("play").addEventListener("click", () => {
    cursor.playing = !cursor.playing;
  });
  setInterval(() => {
    if (cursor.playing) {
      highlighted = new Set(cursor.tick(0.1));
      redraw();
    }
  }, 100);
}

bind();
