// Rebuild a syntax tree from a tree-kind document payload. Terminal order
// comes from the wrd anchor chain; dominance comes from span nesting, with
// the depth feature breaking ties between annotations that share a span
// (a pos over a single word inside a unary syn, for instance).

import { Annotation, Graph, idNumber } from "./aif.js";

export type NodeKind = "syn" | "pos" | "wrd";

export interface TreeNode {
  id: number; // numeric part of the annotation id, so "e8" stays node 8
  kind: NodeKind;
  label: string;
  trace: number | null;
  children: TreeNode[];
}

export class NotATreeError extends Error {}

interface Span {
  lo: number;
  hi: number;
  depth: number;
  ann: Annotation;
}

export function decodeTree(graph: Graph): TreeNode {
  const words = [...graph.annotations.values()].filter((a) => a.type === "wrd");
  if (words.length === 0) throw new NotATreeError("no wrd annotations");

  const byStart = new Map<string, Annotation>();
  const ends = new Set<string>();
  for (const ann of words) {
    if (byStart.has(ann.start))
      throw new NotATreeError(`two words start at ${ann.start}`);
    byStart.set(ann.start, ann);
    ends.add(ann.end);
  }
  const heads = [...byStart.keys()].filter((a) => !ends.has(a));
  if (heads.length !== 1)
    throw new NotATreeError("wrd annotations do not form one chain");

  const anchorIndex = new Map<string, number>([[heads[0], 0]]);
  let cursor = heads[0];
  let count = 0;
  while (byStart.has(cursor)) {
    cursor = byStart.get(cursor)!.end;
    count += 1;
    if (anchorIndex.has(cursor)) throw new NotATreeError("wrd chain loops");
    anchorIndex.set(cursor, count);
  }

  const spans: Span[] = [];
  for (const ann of graph.annotations.values()) {
    if (ann.type !== "syn" && ann.type !== "pos" && ann.type !== "wrd")
      throw new NotATreeError(`unexpected annotation type ${ann.type}`);
    const lo = anchorIndex.get(ann.start);
    const hi = anchorIndex.get(ann.end);
    if (lo === undefined || hi === undefined)
      throw new NotATreeError(`${ann.id} is off the terminal chain`);
    if (lo >= hi) throw new NotATreeError(`${ann.id} spans nothing`);
    const depth = parseInt(ann.features.get("depth") ?? "", 10);
    if (Number.isNaN(depth)) throw new NotATreeError(`${ann.id} has a bad depth`);
    spans.push({ lo, hi, depth, ann });
  }
  spans.sort(
    (a, b) =>
      a.lo - b.lo || b.hi - a.hi || a.depth - b.depth ||
      idNumber(a.ann.id) - idNumber(b.ann.id),
  );

  if (spans[0].lo !== 0 || spans[0].hi !== count)
    throw new NotATreeError("no annotation spans the whole chain");
  if (spans[0].ann.type !== "syn")
    throw new NotATreeError("the root annotation must be syn");

  let root: TreeNode | null = null;
  const stack: { span: Span; node: TreeNode }[] = [];
  for (const span of spans) {
    while (stack.length > 0 && !encloses(stack[stack.length - 1].span, span))
      stack.pop();
    if (stack.length === 0 && root !== null)
      throw new NotATreeError("two top-level spans");
    const ann = span.ann;
    let trace: number | null = null;
    const rawTrace = ann.features.get("trace");
    if (rawTrace !== undefined) {
      trace = parseInt(rawTrace, 10);
      if (Number.isNaN(trace)) throw new NotATreeError(`${ann.id} has a bad trace`);
    }
    const node: TreeNode = {
      id: idNumber(ann.id),
      kind: ann.type as NodeKind,
      label: ann.features.get("label") ?? "",
      trace,
      children: [],
    };
    if (stack.length === 0) root = node;
    else stack[stack.length - 1].node.children.push(node);
    stack.push({ span, node });
  }

  checkShape(root!, count);
  return root!;
}

function encloses(parent: Span, child: Span): boolean {
  if (parent.lo === child.lo && parent.hi === child.hi) {
    if (parent.depth === child.depth)
      throw new NotATreeError("equal spans with equal depth");
    return parent.depth < child.depth;
  }
  if (parent.lo <= child.lo && child.hi <= parent.hi) return true;
  if (child.lo < parent.hi && parent.hi < child.hi)
    throw new NotATreeError("crossing spans");
  return false;
}

function checkShape(root: TreeNode, terminals: number): void {
  let seen = 0;
  const walk = (node: TreeNode) => {
    if (node.kind === "wrd") {
      if (node.children.length > 0)
        throw new NotATreeError("a wrd annotation contains others");
      seen += 1;
    } else if (node.kind === "pos") {
      if (node.children.length !== 1 || node.children[0].kind !== "wrd")
        throw new NotATreeError("pos must span exactly its one wrd");
    } else if (node.children.length === 0) {
      throw new NotATreeError("syn with no contents");
    }
    for (const child of node.children) walk(child);
  };
  walk(root);
  if (seen !== terminals)
    throw new NotATreeError("terminal count does not match the chain");
}

export function terminalYield(root: TreeNode): string[] {
  const out: string[] = [];
  const walk = (node: TreeNode) => {
    if (node.kind === "wrd") out.push(node.label);
    for (const child of node.children) walk(child);
  };
  walk(root);
  return out;
}

// Bracketed display string, same surface the batch tools print.
export function brackets(node: TreeNode): string {
  if (node.kind === "wrd") return node.label;
  const label = node.trace === null ? node.label : `${node.label}-${node.trace}`;
  return `(${label} ${node.children.map(brackets).join(" ")})`;
}
