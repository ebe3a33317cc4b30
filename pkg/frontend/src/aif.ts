// Reader for the XML payloads the document service emits. The server owns
// the canonical form; this side only ever parses, never re-serializes.

export interface Anchor {
  id: string;
  offset: number | null; // seconds
  unit: string;
}

export interface Annotation {
  id: string;
  type: string;
  start: string;
  end: string;
  features: Map<string, string>;
}

export interface Graph {
  id: string;
  anchors: Map<string, Anchor>;
  annotations: Map<string, Annotation>;
}

export class PayloadError extends Error {}

const ENTITIES: Record<string, string> = {
  amp: "&",
  lt: "<",
  gt: ">",
  quot: '"',
  apos: "'",
};

function decodeEntities(text: string): string {
  return text.replace(/&(#x?[0-9a-fA-F]+|[a-z]+);/g, (whole, body: string) => {
    if (body[0] === "#") {
      const code =
        body[1] === "x" ? parseInt(body.slice(2), 16) : parseInt(body.slice(1), 10);
      if (Number.isNaN(code)) throw new PayloadError(`bad character reference ${whole}`);
      return String.fromCodePoint(code);
    }
    const mapped = ENTITIES[body];
    if (mapped === undefined) throw new PayloadError(`unknown entity ${whole}`);
    return mapped;
  });
}

interface Tag {
  name: string;
  attrs: Map<string, string>;
  selfClosed: boolean;
  closing: boolean;
}

// One event per tag plus the text run before it.
interface Token {
  text: string;
  tag: Tag | null;
}

function* tokens(xml: string): Generator<Token> {
  let pos = 0;
  while (pos < xml.length) {
    const open = xml.indexOf("<", pos);
    if (open < 0) {
      yield { text: xml.slice(pos), tag: null };
      return;
    }
    const text = xml.slice(pos, open);
    const close = xml.indexOf(">", open);
    if (close < 0) throw new PayloadError("unterminated tag");
    let body = xml.slice(open + 1, close);
    if (body.startsWith("?") || body.startsWith("!")) {
      // prolog or comment; the canonical emitter writes neither, but accept them
      yield { text, tag: null };
      pos = close + 1;
      continue;
    }
    const closing = body.startsWith("/");
    if (closing) body = body.slice(1);
    const selfClosed = body.endsWith("/");
    if (selfClosed) body = body.slice(0, -1);
    const attrs = new Map<string, string>();
    const nameMatch = /^([A-Za-z_][\w.-]*)\s*/.exec(body);
    if (!nameMatch) throw new PayloadError(`unreadable tag <${body}>`);
    let rest = body.slice(nameMatch[0].length);
    const attrRe = /^([A-Za-z_][\w.:-]*)=("([^"]*)"|'([^']*)')\s*/;
    while (rest.length > 0) {
      const m = attrRe.exec(rest);
      if (!m) throw new PayloadError(`unreadable attributes in <${body}>`);
      attrs.set(m[1], decodeEntities(m[3] ?? m[4]));
      rest = rest.slice(m[0].length);
    }
    yield { text, tag: { name: nameMatch[1], attrs, selfClosed, closing } };
    pos = close + 1;
  }
}

function need(attrs: Map<string, string>, name: string, where: string): string {
  const value = attrs.get(name);
  if (value === undefined) throw new PayloadError(`${where} is missing ${name}`);
  return value;
}

export function parsePayload(xml: string): Graph[] {
  const graphs: Graph[] = [];
  let graph: Graph | null = null;
  let annotation: Annotation | null = null;
  let feature: string | null = null;
  let featureText = "";
  let sawRoot = false;

  for (const token of tokens(xml)) {
    if (feature !== null) featureText += token.text;
    else if (token.text.trim() !== "")
      throw new PayloadError(`stray text ${JSON.stringify(token.text.trim())}`);
    const tag = token.tag;
    if (!tag) continue;

    if (tag.closing) {
      if (tag.name === "Feature" && annotation && feature !== null) {
        annotation.features.set(feature, decodeEntities(featureText));
        feature = null;
      } else if (tag.name === "Annotation") annotation = null;
      else if (tag.name === "AG") graph = null;
      else if (tag.name !== "AGSet")
        throw new PayloadError(`unexpected </${tag.name}>`);
      continue;
    }

    switch (tag.name) {
      case "AGSet":
        sawRoot = true;
        break;
      case "AG": {
        graph = {
          id: need(tag.attrs, "id", "AG"),
          anchors: new Map(),
          annotations: new Map(),
        };
        graphs.push(graph);
        break;
      }
      case "Anchor": {
        if (!graph) throw new PayloadError("Anchor outside AG");
        const id = need(tag.attrs, "id", "Anchor");
        const raw = tag.attrs.get("offset");
        graph.anchors.set(id, {
          id,
          offset: raw === undefined ? null : parseFloat(raw),
          unit: tag.attrs.get("unit") ?? "sec",
        });
        break;
      }
      case "Annotation": {
        if (!graph) throw new PayloadError("Annotation outside AG");
        const id = need(tag.attrs, "id", "Annotation");
        annotation = {
          id,
          type: need(tag.attrs, "type", id),
          start: need(tag.attrs, "start", id),
          end: need(tag.attrs, "end", id),
          features: new Map(),
        };
        graph.annotations.set(id, annotation);
        if (tag.selfClosed) annotation = null;
        break;
      }
      case "Feature": {
        if (!annotation) throw new PayloadError("Feature outside Annotation");
        const name = need(tag.attrs, "name", "Feature");
        if (tag.selfClosed) annotation.features.set(name, "");
        else {
          feature = name;
          featureText = "";
        }
        break;
      }
      default:
        throw new PayloadError(`unexpected <${tag.name}>`);
    }
  }
  if (!sawRoot) throw new PayloadError("no AGSet element");
  return graphs;
}

export function idNumber(id: string): number {
  const digits = /^[a-z]*(\d+)$/.exec(id);
  if (!digits) throw new PayloadError(`${id} has no numeric part`);
  return parseInt(digits[1], 10);
}
