// Thin client for the document service. Every mutation goes through
// POST /docs/{id}/edits with an explicit base revision; the caller decides
// what to do with a conflict.

export interface DocInfo {
  doc_id: string;
  kind: string;
  revision: number;
}

export interface FetchedDoc {
  payload: string;
  revision: number;
}

export interface EditCommand {
  op: string;
  args?: Record<string, unknown>;
  selection?: unknown[];
}

export type EditResult =
  | { ok: true; revision: number }
  | { ok: false; status: number; code: string; detail: string };

export interface Violation {
  code: string;
  ids: string[];
  detail: string;
}

export class HttpError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(`${status}: ${message}`);
  }
}

export class StoreClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async listDocs(): Promise<DocInfo[]> {
    const res = await fetch(this.url("/docs"));
    if (!res.ok) throw new HttpError(res.status, await res.text());
    return (await res.json()) as DocInfo[];
  }

  async createDoc(docId: string, kind: string, payload?: string): Promise<DocInfo> {
    const query = new URLSearchParams({ kind });
    const res = await fetch(this.url(`/docs/${docId}?${query}`), {
      method: "PUT",
      headers: payload === undefined ? {} : { "content-type": "application/xml" },
      body: payload,
    });
    if (!res.ok) throw new HttpError(res.status, await res.text());
    return (await res.json()) as DocInfo;
  }

  async fetchDoc(docId: string): Promise<FetchedDoc> {
    const res = await fetch(this.url(`/docs/${docId}`));
    if (!res.ok) throw new HttpError(res.status, await res.text());
    const revision = parseInt(res.headers.get("x-revision") ?? "", 10);
    if (Number.isNaN(revision))
      throw new HttpError(res.status, "response carries no revision header");
    return { payload: await res.text(), revision };
  }

  async postEdit(
    docId: string,
    command: EditCommand,
    baseRevision: number,
  ): Promise<EditResult> {
    const res = await fetch(this.url(`/docs/${docId}/edits`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...command, base_revision: baseRevision }),
    });
    if (res.ok) {
      const body = (await res.json()) as { revision: number };
      return { ok: true, revision: body.revision };
    }
    if (res.status === 409 || res.status === 422) {
      const body = (await res.json()) as { code: string; detail: string };
      return { ok: false, status: res.status, code: body.code, detail: body.detail };
    }
    throw new HttpError(res.status, await res.text());
  }

  async validateDoc(docId: string): Promise<Violation[]> {
    const res = await fetch(this.url(`/docs/${docId}/validate`));
    if (!res.ok) throw new HttpError(res.status, await res.text());
    return (await res.json()) as Violation[];
  }
}
