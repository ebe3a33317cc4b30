// One open document and the editing loop around it. The session never
// mutates the payload locally: a dispatched command either commits on the
// server (then the document is re-fetched) or produces a notice. After
// every action the revision shown here is the server's revision.

import { EditCommand, StoreClient } from "./api.js";

export type NoticeKind = "conflict" | "rejected" | "busy";

export interface Notice {
  kind: NoticeKind;
  code: string;
  detail: string;
}

export class DocSession {
  revision = -1;
  payload = "";
  readonly notices: Notice[] = [];
  private inFlight = false;

  constructor(
    readonly client: StoreClient,
    readonly docId: string,
    private readonly onChange: (session: DocSession) => void = () => {},
    private readonly onNotice: (notice: Notice) => void = () => {},
  ) {}

  async open(): Promise<void> {
    await this.resync();
  }

  /** Re-read payload and revision from the server; safe at any time. */
  async resync(): Promise<void> {
    const doc = await this.client.fetchDoc(this.docId);
    this.payload = doc.payload;
    this.revision = doc.revision;
    this.onChange(this);
  }

  /**
   * Send one command at the current revision. Returns true when it
   * committed. A concurrent edit (409) drops the command, re-syncs and
   * notifies; a module rejection (422) just notifies. One edit may be in
   * flight at a time; overlapping calls are refused, not queued.
   */
  async dispatch(command: EditCommand): Promise<boolean> {
    if (this.inFlight) {
      this.notify({ kind: "busy", code: "edit-in-flight", detail: command.op });
      return false;
    }
    this.inFlight = true;
    try {
      const result = await this.client.postEdit(this.docId, command, this.revision);
      if (result.ok) {
        await this.resync();
        return true;
      }
      if (result.status === 409) {
        await this.resync();
        this.notify({ kind: "conflict", code: result.code, detail: result.detail });
      } else {
        this.notify({ kind: "rejected", code: result.code, detail: result.detail });
      }
      return false;
    } finally {
      this.inFlight = false;
    }
  }

  private notify(notice: Notice): void {
    this.notices.push(notice);
    this.onNotice(notice);
  }
}
