// Drives a real service process over HTTP: the scripted editing session
// must leave the server holding exactly the payload the batch tool produces
// when it replays the same commands, and conflict/rejection answers must
// surface as notices while the shown revision tracks the server's.

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { parsePayload } from "../src/aif.js";
import { EditCommand, StoreClient } from "../src/api.js";
import { DocSession } from "../src/session.js";
import { TreeNode, brackets, decodeTree } from "../src/tree.js";

const LONG = 60_000;

let proc: ChildProcess;
let baseUrl: string;
let workDir: string;
let client: StoreClient;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const port = (srv.address() as { port: number }).port;
      srv.close(() => resolve(port));
    });
    srv.on("error", reject);
  });
}

async function waitUp(url: string): Promise<void> {
  for (let i = 0; i < 300; i++) {
    try {
      const res = await fetch(`${url}/docs`);
      if (res.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`service at ${url} never came up`);
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "annograph-ui-"));
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  proc = spawn("annograph", ["serve", "--root", join(workDir, "store"), "--bind", `127.0.0.1:${port}`], {
    stdio: "ignore",
  });
  await waitUp(baseUrl);
  client = new StoreClient(baseUrl);
}, LONG);

afterAll(() => {
  proc?.kill();
});

function findPos(root: TreeNode, token: string): string {
  const hits: number[] = [];
  const walk = (n: TreeNode) => {
    if (n.kind === "pos" && n.children[0]?.label === token) hits.push(n.id);
    for (const c of n.children) walk(c);
  };
  walk(root);
  expect(hits).toHaveLength(1);
  return `e${hits[0]}`;
}

function findSyn(root: TreeNode, label: string): string {
  const hits: number[] = [];
  const walk = (n: TreeNode) => {
    if (n.kind === "syn" && n.label === label) hits.push(n.id);
    for (const c of n.children) walk(c);
  };
  walk(root);
  expect(hits).toHaveLength(1);
  return `e${hits[0]}`;
}

async function expectInSyncWithServer(session: DocSession): Promise<void> {
  const fresh = await client.fetchDoc(session.docId);
  expect(session.revision).toBe(fresh.revision);
  expect(session.payload).toBe(fresh.payload);
}

describe("scripted editing session", () => {
  it(
    "leaves the server with the payload the batch replay produces",
    async () => {
      await client.createDoc("t1", "tree");
      const session = new DocSession(client, "t1");
      await session.open();
      expect(session.revision).toBe(0);
      const basePayload = session.payload;

      const script: EditCommand[] = [];
      const run = async (command: EditCommand) => {
        script.push(command);
        expect(await session.dispatch(command)).toBe(true);
        await expectInSyncWithServer(session);
      };

      await run({
        op: "build_default_tree",
        args: { tokens: ["the", "dog", "ran"] },
      });
      let tree = decodeTree(parsePayload(session.payload)[0]);
      await run({
        op: "insert_internal_node",
        args: { label: "NP" },
        selection: [findPos(tree, "the"), findPos(tree, "dog")],
      });
      tree = decodeTree(parsePayload(session.payload)[0]);
      await run({
        op: "move_node",
        selection: [findPos(tree, "ran"), findSyn(tree, "NP")],
      });

      expect(session.revision).toBe(3);
      tree = decodeTree(parsePayload(session.payload)[0]);
      expect(brackets(tree)).toBe("(S (NP (XX the) (XX dog) (XX ran)))");

      // replay the same commands with the batch tool, starting from the
      // same initial payload the service handed out
      const basePath = join(workDir, "base.aif");
      const outPath = join(workDir, "replayed.aif");
      const scriptPath = join(workDir, "session.jsonl");
      writeFileSync(basePath, basePayload);
      writeFileSync(scriptPath, script.map((c) => JSON.stringify(c)).join("\n") + "\n");
      const replay = spawnSync(
        "annograph",
        ["apply", "--script", scriptPath, basePath, outPath],
        { encoding: "utf-8" },
      );
      expect(replay.stderr).toBe("");
      expect(replay.status).toBe(0);
      expect(readFileSync(outPath, "utf-8")).toBe(session.payload);
    },
    LONG,
  );

  it(
    "drops the command and resyncs on a concurrent edit",
    async () => {
      await client.createDoc("t2", "tree");
      const session = new DocSession(client, "t2");
      await session.open();
      await session.dispatch({ op: "build_default_tree", args: { tokens: ["hi"] } });
      expect(session.revision).toBe(1);

      // someone else commits first
      const other = await client.postEdit(
        "t2",
        { op: "change_label", args: { id: "e1", label: "TOP" } },
        session.revision,
      );
      expect(other).toEqual({ ok: true, revision: 2 });

      const won = await session.dispatch({
        op: "change_label",
        args: { id: "e1", label: "ROOT" },
      });
      expect(won).toBe(false);
      expect(session.notices.at(-1)).toMatchObject({
        kind: "conflict",
        code: "revision-conflict",
      });
      await expectInSyncWithServer(session);
      expect(session.revision).toBe(2);
      const tree = decodeTree(parsePayload(session.payload)[0]);
      expect(tree.label).toBe("TOP"); // the winner's edit, not ours
    },
    LONG,
  );

  it(
    "surfaces module rejections without moving the revision",
    async () => {
      await client.createDoc("t3", "tree");
      const session = new DocSession(client, "t3");
      await session.open();
      await session.dispatch({ op: "build_default_tree", args: { tokens: ["hi"] } });

      const won = await session.dispatch({ op: "delete_node", args: { id: "e1" } });
      expect(won).toBe(false);
      expect(session.notices.at(-1)).toMatchObject({ kind: "rejected" });
      expect(session.notices.at(-1)!.code).toBe("root-not-deletable");
      expect(session.revision).toBe(1);
      await expectInSyncWithServer(session);
    },
    LONG,
  );

  it(
    "refuses overlapping dispatches instead of queueing them",
    async () => {
      await client.createDoc("t4", "tree");
      const session = new DocSession(client, "t4");
      await session.open();

      const first = session.dispatch({
        op: "build_default_tree",
        args: { tokens: ["a", "b"] },
      });
      const second = await session.dispatch({
        op: "change_label",
        args: { id: "e1", label: "X" },
      });
      expect(second).toBe(false);
      expect(session.notices.at(-1)).toMatchObject({ kind: "busy" });
      expect(await first).toBe(true);
      await expectInSyncWithServer(session);
    },
    LONG,
  );
});
