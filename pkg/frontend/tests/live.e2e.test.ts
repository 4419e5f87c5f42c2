/**
 * End-to-end protocol tests against the real play service.
 *
 * A tiny pipeline run is built once into .fixture/ (seconds), the
 * service is spawned on a private port, and a scripted client drives
 * full episodes over the live WebSocket. Covers the protocol round trip
 * against the headless pairing evaluator with the same seed, server-side
 * log replay, offline client replay determinism, and error frames.
 */

import { spawn, spawnSync } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { existsSync, readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";
import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { fetchAgents, openSession } from "../src/client.js";
import type { WsLike } from "../src/client.js";
import { replayLog, parseLog, serializeLog } from "../src/replay.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const repoRoot = path.resolve(here, "..", "..");
const fixtureDir = path.join(here, "..", ".fixture", "run-matrix");
const configPath = path.join(here, "fixtures", "mini-matrix.json");
const port = 8701 + (process.pid % 97);
const base = `http://127.0.0.1:${port}`;

let serviceProc: ChildProcess | null = null;

function nodeSocket(url: string): WsLike {
  const socket = new WebSocket(url);
  const like: WsLike = {
    send: (data) => socket.send(data),
    close: () => socket.close(),
    onopen: null,
    onmessage: null,
    onerror: null,
    onclose: null,
  };
  socket.on("open", () => like.onopen?.());
  socket.on("message", (data) => like.onmessage?.({ data: String(data) }));
  socket.on("error", (err) => like.onerror?.(err));
  socket.on("close", () => like.onclose?.());
  return like;
}

function pythonJson(code: string): any {
  const res = spawnSync("python3", ["-c", code], { cwd: repoRoot, encoding: "utf8" });
  if (res.status !== 0) {
    throw new Error(`python exited ${res.status}:\n${res.stderr}`);
  }
  const lines = res.stdout.trim().split("\n");
  return JSON.parse(lines[lines.length - 1]!);
}

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 200; attempt++) {
    try {
      const res = await fetch(`${base}/agents`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service did not come up on ${base}`);
}

beforeAll(async () => {
  if (!existsSync(path.join(fixtureDir, "reports", "efficiency.json"))) {
    const res = spawnSync(
      "python3",
      ["-m", "convforge.cli", "run-all", "--config", configPath, "--out", fixtureDir],
      { cwd: repoRoot, encoding: "utf8" },
    );
    if (res.status !== 0) {
      throw new Error(`fixture pipeline failed:\n${res.stdout}\n${res.stderr}`);
    }
  }
  serviceProc = spawn(
    "python3",
    [
      "-m",
      "convforge.cli",
      "serve",
      "--config",
      path.join(fixtureDir, "config.json"),
      "--out",
      fixtureDir,
      "--port",
      String(port),
    ],
    { cwd: repoRoot, stdio: ["ignore", "pipe", "pipe"] },
  );
  await waitForService();
}, 180_000);

afterAll(() => {
  serviceProc?.kill();
});

describe("agent listing", () => {
  it("exposes the trained hierarchy and the benchmark partners", async () => {
    const reply = await fetchAgents(base);
    expect(reply.protocol_version).toBe(1);
    expect(reply.env.env_id).toBe("matrix");
    const ids = reply.agents.map((a) => a.id);
    expect(ids).toContain("s0:k2");
    expect(ids).toContain("suite:k0t_c0");
    const k2 = reply.agents.find((a) => a.id === "s0:k2")!;
    expect(k2.method).toBe("ConventionPlay");
    expect(k2.level).toBe(2);
    expect(k2.checkpoint).toBeTruthy();
  });
});

describe("protocol round trip", () => {
  it("live episode rewards equal the headless pairing run with the same seed", async () => {
    const seed = 7;
    const reply = await fetchAgents(base);
    const k2 = reply.agents.find((a) => a.id === "s0:k2")!;
    const session = await openSession(
      base,
      { agent_id: "s0:k2", human_side: 0, seed },
      "matrix",
      nodeSocket,
    );
    const horizon = session.view.horizon;
    // the client mirrors the fixed-action specialist for convention 0
    for (let t = 0; t < horizon; t++) {
      await session.step(0);
    }
    expect(session.view.done).toBe(true);
    expect(session.view.summary).not.toBeNull();
    const liveRewards = session.view.history.map((row) => row.reward);
    expect(liveRewards).toHaveLength(horizon);
    session.close();

    const headless = pythonJson(
      [
        "import json",
        "from convforge.conventions import evaluate_pair",
        "from convforge.envs.config import EnvConfig",
        "from convforge.policy import scripted_handle",
        "from convforge.policy.checkpoint import load_checkpoint",
        `run = ${JSON.stringify(fixtureDir)}`,
        'cfg = json.load(open(run + "/config.json"))',
        'env = EnvConfig.from_json_dict(cfg["env"])',
        `agent = load_checkpoint(run + "/" + ${JSON.stringify(k2.checkpoint)})`,
        'human = scripted_handle(env, 0, {"agent_id": "human_mirror"})',
        `print(json.dumps({"j_pair": evaluate_pair(human, agent, env, 1, ${seed})}))`,
      ].join("\n"),
    );
    const liveReturn = liveRewards.reduce((a, b) => a + b, 0);
    expect(liveReturn).toBeCloseTo(headless.j_pair, 9);
    expect(session.view.summary!.return).toBeCloseTo(headless.j_pair, 9);

    // the server-side session log replays to the identical reward sequence
    const logPath = path.join(fixtureDir, "sessions", `${session.view.sessionId}.jsonl`);
    expect(existsSync(logPath)).toBe(true);
    const replayed = pythonJson(
      [
        "import json",
        "from convforge.service import replay_session",
        `print(json.dumps(replay_session(${JSON.stringify(logPath)})))`,
      ].join("\n"),
    );
    expect(replayed.rewards).toHaveLength(horizon);
    expect(replayed.rewards).toEqual(replayed.logged_rewards);
    replayed.rewards.forEach((r: number, i: number) => {
      expect(r).toBeCloseTo(liveRewards[i]!, 12);
    });
  });
});

describe("offline replay determinism", () => {
  it("replaying the recorded message log reproduces the live view and summary", async () => {
    const session = await openSession(
      base,
      { agent_id: "suite:k0t_c1", human_side: 0, seed: 3 },
      "matrix",
      nodeSocket,
    );
    const horizon = session.view.horizon;
    for (let t = 0; t < horizon; t++) {
      // sweep the whole action set so history and rewards vary
      await session.step(t % 4);
    }
    const live = session.view;
    session.close();
    expect(live.done).toBe(true);
    expect(live.summary).not.toBeNull();

    const replayedView = replayLog(session.log);
    expect(replayedView).toEqual(live);
    expect(replayedView.summary).toEqual(live.summary);
    expect(replayedView.cumulativeReturn).toBeCloseTo(live.summary!.return, 9);

    // and identically after a round trip through the on-disk format
    const revived = replayLog(parseLog(serializeLog(session.log)));
    expect(revived).toEqual(live);
  });

  it("live summary matches the view the reducer accumulated", async () => {
    const session = await openSession(
      base,
      { agent_id: "suite:k0t_c1", human_side: 1, seed: 5 },
      "matrix",
      nodeSocket,
    );
    for (let t = 0; t < session.view.horizon; t++) {
      await session.step(1);
    }
    const live = session.view;
    session.close();
    // mirroring fixed(1) from the other side coordinates every step
    expect(live.summary!.finalConvention).toBe(1);
    expect(live.cumulativeReturn).toBeCloseTo(live.summary!.return, 9);
    const replayed = replayLog(session.log);
    expect(replayed.summary).toEqual(live.summary);
  });
});

describe("error frames", () => {
  it("rejects junk, out-of-range actions, and post-done actions without closing", async () => {
    const session = await openSession(
      base,
      { agent_id: "suite:k0t_c0", human_side: 0, seed: 1 },
      "matrix",
      nodeSocket,
    );
    const view = await session.step(99);
    expect(view.lastError).toMatch(/action must be an integer/);
    expect(view.stepIndex).toBe(0);

    for (let t = 0; t < session.view.horizon; t++) {
      await session.step(0);
    }
    expect(session.view.done).toBe(true);
    const after = await session.step(0);
    expect(after.lastError).toMatch(/session is done/);
    expect(after.stepIndex).toBe(session.view.horizon);
    session.close();
  });

  it("refuses sessions for unknown agents", async () => {
    const res = await fetch(`${base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ agent_id: "nope:missing" }),
    });
    expect(res.status).toBe(404);
  });

  it("refuses the wrong environment", async () => {
    const res = await fetch(`${base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ agent_id: "s0:k2", env: "pmr" }),
    });
    expect(res.status).toBe(400);
  });
});
