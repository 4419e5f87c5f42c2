/**
 * HTTP and WebSocket plumbing around the play service.
 *
 * The WebSocket constructor is injected so the same session driver runs
 * in the browser (native WebSocket) and under Node tests (the ws
 * package, which implements the same onmessage-style surface).
 */

import {
  actionMessage,
  parseAgentsReply,
  parseServerMessage,
  parseSessionCreated,
} from "./protocol.js";
import type { AgentsReply, ServerMessage, SessionCreated } from "./protocol.js";
import { applyMessage, initView } from "./state.js";
import type { SessionView } from "./state.js";
import { newLog } from "./replay.js";
import type { SessionLog } from "./replay.js";

export interface WsLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
}

export type WsFactory = (url: string) => WsLike;

export async function fetchAgents(base: string): Promise<AgentsReply> {
  const res = await fetch(`${base}/agents`);
  if (!res.ok) throw new Error(`GET /agents failed: ${res.status}`);
  return parseAgentsReply(await res.json());
}

export interface CreateSessionRequest {
  agent_id: string;
  env?: string;
  human_side?: 0 | 1;
  seed?: number;
}

export async function createSession(
  base: string,
  body: CreateSessionRequest,
): Promise<SessionCreated> {
  const res = await fetch(`${base}/sessions`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) {
    let detail = `${res.status}`;
    try {
      const data = (await res.json()) as { detail?: string };
      if (data.detail) detail = data.detail;
    } catch {
      // keep the status code
    }
    throw new Error(`POST /sessions failed: ${detail}`);
  }
  return parseSessionCreated(await res.json());
}

export function wsUrl(base: string, sessionId: string): string {
  return `${base.replace(/^http/, "ws")}/sessions/${sessionId}`;
}

interface StepWaiter {
  resolve: (view: SessionView) => void;
  reject: (err: Error) => void;
}

/**
 * One live session: owns the socket, the recorded log, and the evolving
 * view. `step` resolves once the server has answered the action with a
 * step frame (plus the summary frame when the episode ends) or an error
 * frame.
 */
export class LiveSession {
  view: SessionView;
  readonly log: SessionLog = newLog();
  onUpdate: ((view: SessionView) => void) | null = null;

  private socket: WsLike | null = null;
  private pendingAction: number | null = null;
  private waiter: StepWaiter | null = null;
  private awaitingSummary = false;
  private closed = false;

  constructor(
    private readonly created: SessionCreated,
    private readonly url: string,
    private readonly makeSocket: WsFactory,
    envId: "matrix" | "pmr",
  ) {
    this.view = initView(created, envId);
    this.log.entries.push({ kind: "created", envId, payload: created });
  }

  connect(): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = this.makeSocket(this.url);
      socket.onopen = () => resolve();
      socket.onerror = () => {
        if (this.waiter) {
          this.waiter.reject(new Error("socket error"));
          this.waiter = null;
        }
        reject(new Error(`cannot reach ${this.url}`));
      };
      socket.onclose = () => {
        this.closed = true;
        if (this.waiter) {
          this.waiter.reject(new Error("socket closed mid-step"));
          this.waiter = null;
        }
      };
      socket.onmessage = (ev) => this.handleFrame(String(ev.data));
      this.socket = socket;
    });
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }

  private handleFrame(raw: string): void {
    this.log.entries.push({ kind: "recv", raw });
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(raw);
    } catch (err) {
      this.waiter?.reject(err as Error);
      this.waiter = null;
      return;
    }
    this.view = applyMessage(this.view, msg, this.pendingAction);
    if (msg.type === "step") {
      this.pendingAction = null;
      this.awaitingSummary = msg.done;
    }
    this.onUpdate?.(this.view);
    if (!this.waiter) return;
    const finished =
      msg.type === "error" || msg.type === "summary" || (msg.type === "step" && !msg.done);
    if (finished && !(msg.type === "step" && this.awaitingSummary)) {
      this.waiter.resolve(this.view);
      this.waiter = null;
      this.awaitingSummary = false;
    }
  }

  step(action: number): Promise<SessionView> {
    if (!this.socket || this.closed) {
      return Promise.reject(new Error("session socket is not open"));
    }
    if (this.waiter) {
      return Promise.reject(new Error("a step is already in flight"));
    }
    this.pendingAction = action;
    this.log.entries.push({ kind: "sent", value: action });
    this.socket.send(actionMessage(action));
    return new Promise((resolve, reject) => {
      this.waiter = { resolve, reject };
    });
  }
}

export async function openSession(
  base: string,
  body: CreateSessionRequest,
  envId: "matrix" | "pmr",
  makeSocket: WsFactory,
): Promise<LiveSession> {
  const created = await createSession(base, body);
  const session = new LiveSession(created, wsUrl(base, created.session_id), makeSocket, envId);
  await session.connect();
  return session;
}
