/**
 * Offline replay of a recorded session log.
 *
 * The live client appends one entry per event: the session-created
 * reply, each action it sent, and each raw server frame it received.
 * Replaying folds the same reducer over the same entries, so the final
 * view must equal the live one exactly.
 */

import { parseServerMessage, parseSessionCreated } from "./protocol.js";
import type { SessionCreated } from "./protocol.js";
import { applyMessage, initView } from "./state.js";
import type { SessionView } from "./state.js";

export type LogEntry =
  | { kind: "created"; envId: "matrix" | "pmr"; payload: SessionCreated }
  | { kind: "sent"; value: number }
  | { kind: "recv"; raw: string };

export interface SessionLog {
  format: "convforge-ui-session";
  version: 1;
  entries: LogEntry[];
}

export function newLog(): SessionLog {
  return { format: "convforge-ui-session", version: 1, entries: [] };
}

export function replayLog(log: SessionLog): SessionView {
  let view: SessionView | null = null;
  let pending: number | null = null;
  for (const entry of log.entries) {
    if (entry.kind === "created") {
      view = initView(parseSessionCreated(entry.payload), entry.envId);
    } else if (entry.kind === "sent") {
      pending = entry.value;
    } else {
      if (!view) throw new Error("log has a server frame before the session reply");
      const msg = parseServerMessage(entry.raw);
      view = applyMessage(view, msg, pending);
      if (msg.type === "step") pending = null;
    }
  }
  if (!view) throw new Error("log contains no session");
  return view;
}

export function serializeLog(log: SessionLog): string {
  return JSON.stringify(log, null, 1);
}

export function parseLog(text: string): SessionLog {
  const data = JSON.parse(text) as SessionLog;
  if (data.format !== "convforge-ui-session" || data.version !== 1) {
    throw new Error("not a recorded session log");
  }
  if (!Array.isArray(data.entries)) throw new Error("log entries missing");
  return data;
}
