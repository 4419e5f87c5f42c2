/**
 * Wire types for the play service (protocol_version 1) and strict parsers.
 *
 * The protocol is synchronous: the client sends one action message per
 * step over the session WebSocket, the server replies with one step
 * message, plus a summary message when the episode ends. Errors arrive
 * as error messages and never close the socket.
 */

export const PROTOCOL_VERSION = 1;

export type Point = [number, number];

export interface MatrixRender {
  type: "matrix";
  payoff_values: number[];
  num_conventions: number;
  history: [number, number][];
}

export interface PmrRender {
  type: "pmr";
  positions: [Point, Point];
  velocities: [Point, Point];
  landmark_positions: Point[];
  landmark_values: number[];
  capture_radius: number;
}

export type RenderState = MatrixRender | PmrRender;

export interface AgentInfo {
  id: string;
  agent_id: string;
  kind: string;
  env_id: string;
  level: number | null;
  method: string | null;
  convention: number | null;
  checkpoint: string | null;
}

export interface EnvInfo {
  env_id: "matrix" | "pmr";
  horizon: number;
  num_conventions: number;
  payoff_values: number[];
  reward_mode: string;
  [extra: string]: unknown;
}

export interface AgentsReply {
  protocol_version: number;
  env: EnvInfo;
  agents: AgentInfo[];
}

export interface SessionCreated {
  protocol_version: number;
  session_id: string;
  agent_id: string;
  human_side: 0 | 1;
  horizon: number;
  obs: number[];
  render: RenderState;
}

export interface StepMsg {
  type: "step";
  protocol_version: number;
  t: number;
  obs: number[];
  render: RenderState;
  reward: number;
  done: boolean;
  agent_action: number;
}

export interface SummaryMsg {
  type: "summary";
  protocol_version: number;
  return: number;
  eta: number;
  final_convention: number;
}

export interface ErrorMsg {
  type: "error";
  msg: string;
}

export type ServerMessage = StepMsg | SummaryMsg | ErrorMsg;

export class ProtocolError extends Error {}

function fail(why: string): never {
  throw new ProtocolError(why);
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function num(v: unknown, name: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) fail(`${name} must be a finite number`);
  return v;
}

function numArray(v: unknown, name: string): number[] {
  if (!Array.isArray(v)) fail(`${name} must be an array`);
  return v.map((x, i) => num(x, `${name}[${i}]`));
}

function point(v: unknown, name: string): Point {
  const arr = numArray(v, name);
  if (arr.length !== 2) fail(`${name} must have two coordinates`);
  return [arr[0]!, arr[1]!];
}

function checkVersion(v: unknown): number {
  const version = num(v, "protocol_version");
  if (version !== PROTOCOL_VERSION) fail(`unsupported protocol_version ${version}`);
  return version;
}

export function parseRender(v: unknown): RenderState {
  if (!isRecord(v)) fail("render must be an object");
  if (v.type === "matrix") {
    const history = Array.isArray(v.history) ? v.history : fail("history must be an array");
    return {
      type: "matrix",
      payoff_values: numArray(v.payoff_values, "payoff_values"),
      num_conventions: num(v.num_conventions, "num_conventions"),
      history: history.map((pair, i) => {
        const p = numArray(pair, `history[${i}]`);
        if (p.length !== 2) fail(`history[${i}] must be an action pair`);
        return [p[0]!, p[1]!] as [number, number];
      }),
    };
  }
  if (v.type === "pmr") {
    const positions = Array.isArray(v.positions) ? v.positions : fail("positions must be an array");
    const velocities = Array.isArray(v.velocities) ? v.velocities : fail("velocities must be an array");
    if (positions.length !== 2 || velocities.length !== 2) fail("expected two agents");
    const landmarks = Array.isArray(v.landmark_positions)
      ? v.landmark_positions
      : fail("landmark_positions must be an array");
    return {
      type: "pmr",
      positions: [point(positions[0], "positions[0]"), point(positions[1], "positions[1]")],
      velocities: [point(velocities[0], "velocities[0]"), point(velocities[1], "velocities[1]")],
      landmark_positions: landmarks.map((p, i) => point(p, `landmark_positions[${i}]`)),
      landmark_values: numArray(v.landmark_values, "landmark_values"),
      capture_radius: num(v.capture_radius, "capture_radius"),
    };
  }
  fail(`unknown render type ${String(v.type)}`);
}

export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    fail("server message is not valid JSON");
  }
  if (!isRecord(data)) fail("server message must be an object");
  if (data.type === "error") {
    if (typeof data.msg !== "string") fail("error message must carry msg");
    return { type: "error", msg: data.msg };
  }
  if (data.type === "step") {
    return {
      type: "step",
      protocol_version: checkVersion(data.protocol_version),
      t: num(data.t, "t"),
      obs: numArray(data.obs, "obs"),
      render: parseRender(data.render),
      reward: num(data.reward, "reward"),
      done: data.done === true,
      agent_action: num(data.agent_action, "agent_action"),
    };
  }
  if (data.type === "summary") {
    return {
      type: "summary",
      protocol_version: checkVersion(data.protocol_version),
      return: num(data["return"], "return"),
      eta: num(data.eta, "eta"),
      final_convention: num(data.final_convention, "final_convention"),
    };
  }
  fail(`unknown message type ${String(data.type)}`);
}

export function parseSessionCreated(data: unknown): SessionCreated {
  if (!isRecord(data)) fail("session reply must be an object");
  const side = num(data.human_side, "human_side");
  if (side !== 0 && side !== 1) fail("human_side must be 0 or 1");
  return {
    protocol_version: checkVersion(data.protocol_version),
    session_id: String(data.session_id ?? fail("session_id missing")),
    agent_id: String(data.agent_id ?? fail("agent_id missing")),
    human_side: side,
    horizon: num(data.horizon, "horizon"),
    obs: numArray(data.obs, "obs"),
    render: parseRender(data.render),
  };
}

export function parseAgentsReply(data: unknown): AgentsReply {
  if (!isRecord(data)) fail("agents reply must be an object");
  const env = data.env;
  if (!isRecord(env)) fail("env must be an object");
  if (env.env_id !== "matrix" && env.env_id !== "pmr") fail("env_id must be matrix or pmr");
  const agents = Array.isArray(data.agents) ? data.agents : fail("agents must be an array");
  return {
    protocol_version: checkVersion(data.protocol_version),
    env: {
      ...env,
      env_id: env.env_id,
      horizon: num(env.horizon, "horizon"),
      num_conventions: num(env.num_conventions, "num_conventions"),
      payoff_values: numArray(env.payoff_values, "payoff_values"),
      reward_mode: String(env.reward_mode ?? "unknown"),
    },
    agents: agents.map((a): AgentInfo => {
      const rec = isRecord(a) ? a : {};
      return {
        id: typeof rec.id === "string" ? rec.id : "unknown",
        agent_id: typeof rec.agent_id === "string" ? rec.agent_id : "unknown",
        kind: typeof rec.kind === "string" ? rec.kind : "unknown",
        env_id: typeof rec.env_id === "string" ? rec.env_id : "unknown",
        level: typeof rec.level === "number" ? rec.level : null,
        method: typeof rec.method === "string" ? rec.method : null,
        convention: typeof rec.convention === "number" ? rec.convention : null,
        checkpoint: typeof rec.checkpoint === "string" ? rec.checkpoint : null,
      };
    }),
  };
}

export function actionMessage(value: number): string {
  return JSON.stringify({ type: "action", value });
}
