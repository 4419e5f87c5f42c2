/**
 * Client session view: a pure fold over server messages.
 *
 * The view never simulates the environment. Every field is derived from
 * the session-created reply and the ordered stream of server messages,
 * plus the echo of the human's own submitted action for the history
 * panel (the server reports only the agent's action per step).
 */

import type {
  Point,
  RenderState,
  ServerMessage,
  SessionCreated,
} from "./protocol.js";

export interface HistoryRow {
  t: number;
  /** actions by side index: [side 0, side 1] */
  actions: [number | null, number | null];
  reward: number;
  /** both sides earned the convention payoff this step */
  match: boolean;
}

export interface SummaryView {
  return: number;
  eta: number;
  finalConvention: number;
}

export interface SessionView {
  sessionId: string;
  envId: "matrix" | "pmr";
  agentId: string;
  humanSide: 0 | 1;
  horizon: number;
  /** completed environment steps */
  stepIndex: number;
  done: boolean;
  cumulativeReturn: number;
  /** optimistic percentage vs the best convention held every step */
  etaLive: number;
  render: RenderState;
  obs: number[];
  history: HistoryRow[];
  /** per-agent position traces, pmr only */
  trails: [Point[], Point[]] | null;
  lastAgentAction: number | null;
  summary: SummaryView | null;
  lastError: string | null;
}

function bestStepValue(render: RenderState): number {
  const values =
    render.type === "matrix" ? render.payoff_values : render.landmark_values;
  return values.reduce((a, b) => Math.max(a, b), 0);
}

function liveEta(cumulative: number, horizon: number, render: RenderState): number {
  const ceiling = bestStepValue(render) * horizon;
  return ceiling > 0 ? (100 * cumulative) / ceiling : 0;
}

export function initView(created: SessionCreated, envId: "matrix" | "pmr"): SessionView {
  const trails: [Point[], Point[]] | null =
    created.render.type === "pmr"
      ? [[created.render.positions[0]], [created.render.positions[1]]]
      : null;
  return {
    sessionId: created.session_id,
    envId,
    agentId: created.agent_id,
    humanSide: created.human_side,
    horizon: created.horizon,
    stepIndex: 0,
    done: false,
    cumulativeReturn: 0,
    etaLive: 0,
    render: created.render,
    obs: created.obs,
    history: [],
    trails,
    lastAgentAction: null,
    summary: null,
    lastError: null,
  };
}

function historyRow(
  view: SessionView,
  render: RenderState,
  reward: number,
  t: number,
  agentAction: number,
  humanAction: number | null,
): HistoryRow {
  if (render.type === "matrix" && render.history.length > 0) {
    // the matrix render carries the authoritative joint-action history
    const last = render.history[render.history.length - 1]!;
    return { t, actions: [last[0], last[1]], reward, match: last[0] === last[1] };
  }
  const actions: [number | null, number | null] = [null, null];
  actions[1 - view.humanSide] = agentAction;
  actions[view.humanSide] = humanAction;
  return { t, actions, reward, match: reward > 0 };
}

/**
 * Fold one server message into the view. `sentAction` is the human
 * action whose reply this message is, when the caller knows it; it only
 * feeds the history panel.
 */
export function applyMessage(
  view: SessionView,
  msg: ServerMessage,
  sentAction: number | null = null,
): SessionView {
  if (msg.type === "error") {
    return { ...view, lastError: msg.msg };
  }
  if (msg.type === "summary") {
    return {
      ...view,
      summary: {
        return: msg.return,
        eta: msg.eta,
        finalConvention: msg.final_convention,
      },
    };
  }
  const cumulative = view.cumulativeReturn + msg.reward;
  let trails = view.trails;
  if (msg.render.type === "pmr" && trails) {
    trails = [
      [...trails[0], msg.render.positions[0]],
      [...trails[1], msg.render.positions[1]],
    ];
  }
  return {
    ...view,
    stepIndex: msg.t + 1,
    done: msg.done,
    cumulativeReturn: cumulative,
    etaLive: liveEta(cumulative, view.horizon, msg.render),
    render: msg.render,
    obs: msg.obs,
    history: [
      ...view.history,
      historyRow(view, msg.render, msg.reward, msg.t, msg.agent_action, sentAction),
    ],
    trails,
    lastAgentAction: msg.agent_action,
    lastError: null,
  };
}
