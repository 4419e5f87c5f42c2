/**
 * Pure view-model builders: everything here maps the session view to
 * plain data (button models, table rows, canvas shape lists) so it can
 * be unit tested without a DOM. main.ts does the actual drawing.
 */

import type { AgentInfo, MatrixRender, PmrRender, Point } from "./protocol.js";
import type { SessionView } from "./state.js";

export const HUMAN_COLOR = "#2f9e44";
export const AGENT_COLOR = "#1c7ed6";
export const LANDMARK_COLOR = "#f59f00";

// canvas fraction kept as empty border around the [-1, 1] arena
const MARGIN = 0.05;
export const OPACITY_FLOOR = 0.25;

export interface ActionButton {
  action: number;
  label: string;
  payoff: number;
}

export function matrixButtons(render: MatrixRender): ActionButton[] {
  return render.payoff_values.map((payoff, action) => ({
    action,
    payoff,
    label: `${action} · ${payoff.toFixed(2)}`,
  }));
}

export interface BadgeModel {
  text: string;
  cls: string;
}

export function agentBadges(agent: AgentInfo): BadgeModel[] {
  const badges: BadgeModel[] = [];
  if (agent.level !== null) {
    badges.push({ text: `K${agent.level}`, cls: `level level-${agent.level}` });
  } else {
    badges.push({ text: "unknown", cls: "level" });
  }
  if (agent.method) {
    const cls = agent.method === "ConventionPlay" ? "method method-cp" : "method";
    badges.push({ text: agent.method, cls });
  } else if (agent.level !== null && agent.level >= 1 && agent.kind === "neural") {
    badges.push({ text: "adaptive", cls: "method" });
  }
  if (agent.kind.startsWith("scripted")) {
    badges.push({ text: `fixed ${agent.convention ?? "?"}`, cls: "scripted" });
  }
  return badges;
}

export function landmarkOpacity(value: number, maxValue: number): number {
  if (maxValue <= 0) return OPACITY_FLOOR;
  return Math.max(OPACITY_FLOOR, value / maxValue);
}

export function worldToCanvas(p: Point, width: number, height: number): Point {
  const usableW = width * (1 - 2 * MARGIN);
  const usableH = height * (1 - 2 * MARGIN);
  const x = width * MARGIN + ((p[0] + 1) / 2) * usableW;
  // world y grows upward, canvas y grows downward
  const y = height - (height * MARGIN + ((p[1] + 1) / 2) * usableH);
  return [x, y];
}

export type Shape =
  | { kind: "circle"; x: number; y: number; r: number; fill?: string; stroke?: string; alpha: number; width?: number }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; stroke: string; width: number; alpha: number }
  | { kind: "path"; points: Point[]; stroke: string; width: number; alpha: number }
  | { kind: "text"; x: number; y: number; text: string; fill: string; font: string };

export interface Scene {
  width: number;
  height: number;
  shapes: Shape[];
}

function dist(a: Point, b: Point): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

/** Landmark index both agents currently sit on, or null. */
export function capturedLandmark(render: PmrRender): number | null {
  for (let i = 0; i < render.landmark_positions.length; i++) {
    const lm = render.landmark_positions[i]!;
    if (
      dist(render.positions[0], lm) <= render.capture_radius &&
      dist(render.positions[1], lm) <= render.capture_radius
    ) {
      return i;
    }
  }
  return null;
}

export function pmrScene(view: SessionView, width: number, height: number): Scene {
  if (view.render.type !== "pmr") throw new Error("pmr scene needs a pmr render state");
  const render = view.render;
  const shapes: Shape[] = [];
  const maxValue = render.landmark_values.reduce((a, b) => Math.max(a, b), 0);
  // world-to-pixel scale for radii (uniform margin keeps this isotropic
  // for square canvases; use the x scale)
  const scale = (width * (1 - 2 * MARGIN)) / 2;
  const captured = capturedLandmark(render);

  render.landmark_positions.forEach((lm, i) => {
    const [x, y] = worldToCanvas(lm, width, height);
    const r = render.capture_radius * scale;
    shapes.push({
      kind: "circle",
      x,
      y,
      r,
      fill: LANDMARK_COLOR,
      alpha: landmarkOpacity(render.landmark_values[i] ?? 0, maxValue),
    });
    if (captured === i) {
      shapes.push({
        kind: "circle",
        x,
        y,
        r: r + 4,
        stroke: "#e03131",
        width: 3,
        alpha: 1,
      });
    }
    shapes.push({
      kind: "text",
      x,
      y: y - r - 6,
      text: `${i}: ${(render.landmark_values[i] ?? 0).toFixed(2)}`,
      fill: "#555",
      font: "12px sans-serif",
    });
  });

  const colors: [string, string] = view.humanSide === 0
    ? [HUMAN_COLOR, AGENT_COLOR]
    : [AGENT_COLOR, HUMAN_COLOR];
  (view.trails ?? [[], []]).forEach((trail, side) => {
    if (trail.length > 1) {
      shapes.push({
        kind: "path",
        points: trail.map((p) => worldToCanvas(p, width, height)),
        stroke: colors[side]!,
        width: 1.5,
        alpha: 0.45,
      });
    }
  });
  render.positions.forEach((p, side) => {
    const [x, y] = worldToCanvas(p, width, height);
    const v = render.velocities[side]!;
    const tip = worldToCanvas([p[0] + v[0] * 0.6, p[1] + v[1] * 0.6], width, height);
    shapes.push({
      kind: "line",
      x1: x,
      y1: y,
      x2: tip[0],
      y2: tip[1],
      stroke: colors[side]!,
      width: 2,
      alpha: 0.9,
    });
    shapes.push({ kind: "circle", x, y, r: 7, fill: colors[side]!, alpha: 1 });
  });
  return { width, height, shapes };
}

/**
 * The nine acceleration choices as a 3x3 pad, row-major from the top:
 * compass directions 0..7 counter-clockwise from East, 8 = coast.
 */
export const PMR_PAD: { action: number; label: string }[][] = [
  [
    { action: 3, label: "↖" },
    { action: 2, label: "↑" },
    { action: 1, label: "↗" },
  ],
  [
    { action: 4, label: "←" },
    { action: 8, label: "·" },
    { action: 0, label: "→" },
  ],
  [
    { action: 5, label: "↙" },
    { action: 6, label: "↓" },
    { action: 7, label: "↘" },
  ],
];

export const KEY_TO_ACTION: Record<string, number> = {
  ArrowRight: 0,
  ArrowUp: 2,
  ArrowLeft: 4,
  ArrowDown: 6,
  " ": 8,
};
