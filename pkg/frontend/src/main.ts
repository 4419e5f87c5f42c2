/**
 * Browser entry point: agent picker, live play screen for both tasks,
 * and an offline replay loader. All game state lives in the pure view
 * reducer; this module only wires DOM events and draws.
 */

import { fetchAgents, openSession } from "./client.js";
import type { LiveSession, WsLike } from "./client.js";
import {
  AGENT_COLOR,
  HUMAN_COLOR,
  KEY_TO_ACTION,
  PMR_PAD,
  agentBadges,
  matrixButtons,
  pmrScene,
} from "./render.js";
import type { Scene } from "./render.js";
import type { AgentInfo, AgentsReply } from "./protocol.js";
import { parseLog, replayLog, serializeLog } from "./replay.js";
import type { SessionView } from "./state.js";

const BASE = location.origin;

function browserSocket(url: string): WsLike {
  const socket = new WebSocket(url);
  const like: WsLike = {
    send: (data) => socket.send(data),
    close: () => socket.close(),
    onopen: null,
    onmessage: null,
    onerror: null,
    onclose: null,
  };
  socket.onopen = (ev) => like.onopen?.(ev);
  socket.onmessage = (ev) => like.onmessage?.({ data: ev.data });
  socket.onerror = (ev) => like.onerror?.(ev);
  socket.onclose = (ev) => like.onclose?.(ev);
  return like;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function drawScene(ctx: CanvasRenderingContext2D, scene: Scene): void {
  ctx.clearRect(0, 0, scene.width, scene.height);
  for (const shape of scene.shapes) {
    ctx.globalAlpha = "alpha" in shape ? shape.alpha : 1;
    if (shape.kind === "circle") {
      ctx.beginPath();
      ctx.arc(shape.x, shape.y, shape.r, 0, 2 * Math.PI);
      if (shape.fill) {
        ctx.fillStyle = shape.fill;
        ctx.fill();
      }
      if (shape.stroke) {
        ctx.strokeStyle = shape.stroke;
        ctx.lineWidth = shape.width ?? 1;
        ctx.stroke();
      }
    } else if (shape.kind === "line") {
      ctx.beginPath();
      ctx.moveTo(shape.x1, shape.y1);
      ctx.lineTo(shape.x2, shape.y2);
      ctx.strokeStyle = shape.stroke;
      ctx.lineWidth = shape.width;
      ctx.stroke();
    } else if (shape.kind === "path") {
      ctx.beginPath();
      shape.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
      ctx.strokeStyle = shape.stroke;
      ctx.lineWidth = shape.width;
      ctx.stroke();
    } else {
      ctx.fillStyle = shape.fill;
      ctx.font = shape.font;
      ctx.textAlign = "center";
      ctx.fillText(shape.text, shape.x, shape.y);
    }
  }
  ctx.globalAlpha = 1;
}

class App {
  private root = document.getElementById("app")!;
  private session: LiveSession | null = null;
  private stepBusy = false;

  async start(): Promise<void> {
    try {
      const reply = await fetchAgents(BASE);
      this.renderPicker(reply);
    } catch (err) {
      this.root.replaceChildren(
        el("div", "banner error", `Cannot reach the play service at ${BASE}: ${String(err)}`),
      );
    }
  }

  private renderPicker(reply: AgentsReply): void {
    this.session?.close();
    this.session = null;
    this.root.replaceChildren();
    const head = el("header");
    head.append(el("h1", undefined, "convforge live play"));
    head.append(
      el(
        "p",
        "sub",
        `${reply.env.env_id} / ${reply.env.reward_mode}, horizon ${reply.env.horizon}, ` +
          `${reply.env.num_conventions} conventions`,
      ),
    );
    this.root.append(head);

    const controls = el("div", "row controls");
    const sideLabel = el("label", undefined, "your side ");
    const side = el("select");
    side.append(new Option("0", "0"), new Option("1", "1"));
    sideLabel.append(side);
    const seedLabel = el("label", undefined, "seed ");
    const seed = el("input") as HTMLInputElement;
    seed.type = "number";
    seed.value = "0";
    seedLabel.append(seed);
    controls.append(sideLabel, seedLabel);
    this.root.append(controls);

    if (reply.agents.length === 0) {
      this.root.append(
        el("div", "banner", "This run has no playable checkpoints yet. Train first, then reload."),
      );
    } else {
      const table = el("table", "agents");
      const thead = el("thead");
      const hrow = el("tr");
      for (const h of ["agent", "badges", "task", "checkpoint", ""]) {
        hrow.append(el("th", undefined, h));
      }
      thead.append(hrow);
      table.append(thead);
      const tbody = el("tbody");
      for (const agent of reply.agents) {
        tbody.append(this.agentRow(agent, reply.env.env_id, side, seed));
      }
      table.append(tbody);
      this.root.append(table);
    }

    const replayBox = el("div", "row replaybox");
    replayBox.append(el("span", undefined, "replay a recorded log: "));
    const file = el("input") as HTMLInputElement;
    file.type = "file";
    file.accept = "application/json";
    file.addEventListener("change", async () => {
      const chosen = file.files?.[0];
      if (!chosen) return;
      try {
        const view = replayLog(parseLog(await chosen.text()));
        this.renderGame(view, null);
      } catch (err) {
        alert(`replay failed: ${String(err)}`);
      }
    });
    replayBox.append(file);
    this.root.append(replayBox);
  }

  private agentRow(
    agent: AgentInfo,
    envId: "matrix" | "pmr",
    side: HTMLSelectElement,
    seed: HTMLInputElement,
  ): HTMLTableRowElement {
    const row = el("tr");
    row.append(el("td", "mono", agent.id));
    const badgeCell = el("td");
    for (const badge of agentBadges(agent)) {
      badgeCell.append(el("span", `badge ${badge.cls}`, badge.text));
    }
    row.append(badgeCell);
    row.append(el("td", undefined, agent.env_id));
    row.append(el("td", "mono", agent.checkpoint ?? "embedded"));
    const actions = el("td");
    const play = el("button", undefined, "play");
    play.addEventListener("click", () =>
      this.play(agent.id, envId, Number(side.value) as 0 | 1, Number(seed.value)),
    );
    actions.append(play);
    row.append(actions);
    return row;
  }

  private async play(
    agentId: string,
    envId: "matrix" | "pmr",
    humanSide: 0 | 1,
    seed: number,
  ): Promise<void> {
    try {
      this.session = await openSession(
        BASE,
        { agent_id: agentId, human_side: humanSide, seed },
        envId,
        browserSocket,
      );
    } catch (err) {
      alert(String(err));
      return;
    }
    this.session.onUpdate = (view) => this.renderGame(view, this.session);
    this.renderGame(this.session.view, this.session);
  }

  private async sendAction(action: number): Promise<void> {
    if (!this.session || this.stepBusy || this.session.view.done) return;
    this.stepBusy = true;
    try {
      await this.session.step(action);
    } catch (err) {
      alert(String(err));
    } finally {
      this.stepBusy = false;
    }
  }

  private renderGame(view: SessionView, session: LiveSession | null): void {
    this.root.replaceChildren();
    const live = session !== null;
    const head = el("header");
    head.append(el("h1", undefined, live ? "live session" : "replayed session"));
    const back = el("button", "back", "back to agents");
    back.addEventListener("click", () => void this.start());
    head.append(back);
    this.root.append(head);

    const status = el("div", "row status");
    status.append(el("span", "mono", `vs ${view.agentId}`));
    status.append(el("span", undefined, `you are side ${view.humanSide}`));
    status.append(el("span", undefined, `step ${view.stepIndex}/${view.horizon}`));
    status.append(el("span", undefined, `return ${view.cumulativeReturn.toFixed(2)}`));
    status.append(
      el("span", undefined, `η ${live ? "estimate" : ""} ${view.etaLive.toFixed(1)}%`),
    );
    this.root.append(status);

    if (view.lastError) {
      this.root.append(el("div", "banner error", view.lastError));
    }

    if (view.render.type === "matrix") {
      this.renderMatrix(view);
    } else {
      this.renderPmr(view);
    }
    this.renderHistory(view);

    if (view.summary) {
      const overlay = el("div", "summary");
      overlay.append(el("h2", undefined, "episode complete"));
      overlay.append(el("p", undefined, `return ${view.summary.return.toFixed(3)}`));
      overlay.append(el("p", undefined, `η ${view.summary.eta.toFixed(2)}%`));
      overlay.append(
        el("p", undefined, `final convention ${view.summary.finalConvention}`),
      );
      if (session) {
        const save = el("button", undefined, "download log");
        save.addEventListener("click", () => {
          const blob = new Blob([serializeLog(session.log)], { type: "application/json" });
          const a = el("a") as HTMLAnchorElement;
          a.href = URL.createObjectURL(blob);
          a.download = `${view.sessionId}.json`;
          a.click();
          URL.revokeObjectURL(a.href);
        });
        overlay.append(save);
        const check = el("button", undefined, "verify replay");
        check.addEventListener("click", () => {
          const replayed = replayLog(session.log);
          const same = JSON.stringify(replayed) === JSON.stringify(view);
          alert(same ? "offline replay matches the live view" : "replay mismatch!");
        });
        overlay.append(check);
      }
      this.root.append(overlay);
    }
  }

  private renderMatrix(view: SessionView): void {
    if (view.render.type !== "matrix") return;
    const pad = el("div", "row buttons");
    for (const button of matrixButtons(view.render)) {
      const node = el("button", "action", button.label);
      node.disabled = view.done || !this.session;
      node.addEventListener("click", () => void this.sendAction(button.action));
      pad.append(node);
    }
    this.root.append(pad);
  }

  private renderPmr(view: SessionView): void {
    const wrap = el("div", "row arena");
    const canvas = el("canvas") as HTMLCanvasElement;
    canvas.width = 480;
    canvas.height = 480;
    canvas.tabIndex = 0;
    const ctx = canvas.getContext("2d");
    if (ctx) drawScene(ctx, pmrScene(view, canvas.width, canvas.height));
    canvas.addEventListener("keydown", (ev) => {
      const action = KEY_TO_ACTION[ev.key];
      if (action !== undefined) {
        ev.preventDefault();
        void this.sendAction(action);
      }
    });
    wrap.append(canvas);

    const pad = el("div", "pad");
    for (const padRow of PMR_PAD) {
      const line = el("div", "padrow");
      for (const cell of padRow) {
        const node = el("button", "action", cell.label);
        node.disabled = view.done || !this.session;
        node.addEventListener("click", () => void this.sendAction(cell.action));
        line.append(node);
      }
      pad.append(line);
    }
    const legend = el("div", "legend");
    const you = el("span", undefined, "● you");
    you.style.color = HUMAN_COLOR;
    const partner = el("span", undefined, "● agent");
    partner.style.color = AGENT_COLOR;
    legend.append(you, partner);
    pad.append(legend);
    wrap.append(pad);
    this.root.append(wrap);
  }

  private renderHistory(view: SessionView): void {
    if (view.history.length === 0) return;
    const table = el("table", "history");
    const thead = el("thead");
    const hrow = el("tr");
    for (const h of ["t", "side 0", "side 1", "reward", "match"]) {
      hrow.append(el("th", undefined, h));
    }
    thead.append(hrow);
    table.append(thead);
    const tbody = el("tbody");
    for (const row of [...view.history].reverse()) {
      const tr = el("tr", row.match ? "match" : undefined);
      tr.append(el("td", undefined, String(row.t)));
      tr.append(el("td", undefined, row.actions[0] === null ? "?" : String(row.actions[0])));
      tr.append(el("td", undefined, row.actions[1] === null ? "?" : String(row.actions[1])));
      tr.append(el("td", undefined, row.reward.toFixed(2)));
      tr.append(el("td", undefined, row.match ? "✓" : ""));
      tbody.append(tr);
    }
    table.append(tbody);
    this.root.append(table);
  }
}

void new App().start();
