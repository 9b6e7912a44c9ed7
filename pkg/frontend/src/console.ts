/** Explanation-game console.
 *
 * The component is a dumb terminal: the move palette mirrors the server's
 * legal_moves, progress badges mirror the server's progress map, and the
 * win banner appears exactly when the server reports status "won". The
 * only client-side work is building move documents from form controls.
 */

import { Api, ApiError } from "./api.js";
import type { MoveDoc, ReplyDoc, SessionState, TranscriptEntry } from "./types.js";

export interface ConsoleHandle {
  /** Load the scenario catalog into the picker. */
  refreshScenarios(): Promise<void>;
  /** Resolves once every queued user action has settled. */
  idle(): Promise<void>;
  /** Server state of the active session, if any. */
  state(): SessionState | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function deltaText(set: Record<string, boolean>): string {
  return Object.entries(set)
    .map(([name, value]) => `${name} → ${value}`)
    .join(", ");
}

function literalText(literals: Record<string, boolean>): string {
  return Object.entries(literals)
    .map(([name, value]) => (value ? name : `not ${name}`))
    .join(" and ");
}

export function mountConsole(root: HTMLElement, api: Api): ConsoleHandle {
  let session: SessionState | null = null;
  let queue: Promise<void> = Promise.resolve();

  root.textContent = "";
  const errorBar = el("div", "error-bar");
  errorBar.hidden = true;
  const scenarioList = el("div", "scenario-list");
  const sessionPanel = el("section", "session");
  sessionPanel.hidden = true;
  root.append(errorBar, scenarioList, sessionPanel);

  function run(action: () => Promise<void>): void {
    queue = queue.then(async () => {
      errorBar.hidden = true;
      try {
        await action();
      } catch (failure) {
        errorBar.hidden = false;
        errorBar.textContent =
          failure instanceof ApiError
            ? `server refused: ${failure.message}`
            : `request failed: ${String(failure)}`;
      }
    });
  }

  function renderScenarios(cards: Parameters<typeof renderScenarioCard>[0][]): void {
    scenarioList.textContent = "";
    for (const card of cards) {
      scenarioList.append(renderScenarioCard(card));
    }
  }

  function renderScenarioCard(card: {
    name: string;
    summary: string;
    variant: string;
    focal_label: string;
    target: string;
  }): HTMLElement {
    const box = el("article", "scenario-card");
    box.dataset.scenario = card.name;
    box.append(
      el("h3", "scenario-name", card.name),
      el("p", "scenario-summary", card.summary),
      el(
        "p",
        "scenario-stakes",
        `${card.variant} dialogue, ${card.focal_label} → ${card.target}`,
      ),
    );
    const startButton = el("button", "start", "Start session");
    startButton.addEventListener("click", () =>
      run(async () => {
        session = await api.createSession(card.name);
        renderSession();
      }),
    );
    box.append(startButton);
    return box;
  }

  function badgeRow(state: SessionState): HTMLElement {
    const row = el("div", "progress");
    for (const [obligation, done] of Object.entries(state.progress)) {
      const badge = el("span", done ? "badge done" : "badge open", obligation);
      badge.dataset.ob = obligation;
      row.append(badge);
    }
    return row;
  }

  function focalRow(state: SessionState): HTMLElement {
    const row = el("div", "focal");
    for (const name of state.features) {
      row.append(
        el(
          "span",
          state.focal[name] ? "chip on" : "chip off",
          `${name}=${state.focal[name]}`,
        ),
      );
    }
    row.append(el("span", "chip label", `label: ${state.focal_label}`));
    return row;
  }

  function replyCard(reply: ReplyDoc): HTMLElement {
    const card = el("div", `reply-card kind-${reply.kind}`);
    card.append(el("strong", "reply-kind", reply.kind));
    if (reply.transformation) {
      card.append(el("span", "delta", `Δ ${deltaText(reply.transformation.set)}`));
    }
    if (reply.label) {
      card.append(el("span", "reply-label", `gives ${reply.label}`));
    }
    if (reply.literals) {
      card.append(el("span", "reply-literals", literalText(reply.literals)));
    }
    if (reply.note) {
      card.append(el("span", "reply-note", reply.note));
    }
    return card;
  }

  function transcriptEntry(entry: TranscriptEntry): HTMLElement {
    const item = el("li", "entry");
    const moveLine = el("div", "move-line", entry.move.kind);
    if (entry.move.features) {
      moveLine.textContent += ` ${entry.move.features.join(", ")}`;
    }
    if (entry.move.literals) {
      moveLine.textContent += ` ${literalText(entry.move.literals)}`;
    }
    item.append(moveLine, replyCard(entry.reply));
    return item;
  }

  function moveFromPalette(kind: MoveDoc["kind"], panel: HTMLElement): MoveDoc {
    if (kind === "CHALLENGE") {
      const literals: Record<string, boolean> = {};
      panel
        .querySelectorAll<HTMLSelectElement>("select.claim")
        .forEach((select) => {
          if (select.value !== "any") {
            literals[select.dataset.feature as string] = select.value === "true";
          }
        });
      return { kind, literals };
    }
    if (kind === "P_REQUEST") {
      const features: string[] = [];
      panel
        .querySelectorAll<HTMLInputElement>("input.pick:checked")
        .forEach((box) => features.push(box.dataset.feature as string));
      return { kind, features };
    }
    return { kind };
  }

  function composer(state: SessionState): HTMLElement {
    const panel = el("div", "composer");
    if (state.legal_moves.includes("CHALLENGE")) {
      const claimRow = el("div", "claim-row");
      claimRow.append(el("span", "composer-label", "claim:"));
      for (const name of state.features) {
        const select = el("select", "claim");
        select.dataset.feature = name;
        for (const value of ["any", "true", "false"]) {
          const option = el("option", undefined, `${name}: ${value}`);
          option.value = value;
          select.append(option);
        }
        claimRow.append(select);
      }
      panel.append(claimRow);
    }
    if (state.legal_moves.includes("P_REQUEST")) {
      const pickRow = el("div", "pick-row");
      pickRow.append(el("span", "composer-label", "flip features:"));
      for (const name of state.features) {
        const label = el("label", "pick-label", name);
        const box = el("input", "pick");
        box.type = "checkbox";
        box.dataset.feature = name;
        label.prepend(box);
        pickRow.append(label);
      }
      panel.append(pickRow);
    }
    return panel;
  }

  function palette(state: SessionState, panel: HTMLElement): HTMLElement {
    const bar = el("div", "palette");
    for (const kind of state.legal_moves) {
      const button = el("button", "move", kind);
      button.dataset.move = kind;
      button.addEventListener("click", () =>
        run(async () => {
          if (!session) return;
          const result = await api.postMove(session.id, moveFromPalette(kind, panel));
          session = result.state;
          renderSession();
        }),
      );
      bar.append(button);
    }
    return bar;
  }

  function renderSession(): void {
    sessionPanel.textContent = "";
    if (!session) {
      sessionPanel.hidden = true;
      return;
    }
    const state = session;
    sessionPanel.hidden = false;

    const meta = el("div", "session-meta");
    meta.append(
      el("span", "pill variant", state.variant),
      el("span", `pill status status-${state.status}`, state.status),
      el("span", "pill target", `target: ${state.target}`),
      el("span", "pill radius", `radius: ${state.radius}`),
    );
    sessionPanel.append(meta, focalRow(state), badgeRow(state));

    if (state.status === "won") {
      sessionPanel.append(
        el(
          "div",
          "banner win",
          "Explainee wins: the accepted evidence resolves every obligation.",
        ),
      );
    }

    const composerPanel = composer(state);
    sessionPanel.append(palette(state, composerPanel), composerPanel);

    const log = el("ol", "transcript");
    for (const entry of state.transcript) {
      log.append(transcriptEntry(entry));
    }
    sessionPanel.append(log);

    const discard = el("button", "discard", "Discard session");
    discard.addEventListener("click", () =>
      run(async () => {
        if (!session) return;
        await api.deleteSession(session.id);
        session = null;
        renderSession();
      }),
    );
    sessionPanel.append(discard);
  }

  return {
    refreshScenarios(): Promise<void> {
      run(async () => {
        renderScenarios(await api.listScenarios());
      });
      return queue;
    },
    idle(): Promise<void> {
      return queue;
    },
    state(): SessionState | null {
      return session;
    },
  };
}
