/** Scripted walkthrough over recorded service payloads.
 *
 * The fetch stub replays byte-for-byte documents captured from the real
 * HTTP service, so this test pins both sides of the contract: the console
 * must send exactly the documented move bodies, and must render exactly
 * what the service said back.
 */

import { beforeEach, describe, expect, it, vi } from "vitest";

import { Api } from "../src/api.js";
import { mountConsole } from "../src/console.js";
import fixtures from "./fixtures/walkthrough.json";

const SID = fixtures.create.id;

interface Recorded {
  method: string;
  url: string;
  body: unknown;
}

function stubResponse(status: number, body: unknown) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  };
}

function installFetchStub(sent: Recorded[]): void {
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: unknown, init?: { method?: string; body?: string }) => {
      const url = String(input);
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(init.body) : null;
      sent.push({ method, url, body });
      if (method === "GET" && url.endsWith("/scenarios")) {
        return stubResponse(200, fixtures.scenarios);
      }
      if (method === "POST" && url.endsWith("/sessions")) {
        return stubResponse(201, fixtures.create);
      }
      if (method === "POST" && url.endsWith(`/sessions/${SID}/moves`)) {
        const kind = (body as { kind: string }).kind;
        if (kind === "CHALLENGE") return stubResponse(200, fixtures.challenge);
        if (kind === "ACCEPT") return stubResponse(200, fixtures.accept);
        return stubResponse(fixtures.closed.status_code, fixtures.closed.body);
      }
      throw new Error(`unexpected request ${method} ${url}`);
    }),
  );
}

function click(node: Element | null): void {
  expect(node, "expected a clickable element").not.toBeNull();
  (node as HTMLElement).dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("challenge walkthrough", () => {
  let sent: Recorded[];

  beforeEach(() => {
    sent = [];
    installFetchStub(sent);
    document.body.innerHTML = '<div id="app"></div>';
  });

  it("plays CHALLENGE then ACCEPT exactly as the service dictates", async () => {
    const root = document.getElementById("app") as HTMLElement;
    const handle = mountConsole(root, new Api("http://service.test"));
    await handle.refreshScenarios();

    const cards = root.querySelectorAll(".scenario-card");
    expect(cards).toHaveLength(3);
    const challengeCard = root.querySelector(
      '[data-scenario="bankloan4_challenge"]',
    );
    click(challengeCard!.querySelector("button.start"));
    await handle.idle();

    expect(handle.state()?.status).toBe("open");
    const badges = root.querySelectorAll(".badge.open");
    expect(new Set([...badges].map((b) => b.textContent))).toEqual(
      new Set(["CI", "CB:P_priv"]),
    );

    const claim = root.querySelector<HTMLSelectElement>(
      'select.claim[data-feature="income_high"]',
    );
    expect(claim).not.toBeNull();
    claim!.value = "false";
    click(root.querySelector('button.move[data-move="CHALLENGE"]'));
    await handle.idle();

    const challengeBody = sent.find(
      (r) => r.method === "POST" && r.url.endsWith("/moves"),
    );
    expect(challengeBody?.body).toEqual({
      kind: "CHALLENGE",
      literals: { income_high: false },
    });

    const card = root.querySelector(".reply-card.kind-CORRECT");
    expect(card).not.toBeNull();
    expect(card!.querySelector(".delta")?.textContent).toContain(
      "privileged → true",
    );
    expect(card!.querySelector(".reply-label")?.textContent).toBe("gives grant");
    const literals = card!.querySelector(".reply-literals")?.textContent;
    expect(literals).toContain("privileged");
    expect(literals).toContain("not fraud");
    expect(root.querySelectorAll(".badge.done")).toHaveLength(2);
    expect(root.querySelector(".banner.win")).toBeNull();

    click(root.querySelector('button.move[data-move="ACCEPT"]'));
    await handle.idle();

    const acceptBody = sent[sent.length - 1];
    expect(acceptBody.body).toEqual({ kind: "ACCEPT" });
    expect(handle.state()?.status).toBe("won");
    const banner = root.querySelector(".banner.win");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toMatch(/wins/);
    expect(root.querySelector(".pill.status-won")).not.toBeNull();
    expect(root.querySelectorAll("button.move")).toHaveLength(
      fixtures.accept.state.legal_moves.length,
    );
  });

  it("renders only server-sent transcript entries", async () => {
    const root = document.getElementById("app") as HTMLElement;
    const handle = mountConsole(root, new Api("http://service.test"));
    await handle.refreshScenarios();
    click(
      root
        .querySelector('[data-scenario="bankloan4_challenge"]')!
        .querySelector("button.start"),
    );
    await handle.idle();
    expect(root.querySelectorAll(".entry")).toHaveLength(0);

    const claim = root.querySelector<HTMLSelectElement>(
      'select.claim[data-feature="income_high"]',
    )!;
    claim.value = "false";
    click(root.querySelector('button.move[data-move="CHALLENGE"]'));
    await handle.idle();
    expect(root.querySelectorAll(".entry")).toHaveLength(
      fixtures.challenge.state.transcript.length,
    );
  });

  it("surfaces a server rejection verbatim instead of deciding locally", async () => {
    const root = document.getElementById("app") as HTMLElement;
    const handle = mountConsole(root, new Api("http://service.test"));
    await handle.refreshScenarios();
    click(
      root
        .querySelector('[data-scenario="bankloan4_challenge"]')!
        .querySelector("button.start"),
    );
    await handle.idle();

    // N_REQUEST is routed to the closed-game fixture (409): the console
    // must show the refusal, not invent a reply.
    click(root.querySelector('button.move[data-move="N_REQUEST"]'));
    await handle.idle();
    const bar = root.querySelector(".error-bar") as HTMLElement;
    expect(bar.hidden).toBe(false);
    expect(bar.textContent).toContain("server refused");
    expect(root.querySelectorAll(".entry")).toHaveLength(0);
  });
});
