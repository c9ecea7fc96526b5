/**
 * Browser entry point. Every numeric answer shown in the UI is the exact
 * string returned by the engine; this file only moves text into the DOM.
 */

import { SessionApi, fetchTransport } from "./api.js";
import type { ProblemDocument, QueryRequest } from "./api.js";
import { SessionStore, displayedValue } from "./store.js";
import { drawRegion } from "./region.js";
import { parseExprShorthand } from "./expr.js";
import type { Space } from "./expr.js";

const DEFAULT_BASE = "http://127.0.0.1:8710";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function summarize(entry: SessionStore["log"][number]): string {
  if (!entry.preference) return "undo";
  const verdict = entry.verdict.accepted ? "accepted" : "rejected";
  return `${JSON.stringify(entry.preference.lhs)} ≿ ${JSON.stringify(
    entry.preference.rhs,
  )} — ${verdict}`;
}

function renderLog(store: SessionStore): void {
  const list = el<HTMLUListElement>("assertion-log");
  list.innerHTML = "";
  for (const entry of store.log) {
    const li = document.createElement("li");
    li.className = entry.verdict.accepted ? "accepted" : "rejected";
    li.textContent = summarize(entry);
    list.appendChild(li);
  }
}

function renderWatches(store: SessionStore): void {
  const panel = el<HTMLDivElement>("watched-queries");
  panel.innerHTML = "";
  for (const q of store.watched) {
    const card = document.createElement("div");
    card.className = "watch-card";
    const title = document.createElement("h3");
    title.textContent = q.label;
    card.appendChild(title);
    const body = document.createElement("pre");
    if (q.errorCode) {
      body.textContent = `error: ${q.errorCode}`;
      card.classList.add("watch-error");
    } else if (q.payload === null) {
      body.textContent = "(pending)";
    } else {
      const lower = displayedValue(q, "lower");
      const upper = displayedValue(q, "upper");
      if (lower || upper) {
        const head = document.createElement("div");
        head.className = "watch-headline";
        head.textContent = [
          lower ? `lower ${lower.value} (${lower.decimal})` : "",
          upper ? `upper ${upper.value} (${upper.decimal})` : "",
        ]
          .filter(Boolean)
          .join("  ");
        card.appendChild(head);
      }
      body.textContent = q.payload;
    }
    card.appendChild(body);
    panel.appendChild(card);
  }
}

function renderRegion(store: SessionStore): void {
  const canvas = el<HTMLCanvasElement>("region-canvas");
  const note = el<HTMLParagraphElement>("region-note");
  if (!store.region) {
    canvas.style.display = "none";
    note.textContent = store.regionAvailable
      ? "Region snapshot pending."
      : "Region plots need exactly 2 states and 3 consequences.";
    return;
  }
  canvas.style.display = "block";
  const r = store.region;
  note.textContent = `${r.vertices.length} vertices, ${r.pairs.length} pair markers (grid 1/${r.grid_step}).`;
  const ctx = canvas.getContext("2d");
  if (ctx) {
    drawRegion(ctx, r, { width: canvas.width, height: canvas.height, margin: 24 });
  }
}

function renderAll(store: SessionStore): void {
  renderLog(store);
  renderWatches(store);
  renderRegion(store);
}

function parseQueryForm(): QueryRequest {
  const kind = el<HTMLSelectElement>("query-kind").value;
  const target = el<HTMLInputElement>("query-target").value.trim();
  const mode = el<HTMLSelectElement>("query-mode").value;
  switch (kind) {
    case "check":
      return { kind: "check" };
    case "pair":
      return { kind: "pair" };
    case "bounds":
      return { kind: "bounds", target: parseExprShorthand(target), mode };
    case "prob":
      return {
        kind: "prob",
        event: target
          .split(",")
          .map((s) => s.trim())
          .filter(Boolean),
        mode,
      };
    default:
      throw new Error(`unknown query kind ${kind}`);
  }
}

export async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? DEFAULT_BASE;
  const api = new SessionApi(fetchTransport(base));
  const banner = el<HTMLDivElement>("assert-banner");

  const problemText = el<HTMLTextAreaElement>("problem-json").value;
  const problem = JSON.parse(problemText) as ProblemDocument;
  const space: Space = {
    states: problem.states,
    consequences: problem.consequences,
  };
  const sessionId = await api.create(problem);
  const store = new SessionStore(api, space);

  el<HTMLSpanElement>("session-id").textContent = sessionId;
  el<HTMLSpanElement>("space-desc").textContent =
    `states: ${space.states.join(", ")} — consequences: ${space.consequences.join(", ")}`;

  el<HTMLFormElement>("assert-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    banner.textContent = "";
    banner.className = "";
    void (async () => {
      try {
        const lhs = parseExprShorthand(el<HTMLInputElement>("assert-lhs").value);
        const rhs = parseExprShorthand(el<HTMLInputElement>("assert-rhs").value);
        const verdict = await store.assert({ lhs, rhs });
        if (verdict.accepted) {
          banner.className = "banner-ok";
          banner.textContent = "Accepted.";
        } else {
          banner.className = "banner-reject";
          banner.textContent = `Rejected: ${verdict.reason ?? "contradiction"}`;
        }
      } catch (err) {
        banner.className = "banner-reject";
        banner.textContent = err instanceof Error ? err.message : String(err);
      }
      renderAll(store);
    })();
  });

  el<HTMLFormElement>("watch-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void (async () => {
      try {
        const label =
          el<HTMLInputElement>("watch-label").value.trim() || "query";
        store.watch(label, parseQueryForm());
        await store.refresh();
      } catch (err) {
        banner.className = "banner-reject";
        banner.textContent = err instanceof Error ? err.message : String(err);
      }
      renderAll(store);
    })();
  });

  el<HTMLButtonElement>("undo-btn").addEventListener("click", () => {
    void store.undo().then(
      () => renderAll(store),
      (err) => {
        banner.className = "banner-reject";
        banner.textContent = err instanceof Error ? err.message : String(err);
      },
    );
  });

  el<HTMLButtonElement>("export-btn").addEventListener("click", () => {
    void api.exportProblem().then((doc) => {
      el<HTMLPreElement>("export-out").textContent = JSON.stringify(
        doc,
        null,
        2,
      );
    });
  });

  await store.refresh();
  renderAll(store);
}

if (typeof document !== "undefined" && document.getElementById("app-root")) {
  void boot().catch((err) => {
    const node = document.getElementById("assert-banner");
    if (node) node.textContent = String(err);
  });
}
