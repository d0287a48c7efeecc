// Pure HTML-string renderers, so the view layer is testable without a DOM.

import type { ExplanationJson, GridStateJson } from "./types.js";

const KIND_GLYPHS: Record<string, string> = {
  ball: "●",
  box: "■",
  key: "⚷",
};

const AGENT_GLYPHS: Record<string, string> = {
  north: "▲",
  east: "▶",
  south: "▼",
  west: "◀",
};

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderGrid(state: GridStateJson): string {
  const byCell = new Map<string, { kind: string; color: string }>();
  for (const obj of state.objects) {
    byCell.set(`${obj.col},${obj.row}`, obj);
  }
  const rows: string[] = [];
  for (let row = 0; row < state.height; row++) {
    const cells: string[] = [];
    for (let col = 0; col < state.width; col++) {
      const isWall =
        col === 0 || row === 0 || col === state.width - 1 || row === state.height - 1;
      let cls = isWall ? "cell wall" : "cell";
      let glyph = "";
      if (state.agent.col === col && state.agent.row === row) {
        cls += " agent";
        glyph = AGENT_GLYPHS[state.agent.dir] ?? "?";
      } else {
        const obj = byCell.get(`${col},${row}`);
        if (obj) {
          cls += ` obj ${obj.color}`;
          glyph = KIND_GLYPHS[obj.kind] ?? "?";
        }
      }
      cells.push(
        `<td class="${cls}" data-col="${col}" data-row="${row}">${glyph}</td>`,
      );
    }
    rows.push(`<tr>${cells.join("")}</tr>`);
  }
  const carried = state.carrying
    ? `<div class="carrying">carrying: <span class="${state.carrying.color}">` +
      `${KIND_GLYPHS[state.carrying.kind] ?? "?"}</span> ` +
      `${escapeHtml(state.carrying.color)} ${escapeHtml(state.carrying.kind)}</div>`
    : `<div class="carrying empty">carrying: nothing</div>`;
  return `<table class="grid">${rows.join("")}</table>${carried}`;
}

export function renderExplanation(result: ExplanationJson, topK = 10): string {
  const header =
    `<h3>${escapeHtml(result.method)}</h3>` +
    `<p class="explanation">“${escapeHtml(result.explanation)}”</p>` +
    `<p class="program"><code>${escapeHtml(result.program)}</code></p>`;
  const shown = result.candidates.slice(0, topK);
  const items = shown
    .map((c) => {
      // similarity is in [-1, 1]; perplexity (no_utterance) just gets a label
      const isSimilarity = result.method !== "no_utterance";
      const width = isSimilarity
        ? Math.max(0, Math.min(100, ((c.score + 1) / 2) * 100))
        : 0;
      const bar = isSimilarity
        ? `<span class="bar" style="width:${width.toFixed(1)}%"></span>`
        : "";
      return (
        `<li>${bar}<span class="cand">${escapeHtml(c.sentence)}</span>` +
        `<span class="score">${c.score.toFixed(4)}</span></li>`
      );
    })
    .join("");
  return `${header}<ol class="candidates">${items}</ol>`;
}

export function renderError(message: string): string {
  return `<div class="error-banner">${escapeHtml(message)}</div>`;
}
