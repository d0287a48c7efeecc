import { describe, expect, it } from "vitest";
import { renderExplanation, renderGrid, renderError } from "../src/render.js";
import type { ExplanationJson, GridStateJson } from "../src/types.js";

const STATE: GridStateJson = {
  width: 8,
  height: 8,
  agent: { col: 1, row: 4, dir: "east" },
  carrying: null,
  objects: [
    { id: 1, kind: "ball", color: "blue", col: 6, row: 1 },
    { id: 2, kind: "key", color: "grey", col: 1, row: 6 },
    { id: 3, kind: "box", color: "green", col: 2, row: 6 },
  ],
};

describe("renderGrid", () => {
  const html = renderGrid(STATE);

  it("emits one cell per grid square", () => {
    expect(html.match(/<td/g)?.length).toBe(64);
    expect(html.match(/<tr>/g)?.length).toBe(8);
  });

  it("marks the perimeter as walls", () => {
    expect(html).toContain('class="cell wall" data-col="0" data-row="0"');
    expect(html).toContain('class="cell wall" data-col="7" data-row="7"');
    expect(html).not.toContain('class="cell wall" data-col="1" data-row="1"');
  });

  it("draws the agent with a facing glyph at its cell", () => {
    expect(html).toContain('class="cell agent" data-col="1" data-row="4">▶</td>');
  });

  it("draws objects with kind glyph and color class", () => {
    expect(html).toContain('class="cell obj blue" data-col="6" data-row="1">●</td>');
    expect(html).toContain('class="cell obj grey" data-col="1" data-row="6">⚷</td>');
    expect(html).toContain('class="cell obj green" data-col="2" data-row="6">■</td>');
  });

  it("shows an empty-hands badge", () => {
    expect(html).toContain("carrying: nothing");
  });

  it("shows a carrying badge and hides the carried object's cell", () => {
    const carrying: GridStateJson = {
      ...STATE,
      carrying: { kind: "ball", color: "blue" },
      objects: STATE.objects.filter((o) => o.id !== 1),
    };
    const h = renderGrid(carrying);
    expect(h).toContain("carrying:");
    expect(h).toContain("blue ball");
    expect(h).not.toContain('data-col="6" data-row="1">●');
  });
});

describe("renderExplanation", () => {
  const result: ExplanationJson = {
    explanation: "go to the blue ball",
    program: "goto(blue,ball)",
    similarity: 0.9132,
    method: "full",
    candidates: [
      { sentence: "go to the blue ball", program: "goto(blue,ball)", score: 0.9132 },
      { sentence: "go to a blue ball", program: "goto(blue,ball)", score: 0.9132 },
    ],
  };

  it("shows the chosen sentence, program, and ranked candidates", () => {
    const html = renderExplanation(result);
    expect(html).toContain("go to the blue ball");
    expect(html).toContain("goto(blue,ball)");
    expect(html).toContain("0.9132");
    expect(html.match(/<li>/g)?.length).toBe(2);
    expect(html).toContain('class="bar"');
  });

  it("caps the candidate list at topK", () => {
    const many: ExplanationJson = {
      ...result,
      candidates: Array.from({ length: 25 }, (_, i) => ({
        sentence: `candidate ${i}`,
        program: "goto(blue,ball)",
        score: 1 - i / 25,
      })),
    };
    expect(renderExplanation(many).match(/<li>/g)?.length).toBe(10);
    expect(renderExplanation(many, 3).match(/<li>/g)?.length).toBe(3);
  });

  it("omits similarity bars for the no_utterance ablation", () => {
    const html = renderExplanation({
      ...result,
      similarity: null,
      method: "no_utterance",
      candidates: [
        { sentence: "go to the blue ball", program: "goto(blue,ball)", score: 8.1 },
      ],
    });
    expect(html).not.toContain('class="bar"');
    expect(html).toContain("8.1000");
  });

  it("escapes HTML in server-provided text", () => {
    const html = renderExplanation({
      ...result,
      explanation: "<script>alert(1)</script>",
      candidates: [],
    });
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("renderError", () => {
  it("wraps the message in a banner and escapes it", () => {
    const html = renderError('bad <token> "x"');
    expect(html).toContain('class="error-banner"');
    expect(html).toContain("bad &lt;token&gt; &quot;x&quot;");
  });
});
