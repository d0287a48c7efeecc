import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const STATE = {
  width: 8,
  height: 8,
  agent: { col: 1, row: 4, dir: "east" as const },
  carrying: null,
  objects: [],
};

afterEach(() => {
  vi.restoreAllMocks();
});

describe("ApiClient", () => {
  it("joins the base URL without doubled slashes", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ status: "ok" }));
    await new ApiClient("http://localhost:8000/").health();
    expect(fetchMock).toHaveBeenCalledWith("http://localhost:8000/health");
  });

  it("lists task ids from the tasks envelope", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse({ tasks: ["a", "b"] }),
    );
    expect(await new ApiClient("").listTasks()).toEqual(["a", "b"]);
  });

  it("posts the utterance to /parse and returns the program", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ program: "goto(blue,ball)" }));
    const result = await new ApiClient("").parse("go to the blue ball");
    expect(result.program).toBe("goto(blue,ball)");
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/parse");
    expect(init?.method).toBe("POST");
    expect(JSON.parse(init?.body as string)).toEqual({
      utterance: "go to the blue ball",
    });
  });

  it("unwraps the state envelope from /step", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ state: STATE }));
    const next = await new ApiClient("").step(STATE, "forward");
    expect(next).toEqual(STATE);
    const [, init] = fetchMock.mock.calls[0];
    expect(JSON.parse(init?.body as string)).toEqual({
      state: STATE,
      action: "forward",
    });
  });

  it("unwraps the trajectory envelope from /execute", async () => {
    const trajectory = { initial: STATE, actions: ["forward", "forward"] };
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse({ trajectory }));
    const result = await new ApiClient("").execute("t1", "goto(blue,ball)");
    expect(result).toEqual(trajectory);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/execute");
    expect(JSON.parse(init?.body as string)).toEqual({
      task_id: "t1",
      program: "goto(blue,ball)",
    });
  });

  it("posts the full explanation request", async () => {
    const explanation = {
      explanation: "go to the blue ball",
      program: "goto(blue,ball)",
      similarity: 1,
      method: "full",
      candidates: [],
    };
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse(explanation));
    const result = await new ApiClient("").explain(
      "t1",
      "walk to the blue circle",
      ["forward"],
      "full",
    );
    expect(result).toEqual(explanation);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/explain");
    expect(JSON.parse(init?.body as string)).toEqual({
      task_id: "t1",
      utterance: "walk to the blue circle",
      demonstration: ["forward"],
      method: "full",
    });
  });

  it("unwraps the success flag from /check", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse({ success: true }),
    );
    expect(await new ApiClient("").check("t1", "go to the blue ball", [])).toBe(
      true,
    );
  });

  it("turns non-2xx responses into ApiError with the parsed body", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse({ kind: "unknown_token", token: "circle" }, 422),
    );
    const err = await new ApiClient("")
      .parse("go to the blue circle")
      .then(() => null)
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body).toEqual({ kind: "unknown_token", token: "circle" });
    expect(err.message).toContain("unknown_token");
  });

  it("surfaces 409 no_valid_explanation from /explain", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse({ kind: "no_valid_explanation" }, 409),
    );
    const err = await new ApiClient("")
      .explain("t1", "x", [], "full")
      .then(() => null)
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.body.kind).toBe("no_valid_explanation");
  });
});
