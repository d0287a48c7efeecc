import { describe, expect, it } from "vitest";
import { UiSession, keyToAction } from "../src/session.js";
import type { GridStateJson, TaskJson } from "../src/types.js";

const INITIAL: GridStateJson = {
  width: 8,
  height: 8,
  agent: { col: 1, row: 4, dir: "east" },
  carrying: null,
  objects: [{ id: 1, kind: "ball", color: "blue", col: 6, row: 1 }],
};

const TASK: TaskJson = {
  id: "t1",
  initial: INITIAL,
  goal: "goto(blue,ball)",
  reference_demo: { initial: INITIAL, actions: ["forward"] },
};

function advanced(col: number): GridStateJson {
  return { ...INITIAL, agent: { ...INITIAL.agent, col } };
}

describe("keyToAction", () => {
  it("maps the documented keys", () => {
    expect(keyToAction("ArrowLeft")).toBe("turn_left");
    expect(keyToAction("ArrowRight")).toBe("turn_right");
    expect(keyToAction("ArrowUp")).toBe("forward");
    expect(keyToAction("p")).toBe("pickup");
    expect(keyToAction("P")).toBe("pickup");
    expect(keyToAction("d")).toBe("drop");
    expect(keyToAction("D")).toBe("drop");
  });

  it("returns null for unbound keys", () => {
    expect(keyToAction("ArrowDown")).toBeNull();
    expect(keyToAction("x")).toBeNull();
    expect(keyToAction("Enter")).toBeNull();
  });
});

describe("UiSession", () => {
  it("starts a fresh recording when a task is selected", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    expect(s.recorded).toEqual([]);
    expect(s.current).toEqual(INITIAL);
    // the working copy must not alias the task's initial state
    expect(s.current).not.toBe(TASK.initial);
  });

  it("commits validated steps in order", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    expect(s.commitStep(s.epoch, "forward", advanced(2))).toBe(true);
    expect(s.commitStep(s.epoch, "forward", advanced(3))).toBe(true);
    expect(s.recorded).toEqual(["forward", "forward"]);
    expect(s.current?.agent.col).toBe(3);
  });

  it("discards a step whose response arrives after a reset", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    const stale = s.epoch;
    s.resetRecording();
    expect(s.commitStep(stale, "forward", advanced(2))).toBe(false);
    expect(s.recorded).toEqual([]);
    expect(s.current?.agent.col).toBe(1);
  });

  it("reset clears the recording and explanations and restores the initial state", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    s.commitStep(s.epoch, "forward", advanced(2));
    s.lastExplanations = [
      {
        explanation: "go to the blue ball",
        program: "goto(blue,ball)",
        similarity: 1,
        method: "full",
        candidates: [],
      },
    ];
    s.resetRecording();
    expect(s.recorded).toEqual([]);
    expect(s.lastExplanations).toEqual([]);
    expect(s.current).toEqual(INITIAL);
  });

  it("discards explanations from a stale epoch", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    const stale = s.epoch;
    s.resetRecording();
    const results = [
      {
        explanation: "go to the blue ball",
        program: "goto(blue,ball)",
        similarity: 1,
        method: "full" as const,
        candidates: [],
      },
    ];
    expect(s.setExplanations(stale, results)).toBe(false);
    expect(s.lastExplanations).toEqual([]);
    expect(s.setExplanations(s.epoch, results)).toBe(true);
    expect(s.lastExplanations).toEqual(results);
  });

  it("switching tasks invalidates in-flight steps from the previous task", () => {
    const s = new UiSession();
    s.selectTask(TASK);
    const stale = s.epoch;
    s.selectTask({ ...TASK, id: "t2" });
    expect(s.commitStep(stale, "forward", advanced(2))).toBe(false);
    expect(s.task?.id).toBe("t2");
    expect(s.recorded).toEqual([]);
  });
});
