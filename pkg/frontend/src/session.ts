// UI session state: the selected task, the server-mirrored grid state, and
// the demonstration being recorded. Every recorded action has already been
// validated by a /step round-trip; illegal keystrokes never enter the list.

import type { Action, GridStateJson, ExplanationJson, TaskJson } from "./types.js";

export const KEY_BINDINGS: Record<string, Action> = {
  ArrowLeft: "turn_left",
  ArrowRight: "turn_right",
  ArrowUp: "forward",
  p: "pickup",
  P: "pickup",
  d: "drop",
  D: "drop",
};

export function keyToAction(key: string): Action | null {
  return KEY_BINDINGS[key] ?? null;
}

export class UiSession {
  task: TaskJson | null = null;
  current: GridStateJson | null = null;
  utterance = "";
  recorded: Action[] = [];
  lastExplanations: ExplanationJson[] = [];
  // Bumped on every reset; responses tagged with an older epoch are stale
  // and must be discarded by the caller.
  epoch = 0;

  selectTask(task: TaskJson): void {
    this.task = task;
    this.resetRecording();
  }

  resetRecording(): void {
    this.epoch += 1;
    this.recorded = [];
    this.current = this.task ? structuredClone(this.task.initial) : null;
    this.lastExplanations = [];
  }

  /** Append a server-validated step; ignores results from a stale epoch. */
  commitStep(epoch: number, action: Action, newState: GridStateJson): boolean {
    if (epoch !== this.epoch || this.current === null) {
      return false;
    }
    this.recorded.push(action);
    this.current = newState;
    return true;
  }

  setExplanations(epoch: number, results: ExplanationJson[]): boolean {
    if (epoch !== this.epoch) {
      return false;
    }
    this.lastExplanations = results;
    return true;
  }
}
