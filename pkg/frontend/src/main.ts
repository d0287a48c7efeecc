// Browser wiring: task picker, command box, keyboard-recorded demonstrations,
// and side-by-side explanation panels. All grid states, programs, and scores
// shown here came from server responses.

import { ApiClient, ApiError } from "./api.js";
import { renderError, renderExplanation, renderGrid } from "./render.js";
import { UiSession, keyToAction } from "./session.js";
import type { Action, GridStateJson } from "./types.js";

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

async function serverBase(): Promise<string> {
  try {
    const response = await fetch("config.json");
    if (response.ok) {
      const config = await response.json();
      if (typeof config.server === "string") return config.server;
    }
  } catch {
    // no config file; fall through to same-origin default
  }
  return "";
}

async function boot(): Promise<void> {
  const api = new ApiClient(await serverBase());
  const session = new UiSession();

  const gridEl = $("grid");
  const statusEl = $("status");
  const demoEl = $("demo");
  const panelsEl = $("panels");
  const taskSelect = $("task-select") as HTMLSelectElement;
  const utteranceInput = $("utterance") as HTMLInputElement;
  const methodSelect = $("method") as HTMLSelectElement;

  let busy = false; // at most one in-flight request per user action

  function redraw(): void {
    if (session.current) {
      gridEl.innerHTML = renderGrid(session.current);
    }
    demoEl.textContent = session.recorded.length
      ? session.recorded.join(" ")
      : "(no actions recorded — use the arrow keys, P, D; R resets)";
    panelsEl.innerHTML = session.lastExplanations
      .map((r) => `<div class="panel">${renderExplanation(r)}</div>`)
      .join("");
  }

  function flash(message: string): void {
    statusEl.innerHTML = renderError(message);
    setTimeout(() => {
      statusEl.innerHTML = "";
    }, 1500);
  }

  async function loadTasks(): Promise<void> {
    const ids = await api.listTasks();
    taskSelect.innerHTML = ids
      .map((id) => `<option value="${id}">${id}</option>`)
      .join("");
    if (ids.length) await selectTask(ids[0]);
  }

  async function selectTask(id: string): Promise<void> {
    session.selectTask(await api.getTask(id));
    redraw();
  }

  async function onKey(event: KeyboardEvent): Promise<void> {
    if (document.activeElement === utteranceInput) return;
    if (event.key === "r" || event.key === "R") {
      session.resetRecording();
      redraw();
      return;
    }
    const action = keyToAction(event.key);
    if (!action || !session.current || busy) return;
    event.preventDefault();
    busy = true;
    const epoch = session.epoch;
    try {
      const next = await api.step(session.current, action);
      if (session.commitStep(epoch, action, next)) redraw();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        flash(`illegal move: ${action}`);
      } else {
        flash(String(err));
      }
    } finally {
      busy = false;
    }
  }

  async function animate(initial: GridStateJson, actions: Action[]): Promise<void> {
    // replay server-side one step at a time so every frame is authoritative
    let state = initial;
    gridEl.innerHTML = renderGrid(state);
    for (const action of actions) {
      await new Promise((resolve) => setTimeout(resolve, 150));
      state = await api.step(state, action);
      gridEl.innerHTML = renderGrid(state);
    }
  }

  async function tryCommand(): Promise<void> {
    if (!session.task) return;
    try {
      const { program } = await api.parse(utteranceInput.value);
      statusEl.textContent = `parsed: ${program}`;
      const trajectory = await api.execute(session.task.id, program);
      await animate(trajectory.initial, trajectory.actions);
      redraw();
    } catch (err) {
      if (err instanceof ApiError && err.body.kind === "unknown_token") {
        statusEl.innerHTML = renderError(
          `the parser does not know the word “${err.body.token}” — ` +
          `record a demonstration and ask for an explanation`,
        );
      } else {
        statusEl.innerHTML = renderError(String(err));
      }
    }
  }

  async function requestExplanations(): Promise<void> {
    if (!session.task) return;
    const epoch = session.epoch;
    const methods: ("full" | "no_demo" | "no_utterance")[] =
      methodSelect.value === "full"
        ? ["full"]
        : ["full", methodSelect.value as "no_demo" | "no_utterance"];
    try {
      const results = await Promise.all(
        methods.map((m) =>
          api.explain(session.task!.id, utteranceInput.value, session.recorded, m),
        ),
      );
      if (session.setExplanations(epoch, results)) redraw();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        statusEl.innerHTML = renderError(
          "the recorded demonstration does not achieve any expressible goal yet",
        );
      } else {
        statusEl.innerHTML = renderError(String(err));
      }
    }
  }

  taskSelect.addEventListener("change", () => void selectTask(taskSelect.value));
  $("try").addEventListener("click", () => void tryCommand());
  $("explain").addEventListener("click", () => void requestExplanations());
  $("reset").addEventListener("click", () => {
    session.resetRecording();
    redraw();
  });
  window.addEventListener("keydown", (e) => void onKey(e));

  await loadTasks();
}

void boot();
