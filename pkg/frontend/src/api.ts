// Thin fetch client for the cfexplain service. All domain computation happens
// server-side; this module only moves JSON around.

import type {
  Action,
  ErrorJson,
  ExplanationJson,
  GridStateJson,
  TaskJson,
  TrajectoryJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorJson,
  ) {
    super(`${body.kind} (HTTP ${status})`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ErrorJson);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  health(): Promise<{ status: string }> {
    return fetch(this.url("/health")).then((r) => asJson(r));
  }

  listTasks(): Promise<string[]> {
    return fetch(this.url("/tasks"))
      .then((r) => asJson<{ tasks: string[] }>(r))
      .then((b) => b.tasks);
  }

  getTask(id: string): Promise<TaskJson> {
    return fetch(this.url(`/tasks/${id}`)).then((r) => asJson<TaskJson>(r));
  }

  parse(utterance: string): Promise<{ program: string }> {
    return this.post("/parse", { utterance });
  }

  step(state: GridStateJson, action: Action): Promise<GridStateJson> {
    return this.post<{ state: GridStateJson }>("/step", { state, action }).then(
      (b) => b.state,
    );
  }

  execute(taskId: string, program: string): Promise<TrajectoryJson> {
    return this.post<{ trajectory: TrajectoryJson }>("/execute", {
      task_id: taskId,
      program,
    }).then((b) => b.trajectory);
  }

  explain(
    taskId: string,
    utterance: string,
    demonstration: Action[],
    method: "full" | "no_demo" | "no_utterance",
  ): Promise<ExplanationJson> {
    return this.post("/explain", {
      task_id: taskId,
      utterance,
      demonstration,
      method,
    });
  }

  check(taskId: string, utterance: string, demonstration: Action[]): Promise<boolean> {
    return this.post<{ success: boolean }>("/check", {
      task_id: taskId,
      utterance,
      demonstration,
    }).then((b) => b.success);
  }
}
