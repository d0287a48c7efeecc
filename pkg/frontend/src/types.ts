// Wire types mirroring the service's JSON bodies.

export type Direction = "north" | "east" | "south" | "west";

export type Action = "turn_left" | "turn_right" | "forward" | "pickup" | "drop";

export interface ObjectJson {
  id: number;
  kind: string;
  color: string;
  col: number;
  row: number;
}

export interface GridStateJson {
  width: number;
  height: number;
  agent: { col: number; row: number; dir: Direction };
  carrying: { kind: string; color: string } | null;
  objects: ObjectJson[];
}

export interface TrajectoryJson {
  initial: GridStateJson;
  actions: Action[];
}

export interface TaskJson {
  id: string;
  initial: GridStateJson;
  goal: string;
  reference_demo: TrajectoryJson;
}

export interface CandidateJson {
  sentence: string;
  program: string;
  score: number;
}

export interface ExplanationJson {
  explanation: string;
  program: string;
  similarity: number | null;
  method: "full" | "no_demo" | "no_utterance";
  candidates: CandidateJson[];
}

export interface ErrorJson {
  kind: string;
  token?: string;
  position?: number;
  index?: number;
  detail?: string;
}
