// Shapes of the session-service JSON responses.  The UI is a pure
// projection of these; it never computes semantics on its own.

export interface RedexView {
  index: number;
  rule: string;
  path: string[];
  label: string;
  identifierStep: boolean;
}

export interface VariableView {
  name: string;
  scope: string;
  location: number;
  value: number;
}

export interface StoresView {
  variables: VariableView[];
  procedures: string[];
  loops: string[];
}

export interface DeltaView {
  variables: Record<string, [number, number][]>;
  B: [number, boolean][];
  W: [number, boolean][];
  WI: [number, unknown][];
  Pr: [number, unknown][];
}

export interface CountersView {
  nextId: number;
  prevId: number;
  nextLoc: number;
  freePool: number[];
  versions: Record<string, number>;
}

export interface TransitionView {
  step: number;
  rule: string;
  redex: { path: string[]; rule: string };
  ident: number | null;
  detail: string;
}

export interface SessionView {
  schemaVersion: number;
  sessionId: string;
  mode: "annotated" | "reverse";
  stepIndex: number;
  terminal: boolean;
  renderedProgram: string;
  residualProgram: string;
  stores: StoresView;
  delta: DeltaView;
  counters: CountersView;
  enabledRedexes: RedexView[];
  transition?: TransitionView;
  restored?: boolean;
  reverseSessionId?: string;
  invertedProgram?: string;
}

export interface ServiceError {
  error: string;
}
