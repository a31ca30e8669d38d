// JSON shapes delivered by the /v1 HTTP API. The client renders these
// verbatim; it never computes legal content locally.

export interface Region {
  code: string;
  name: string;
}

export interface SelectionSnapshot {
  option_index: number;
  option_text: string;
}

export interface ClarificationSnapshot {
  question_index: number;
  clarification_index: number;
  text: string;
  node_id: string;
  options: string[];
  selection: SelectionSnapshot | null;
}

export interface AnswerSnapshot {
  conclusion: string;
  jurisprudential_analysis: string;
  resolution_suggestions: string;
  cited_provisions: string[];
}

export type SessionState =
  | "awaiting_intake"
  | "clarifying"
  | "complete"
  | "answered"
  | "failed";

export interface SessionSnapshot {
  session_id: string;
  question: string;
  location: string;
  state: SessionState;
  round: number;
  best_effort: boolean;
  clarifications: ClarificationSnapshot[];
  answer: AnswerSnapshot | null;
  failure: { code: string; message: string } | null;
}

export interface ApiErrorBody {
  error: string;
  message: string;
  retryable: boolean;
}

export interface SelectionRequest {
  clarification_index: number;
  option_index: number;
}
