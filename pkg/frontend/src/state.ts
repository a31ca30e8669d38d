import type { ClarificationSnapshot, SessionSnapshot } from "./types";

export type Screen = "Intake" | "Clarify" | "Answer" | "Error";

export interface ViewState {
  screen: Screen;
  session: SessionSnapshot | null;
  // option picked per pending clarification, keyed by clarification_index
  pendingSelections: Record<number, number>;
  // clarification indexes flagged after an incomplete submission
  highlighted: number[];
  errorMessage: string | null;
  fieldError: string | null;
}

export function initialState(): ViewState {
  return {
    screen: "Intake",
    session: null,
    pendingSelections: {},
    highlighted: [],
    errorMessage: null,
    fieldError: null,
  };
}

/** The screen is derived purely from the session snapshot's state field. */
export function screenFor(session: SessionSnapshot): Screen {
  switch (session.state) {
    case "clarifying":
      return "Clarify";
    case "complete":
    case "answered":
      return "Answer";
    case "failed":
      return "Error";
    default:
      return "Intake";
  }
}

export function fromSession(session: SessionSnapshot): ViewState {
  return {
    screen: screenFor(session),
    session,
    pendingSelections: {},
    highlighted: [],
    errorMessage: session.failure ? session.failure.message : null,
    fieldError: null,
  };
}

export function pendingClarifications(
  session: SessionSnapshot,
): ClarificationSnapshot[] {
  return session.clarifications.filter((c) => c.selection === null);
}

export function selectOption(
  state: ViewState,
  clarificationIndex: number,
  optionIndex: number,
): ViewState {
  return {
    ...state,
    pendingSelections: {
      ...state.pendingSelections,
      [clarificationIndex]: optionIndex,
    },
    highlighted: state.highlighted.filter((i) => i !== clarificationIndex),
  };
}

/** Clarification indexes that still need a pick before submitting. */
export function unanswered(state: ViewState): number[] {
  if (!state.session) return [];
  return pendingClarifications(state.session)
    .map((c) => c.clarification_index)
    .filter((i) => !(i in state.pendingSelections));
}

export function toErrorState(state: ViewState, message: string): ViewState {
  return { ...state, screen: "Error", errorMessage: message };
}
