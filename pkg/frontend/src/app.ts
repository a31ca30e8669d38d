import { ApiClient, ApiError } from "./api";
import {
  fromSession,
  initialState,
  selectOption,
  toErrorState,
  unanswered,
  type ViewState,
} from "./state";
import type { Region } from "./types";

/**
 * Screen controller. Holds the view state, talks to the API, and notifies
 * the host (the DOM layer, or a test) whenever the state changes. All legal
 * content comes from the server; this class only routes between screens.
 */
export class App {
  readonly api: ApiClient;
  state: ViewState;
  regions: Region[] = [];
  private readonly onChange: (state: ViewState) => void;

  constructor(api: ApiClient, onChange: (state: ViewState) => void = () => {}) {
    this.api = api;
    this.state = initialState();
    this.onChange = onChange;
  }

  private update(state: ViewState): void {
    this.state = state;
    this.onChange(state);
  }

  async start(): Promise<void> {
    try {
      this.regions = await this.api.regions();
      this.update(initialState());
    } catch (error) {
      this.update(toErrorState(this.state, describe(error)));
    }
  }

  /** Intake submit: open a session and route on the returned state. */
  async submitIntake(question: string, location: string): Promise<void> {
    try {
      const session = await this.api.createSession(question, location);
      await this.routeSession(session.session_id);
    } catch (error) {
      if (error instanceof ApiError && error.code === "unsupported_region") {
        this.update({ ...this.state, screen: "Intake", fieldError: error.message });
        return;
      }
      this.update(toErrorState(this.state, describe(error)));
    }
  }

  pickOption(clarificationIndex: number, optionIndex: number): void {
    this.update(selectOption(this.state, clarificationIndex, optionIndex));
  }

  /** Clarify submit: every card must have a pick; otherwise highlight. */
  async submitClarifications(): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    const missing = unanswered(this.state);
    if (missing.length > 0) {
      this.update({ ...this.state, highlighted: missing });
      return;
    }
    const selections = Object.entries(this.state.pendingSelections).map(
      ([clarificationIndex, optionIndex]) => ({
        clarification_index: Number(clarificationIndex),
        option_index: optionIndex,
      }),
    );
    try {
      await this.api.submitSelections(session.session_id, selections);
      await this.routeSession(session.session_id);
    } catch (error) {
      if (error instanceof ApiError && error.code === "incomplete_submission") {
        this.update({ ...this.state, highlighted: unanswered(this.state) });
        return;
      }
      this.update(toErrorState(this.state, describe(error)));
    }
  }

  /**
   * Fetch the session and show the matching screen. Used after every
   * mutation and on page reload; the server is the single source of truth.
   */
  async routeSession(sessionId: string): Promise<void> {
    try {
      let session = await this.api.getSession(sessionId);
      if (session.state === "complete") {
        session = await this.api.composeAnswer(sessionId);
      }
      this.update(fromSession(session));
    } catch (error) {
      this.update(toErrorState(this.state, describe(error)));
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}
