import type {
  AnswerSnapshot,
  ApiErrorBody,
  Region,
  SelectionRequest,
  SessionSnapshot,
} from "./types";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly retryable: boolean;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.error;
    this.status = status;
    this.retryable = body.retryable;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for the /v1 API; fetch is injectable for tests. */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn: FetchLike = fetch.bind(globalThis)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const fallback: ApiErrorBody = {
        error: "server_error",
        message: `request failed with status ${response.status}`,
        retryable: response.status >= 500,
      };
      throw new ApiError(response.status, isApiErrorBody(payload) ? payload : fallback);
    }
    return payload as T;
  }

  regions(): Promise<Region[]> {
    return this.request<Region[]>("GET", "/v1/regions");
  }

  createSession(question: string, location: string): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>("POST", "/v1/sessions", { question, location });
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>("GET", `/v1/sessions/${sessionId}`);
  }

  submitSelections(
    sessionId: string,
    selections: SelectionRequest[],
  ): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>("POST", `/v1/sessions/${sessionId}/selections`, {
      selections,
    });
  }

  composeAnswer(sessionId: string): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>("POST", `/v1/sessions/${sessionId}/answer`);
  }

  getAnswer(sessionId: string): Promise<AnswerSnapshot> {
    return this.request<AnswerSnapshot>("GET", `/v1/sessions/${sessionId}/answer`);
  }
}

function isApiErrorBody(value: unknown): value is ApiErrorBody {
  return (
    typeof value === "object" &&
    value !== null &&
    typeof (value as ApiErrorBody).error === "string" &&
    typeof (value as ApiErrorBody).message === "string"
  );
}
