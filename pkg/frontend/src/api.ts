/**
 * Thin REST client for the engine API. One method per endpoint, no
 * client-side recomputation of anything the engine returns.
 */

import type {
  ApiErrorBody,
  CommitResponse,
  EvaluationResult,
  FormationDoc,
  HistoryEntry,
  ImageDoc,
  PreferencesDoc,
  SelectResponse,
  ServiceDoc,
  SessionCreated,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly detail?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let parsed: Partial<ApiErrorBody> = {};
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(
        response.status,
        parsed.code ?? "http_error",
        parsed.message ?? response.statusText,
        parsed.detail,
      );
    }
    return (await response.json()) as T;
  }

  images(feature?: string): Promise<{ images: ImageDoc[] }> {
    const query = feature === undefined ? "" : `?feature=${encodeURIComponent(feature)}`;
    return this.request("GET", `/catalog/images${query}`);
  }

  services(): Promise<{ services: ServiceDoc[] }> {
    return this.request("GET", "/catalog/services");
  }

  createSession(formation: FormationDoc): Promise<SessionCreated> {
    return this.request("POST", "/sessions", { formation });
  }

  select(sessionId: string, component: string, version: number): Promise<SelectResponse> {
    return this.request("POST", `/sessions/${sessionId}/components/${component}/select`, {
      version,
    });
  }

  putPreferences(
    sessionId: string,
    component: string,
    version: number,
    preferences: PreferencesDoc | null,
  ): Promise<{ version: number }> {
    return this.request("PUT", `/sessions/${sessionId}/components/${component}/preferences`, {
      version,
      preferences,
    });
  }

  evaluate(sessionId: string, component: string): Promise<{ version: number; result: EvaluationResult }> {
    return this.request("POST", `/sessions/${sessionId}/components/${component}/evaluate`, {});
  }

  commit(
    sessionId: string,
    component: string,
    version: number,
    image: string,
    service: string,
  ): Promise<CommitResponse> {
    return this.request("POST", `/sessions/${sessionId}/components/${component}/commit`, {
      version,
      image,
      service,
    });
  }

  history(sessionId: string): Promise<{ sessionId: string; history: HistoryEntry[] }> {
    return this.request("GET", `/sessions/${sessionId}/history`);
  }
}
