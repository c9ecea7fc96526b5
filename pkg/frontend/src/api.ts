/**
 * Thin typed client for the session HTTP API. All numeric values in
 * payloads are rational strings and stay strings here.
 */

import type { Expr, PreferenceInput, Space } from "./expr.js";

export interface RatValue {
  value: string;
  decimal: string;
}

export interface PairPayload {
  p: string[];
  u: string[];
}

export interface AssertResult {
  accepted: boolean;
  reason: string | null;
  certificate: { label: string; multiplier: string }[] | null;
  pair_exists?: boolean;
  pair?: PairPayload | null;
  reverse_precluded?: boolean;
}

export interface BoundsResult {
  query: "bounds";
  mode: string;
  lower: RatValue | null;
  upper: RatValue | null;
  [key: string]: unknown;
}

export interface RegionPoint {
  x: string;
  y: string;
  v: string[][];
}

export interface RegionResult {
  vertices: RegionPoint[];
  pairs: PairPayload[];
  grid_step: number;
}

export interface ApiError {
  error: { code: string; message: string };
}

export type QueryRequest =
  | { kind: "check" }
  | { kind: "pair" }
  | { kind: "bounds"; target: Expr; mode?: string; given?: string[]; iterations?: number }
  | { kind: "prob"; event: string[]; mode?: string }
  | { kind: "precluded"; lhs: Expr; rhs: Expr; level?: "a5" | "a6" };

export interface ProblemDocument extends Space {
  preferences: PreferenceInput[];
}

/** Transport hook so tests can replay recorded payloads. */
export type Transport = (
  method: "GET" | "POST",
  path: string,
  body?: unknown,
) => Promise<{ status: number; text: string }>;

export function fetchTransport(baseUrl: string): Transport {
  return async (method, path, body) => {
    const res = await fetch(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return { status: res.status, text: await res.text() };
  };
}

export class SessionApi {
  constructor(
    private readonly transport: Transport,
    public sessionId: string | null = null,
  ) {}

  private async call<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    const { status, text } = await this.transport(method, path, body);
    const parsed = JSON.parse(text) as T | ApiError;
    if (status >= 400) {
      const err = parsed as ApiError;
      throw new Error(`${err.error?.code ?? status}: ${err.error?.message ?? text}`);
    }
    return parsed as T;
  }

  private sid(): string {
    if (!this.sessionId) throw new Error("no session created yet");
    return this.sessionId;
  }

  async create(problem: ProblemDocument): Promise<string> {
    const out = await this.call<{ session_id: string }>("POST", "/session", problem);
    this.sessionId = out.session_id;
    return out.session_id;
  }

  assert(preference: PreferenceInput): Promise<AssertResult> {
    return this.call("POST", `/session/${this.sid()}/assert`, preference);
  }

  /** Returns the raw payload text so the UI can render values verbatim. */
  async queryRaw(q: QueryRequest): Promise<string> {
    const { status, text } = await this.transport(
      "POST",
      `/session/${this.sid()}/query`,
      q,
    );
    if (status >= 400) {
      const err = JSON.parse(text) as ApiError;
      throw new Error(`${err.error.code}: ${err.error.message}`);
    }
    return text;
  }

  undo(): Promise<{ undone: boolean; remaining: number }> {
    return this.call("POST", `/session/${this.sid()}/undo`);
  }

  state(): Promise<unknown> {
    return this.call("GET", `/session/${this.sid()}/state`);
  }

  exportProblem(): Promise<ProblemDocument> {
    return this.call("GET", `/session/${this.sid()}/export`);
  }

  async region(): Promise<RegionResult | null> {
    const { status, text } = await this.transport(
      "GET",
      `/session/${this.sid()}/region`,
    );
    if (status === 409) return null; // space is not plottable
    if (status >= 400) {
      const err = JSON.parse(text) as ApiError;
      throw new Error(`${err.error.code}: ${err.error.message}`);
    }
    return JSON.parse(text) as RegionResult;
  }
}
