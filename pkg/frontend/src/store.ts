/**
 * Session view state: assertion log, watched queries, region snapshot.
 *
 * Assertions serialize (at most one in flight); after every accepted
 * assertion or undo, all watched queries re-run and the region snapshot
 * refreshes. Watched panel values are the server's payload strings,
 * kept verbatim - the client does no arithmetic on them.
 */

import type {
  AssertResult,
  QueryRequest,
  RegionResult,
  SessionApi,
} from "./api.js";
import type { PreferenceInput, Space } from "./expr.js";
import { validateExpr } from "./expr.js";

export interface LogEntry {
  preference: PreferenceInput;
  verdict: AssertResult;
}

export interface WatchedQuery {
  label: string;
  request: QueryRequest;
  /** raw canonical payload text from the last refresh */
  payload: string | null;
  /** error state rendered as a state, not a failure */
  errorCode: string | null;
}

export class SessionStore {
  readonly log: LogEntry[] = [];
  readonly watched: WatchedQuery[] = [];
  region: RegionResult | null = null;
  regionAvailable = true;
  private chain: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly api: SessionApi,
    readonly space: Space,
  ) {}

  /** Serialize mutations: at most one assertion in flight. */
  private enqueue<T>(job: () => Promise<T>): Promise<T> {
    const next = this.chain.then(job, job);
    this.chain = next.catch(() => undefined);
    return next;
  }

  watch(label: string, request: QueryRequest): WatchedQuery {
    const q: WatchedQuery = { label, request, payload: null, errorCode: null };
    this.watched.push(q);
    return q;
  }

  async assert(preference: PreferenceInput): Promise<AssertResult> {
    const problems = [
      ...validateExpr(preference.lhs, this.space),
      ...validateExpr(preference.rhs, this.space),
    ];
    if (problems.length) {
      throw new Error(`invalid preference: ${problems.join("; ")}`);
    }
    return this.enqueue(async () => {
      const verdict = await this.api.assert(preference);
      this.log.push({ preference, verdict });
      if (verdict.accepted) await this.refresh();
      return verdict;
    });
  }

  async undo(): Promise<void> {
    await this.enqueue(async () => {
      await this.api.undo();
      this.log.push({
        preference: null as unknown as PreferenceInput,
        verdict: {
          accepted: true,
          reason: "undo",
          certificate: null,
        },
      });
      await this.refresh();
    });
  }

  /** Re-run every watched query and the region snapshot. */
  async refresh(): Promise<void> {
    for (const q of this.watched) {
      try {
        q.payload = await this.api.queryRaw(q.request);
        q.errorCode = null;
      } catch (err) {
        q.payload = null;
        q.errorCode = err instanceof Error ? err.message : String(err);
      }
    }
    if (this.regionAvailable) {
      try {
        this.region = await this.api.region();
        this.regionAvailable = this.region !== null;
      } catch {
        this.region = null;
      }
    }
  }

  /** The replayable assertion log (accepted assertions only). */
  assertionLog(): PreferenceInput[] {
    return this.log
      .filter((e) => e.preference && e.verdict.accepted)
      .map((e) => e.preference);
  }
}

/** Pull a displayed bound value out of a watched payload, verbatim. */
export function displayedValue(
  q: WatchedQuery,
  field: "lower" | "upper",
): { value: string; decimal: string } | null {
  if (!q.payload) return null;
  const parsed = JSON.parse(q.payload) as Record<
    string,
    { value: string; decimal: string } | null
  >;
  return parsed[field] ?? null;
}
