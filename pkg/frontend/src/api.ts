import { Aggregation, LogSummary, ModelInfo, Report, Window } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** What the views need from the backend; ApiClient is the real thing. */
export interface Api {
  createSession(file: Blob, filename: string, format?: string): Promise<string>;
  fetchLogSummary(sessionId: string): Promise<LogSummary>;
  discover(sessionId: string): Promise<ModelInfo>;
  analyze(
    sessionId: string,
    measures: string[],
    aggregations: Aggregation[],
    window: Window | null,
  ): Promise<Report>;
  modelDot(sessionId: string, measure?: string, aggregation?: Aggregation): Promise<string>;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public errorKind: string,
    message: string,
  ) {
    super(message);
  }
}

async function fail(response: Response): Promise<never> {
  let kind = "Error";
  let detail = `${response.status}`;
  try {
    const body = await response.json();
    kind = body.error ?? kind;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, kind, detail);
}

export class ApiClient implements Api {
  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(file: Blob, filename: string, format?: string): Promise<string> {
    const form = new FormData();
    form.append("file", file, filename);
    if (format) form.append("format", format);
    const response = await this.fetchFn(this.url("/sessions"), {
      method: "POST",
      body: form,
    });
    if (!response.ok) await fail(response);
    return (await response.json()).session_id;
  }

  async fetchLogSummary(sessionId: string): Promise<LogSummary> {
    const response = await this.fetchFn(this.url(`/sessions/${sessionId}/log`));
    if (!response.ok) await fail(response);
    return summarizeLog(await response.json());
  }

  async discover(sessionId: string): Promise<ModelInfo> {
    const response = await this.fetchFn(this.url(`/sessions/${sessionId}/discover`), {
      method: "POST",
    });
    if (!response.ok) await fail(response);
    return await response.json();
  }

  async analyze(
    sessionId: string,
    measures: string[],
    aggregations: Aggregation[],
    window: Window | null,
  ): Promise<Report> {
    const body: Record<string, unknown> = { measures, aggregations };
    if (window) body.window = { from: window.from, to: window.to };
    const response = await this.fetchFn(this.url(`/sessions/${sessionId}/analyze`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await fail(response);
    return await response.json();
  }

  async modelDot(
    sessionId: string,
    measure?: string,
    aggregation?: Aggregation,
  ): Promise<string> {
    let path = `/sessions/${sessionId}/model.dot`;
    if (measure && aggregation) {
      const params = new URLSearchParams({ measure, aggregation });
      path += `?${params}`;
    }
    const response = await this.fetchFn(this.url(path));
    if (!response.ok) await fail(response);
    return await response.text();
  }
}

/** Condense the canonical log JSON into what the views need. */
export function summarizeLog(doc: any): LogSummary {
  const objects: Record<string, string> = {};
  for (const [oi, rec] of Object.entries<any>(doc["ocel:objects"] ?? {})) {
    objects[oi] = rec["ocel:type"];
  }
  const objectCounts: Record<string, number> = {};
  for (const type of Object.values(objects)) {
    objectCounts[type] = (objectCounts[type] ?? 0) + 1;
  }
  const rows: LogSummary["rows"] = [];
  for (const [ei, rec] of Object.entries<any>(doc["ocel:events"] ?? {})) {
    rows.push({
      id: ei,
      activity: rec["ocel:activity"],
      start: rec["ocel:vmap"]?.start_timestamp ?? rec["ocel:timestamp"],
      complete: rec["ocel:timestamp"],
      objects: [...(rec["ocel:omap"] ?? [])].sort(),
    });
  }
  rows.sort((a, b) =>
    a.complete < b.complete ? -1 : a.complete > b.complete ? 1 : a.id < b.id ? -1 : 1,
  );
  let span: LogSummary["span"] = null;
  if (rows.length) {
    const starts = rows.map((r) => r.start).sort();
    span = { from: starts[0], to: rows[rows.length - 1].complete };
  }
  return {
    events: rows.length,
    objectCounts,
    objectTypes: Object.keys(objectCounts).sort(),
    span,
    rows,
  };
}
