import { Api } from "./api.js";
import { measureKeysFor } from "./format.js";
import { Aggregation, LogSummary, ModelInfo, Report, Window } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  summary: LogSummary | null;
  model: ModelInfo | null;
  report: Report | null;
  dot: string | null;
  measures: string[];
  badgeMeasure: string | null;
  aggregation: Aggregation;
  window: Window | null;
  selectedTransition: string | null;
  busy: boolean;
  error: string | null;
}

function initialState(): ViewState {
  return {
    sessionId: null,
    summary: null,
    model: null,
    report: null,
    dot: null,
    measures: [],
    badgeMeasure: null,
    aggregation: "mean",
    window: null,
    selectedTransition: null,
    busy: false,
    error: null,
  };
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

/**
 * Single source of truth for the page. Measure/aggregation/window changes
 * are debounced into exactly one analyze request; responses that were
 * superseded by a newer change or upload are dropped.
 */
export class AppStore {
  private state: ViewState = initialState();
  private listeners = new Set<(state: ViewState) => void>();
  private pendingTimer: ReturnType<typeof setTimeout> | null = null;
  private generation = 0;

  constructor(
    private api: Api,
    private debounceMs = 200,
  ) {}

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: (state: ViewState) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private set(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  private cancelPending(): void {
    if (this.pendingTimer !== null) {
      clearTimeout(this.pendingTimer);
      this.pendingTimer = null;
    }
  }

  async uploadFile(file: Blob, filename: string, format?: string): Promise<void> {
    this.cancelPending();
    this.generation++;
    this.set({ busy: true, error: null });
    try {
      const sessionId = await this.api.createSession(file, filename, format);
      const summary = await this.api.fetchLogSummary(sessionId);
      const measures = measureKeysFor(summary.objectTypes);
      // new log: every selection resets so nothing references stale state
      this.set({
        sessionId,
        summary,
        model: null,
        report: null,
        dot: null,
        measures,
        badgeMeasure: measures.includes("sync") ? "sync" : measures[0] ?? null,
        aggregation: "mean",
        window: null,
        selectedTransition: null,
        busy: false,
      });
    } catch (error) {
      this.set({ busy: false, error: describe(error) });
    }
  }

  async discover(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return;
    this.set({ busy: true, error: null });
    try {
      const model = await this.api.discover(sessionId);
      this.set({ model, busy: false });
      this.refresh();
    } catch (error) {
      this.set({ busy: false, error: describe(error) });
    }
  }

  setMeasures(keys: string[]): void {
    const badge =
      this.state.badgeMeasure && keys.includes(this.state.badgeMeasure)
        ? this.state.badgeMeasure
        : keys[0] ?? null;
    this.set({ measures: [...keys], badgeMeasure: badge });
    this.refresh();
  }

  setBadgeMeasure(key: string): void {
    if (!this.state.measures.includes(key)) return;
    this.set({ badgeMeasure: key });
    this.refresh();
  }

  setAggregation(aggregation: Aggregation): void {
    this.set({ aggregation });
    this.refresh();
  }

  setWindow(window: Window | null): void {
    this.set({ window });
    this.refresh();
  }

  selectTransition(name: string | null): void {
    if (name !== null && !this.state.report?.transitions[name]) return;
    this.set({ selectedTransition: name });
  }

  /** Schedule one analysis for the current selections. */
  private refresh(): void {
    if (!this.state.sessionId || !this.state.model) return;
    this.cancelPending();
    const generation = ++this.generation;
    this.pendingTimer = setTimeout(() => {
      this.pendingTimer = null;
      void this.runAnalyze(generation);
    }, this.debounceMs);
  }

  private async runAnalyze(generation: number): Promise<void> {
    const { sessionId, measures, aggregation, window, badgeMeasure } = this.state;
    if (!sessionId) return;
    this.set({ busy: true });
    try {
      const report = await this.api.analyze(sessionId, measures, [aggregation], window);
      if (generation !== this.generation) return; // superseded
      const badge = badgeMeasure && measures.includes(badgeMeasure) ? badgeMeasure : null;
      const dot = badge
        ? await this.api.modelDot(sessionId, badge, aggregation)
        : await this.api.modelDot(sessionId);
      if (generation !== this.generation) return;
      const selected =
        this.state.selectedTransition && report.transitions[this.state.selectedTransition]
          ? this.state.selectedTransition
          : null;
      this.set({
        report,
        dot,
        selectedTransition: selected,
        busy: false,
        error: null,
      });
    } catch (error) {
      if (generation === this.generation) {
        this.set({ busy: false, error: describe(error) });
      }
    }
  }
}
