export interface MeasureStats {
  samples: number[];
  mean: number | null;
  median: number | null;
  min: number | null;
  max: number | null;
  count: number;
  undefined_count: number;
}

export interface Report {
  window: { from: number; to: number } | null;
  transitions: Record<string, Record<string, MeasureStats>>;
}

export interface EventRow {
  id: string;
  activity: string;
  start: string;
  complete: string;
  objects: string[];
}

export interface LogSummary {
  events: number;
  objectCounts: Record<string, number>;
  objectTypes: string[];
  span: { from: string; to: string } | null;
  rows: EventRow[];
}

export interface ModelInfo {
  places: number;
  transitions: number;
  arcs: number;
  variable_arcs: number;
}

export type Aggregation = "mean" | "median" | "min" | "max";

export const AGGREGATIONS: Aggregation[] = ["mean", "median", "min", "max"];

export interface Window {
  from: string;
  to: string;
}
