// API payload shapes, mirrored verbatim from the service contract.

export type RagClass = "GREEN" | "AMBER" | "RED";

export interface HeatmapCell {
  hour: string; // ISO-8601
  yhat: number;
  c_p: number;
  c_s: number;
  c_total: number;
  rag: RagClass;
}

export interface HeatmapPayload {
  station: string;
  cells: HeatmapCell[];
}

export interface WhatIfDelta {
  hour: string;
  role: string;
  change: number;
}

export interface WhatIfDiffEntry {
  hour: string;
  before: RagClass;
  after: RagClass;
}

export interface WhatIfResponse {
  heatmap: HeatmapPayload;
  diff: WhatIfDiffEntry[];
  changed: number;
}

export interface ForecastRow {
  hour_start: string;
  horizon_days: number;
  bucket: string;
  yhat: number;
}

export interface ForecastPayload {
  station: string;
  origin: string;
  rows: ForecastRow[];
}

export interface ComponentsPayload {
  station: string;
  bucket: string;
  mode: string;
  rows: Record<string, number | string>[];
}

export interface DiagnosticsPayload {
  station: string;
  bucket: string;
  hours: string[];
  residuals: number[];
  hist_counts: number[];
  hist_edges: number[];
  qq_theoretical: number[];
  qq_sample: number[];
  outlier_hours: string[];
  robust_std: number;
  outlier_threshold: number;
}
