// Thin fetch client for the forecasting service. The client never derives
// capacity or RAG values; it only moves payloads.

import type {
  ComponentsPayload,
  DiagnosticsPayload,
  ForecastPayload,
  HeatmapPayload,
  WhatIfDelta,
  WhatIfResponse,
} from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

/** The slice of the service the heatmap/what-if views depend on. */
export interface PlannerApi {
  heatmap(station: string, days?: number): Promise<HeatmapPayload>;
  whatif(station: string, deltas: WhatIfDelta[], days?: number): Promise<WhatIfResponse>;
}

async function parseError(res: Response): Promise<ApiError> {
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // keep the status text
  }
  return new ApiError(res.status, detail);
}

export class ApiClient implements PlannerApi {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string, params: Record<string, string | number | undefined>): Promise<T> {
    const query = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined) query.set(key, String(value));
    }
    const suffix = query.size > 0 ? `?${query.toString()}` : "";
    const res = await fetch(`${this.base}${path}${suffix}`);
    if (!res.ok) throw await parseError(res);
    return res.json() as Promise<T>;
  }

  async stations(): Promise<string[]> {
    const body = await this.get<{ stations: string[] }>("/stations", {});
    return body.stations;
  }

  heatmap(station: string, days?: number): Promise<HeatmapPayload> {
    return this.get<HeatmapPayload>("/heatmap", { station, days });
  }

  forecast(station: string, origin: string, from: string, to: string): Promise<ForecastPayload> {
    return this.get<ForecastPayload>("/forecast", { station, origin, from, to });
  }

  components(station: string, bucket: string, from: string, to: string): Promise<ComponentsPayload> {
    return this.get<ComponentsPayload>("/components", { station, bucket, from, to });
  }

  diagnostics(station: string, bucket: string): Promise<DiagnosticsPayload> {
    return this.get<DiagnosticsPayload>("/diagnostics", { station, bucket });
  }

  async whatif(station: string, deltas: WhatIfDelta[], days?: number): Promise<WhatIfResponse> {
    const res = await fetch(`${this.base}/whatif`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ station, days, deltas }),
    });
    if (!res.ok) throw await parseError(res);
    return res.json() as Promise<WhatIfResponse>;
  }
}
