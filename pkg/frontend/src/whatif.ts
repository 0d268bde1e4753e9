// Session state for roster what-ifs: pending deltas, a frozen baseline
// snapshot, and the diff overlay after an apply. Deltas never touch the
// baseline client-side; reset restores the baseline view in one action.

import type { PlannerApi } from "./api";
import type { HeatmapPayload, WhatIfDelta, WhatIfDiffEntry } from "./types";

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object") {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export class WhatIfSession {
  private baselineSnapshot: HeatmapPayload | null = null;
  private currentView: HeatmapPayload | null = null;
  private overlay: WhatIfDiffEntry[] = [];
  readonly pending: WhatIfDelta[] = [];

  constructor(
    private readonly client: PlannerApi,
    readonly station: string,
    readonly days?: number,
  ) {}

  get baseline(): HeatmapPayload | null {
    return this.baselineSnapshot;
  }

  get view(): HeatmapPayload | null {
    return this.currentView;
  }

  get diff(): WhatIfDiffEntry[] {
    return this.overlay;
  }

  get changedHours(): Set<string> {
    return new Set(this.overlay.map((d) => d.hour));
  }

  async loadBaseline(): Promise<HeatmapPayload> {
    const payload = await this.client.heatmap(this.station, this.days);
    this.baselineSnapshot = deepFreeze(payload);
    this.currentView = this.baselineSnapshot;
    this.overlay = [];
    this.pending.length = 0;
    return this.baselineSnapshot;
  }

  addDelta(delta: WhatIfDelta): void {
    if (!Number.isInteger(delta.change) || delta.change === 0) {
      throw new Error("delta change must be a non-zero integer");
    }
    this.pending.push(delta);
  }

  removeDelta(index: number): void {
    this.pending.splice(index, 1);
  }

  /**
   * POST the pending deltas and adopt the returned heatmap and diff overlay.
   * On failure (e.g. 422) the current view and overlay are left untouched.
   */
  async apply(): Promise<WhatIfDiffEntry[]> {
    if (this.baselineSnapshot === null) {
      throw new Error("load the baseline before applying deltas");
    }
    const response = await this.client.whatif(this.station, [...this.pending], this.days);
    this.currentView = deepFreeze(response.heatmap);
    this.overlay = response.diff;
    return this.overlay;
  }

  /** Restore the baseline view and clear deltas and overlay. */
  reset(): void {
    this.currentView = this.baselineSnapshot;
    this.overlay = [];
    this.pending.length = 0;
  }
}
