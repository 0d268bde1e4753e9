// Pure view-model for the RAG grid. Every class and number shown comes from
// the payload verbatim; this module does no capacity or RAG arithmetic.

import type { HeatmapCell, HeatmapPayload, RagClass } from "./types";

export interface HeatmapGrid {
  station: string;
  days: string[]; // ISO dates, ascending
  hours: number[]; // hours of day present, ascending
  cellCount: number;
}

export function cellKey(day: string, hour: number): string {
  return `${day}T${String(hour).padStart(2, "0")}`;
}

function splitHourIso(iso: string): { day: string; hour: number } {
  return { day: iso.slice(0, 10), hour: Number(iso.slice(11, 13)) };
}

export class HeatmapView {
  readonly grid: HeatmapGrid;
  private readonly byKey = new Map<string, HeatmapCell>();

  constructor(readonly payload: HeatmapPayload) {
    const days = new Set<string>();
    const hours = new Set<number>();
    for (const cell of payload.cells) {
      const { day, hour } = splitHourIso(cell.hour);
      days.add(day);
      hours.add(hour);
      this.byKey.set(cellKey(day, hour), cell);
    }
    this.grid = {
      station: payload.station,
      days: [...days].sort(),
      hours: [...hours].sort((a, b) => a - b),
      cellCount: payload.cells.length,
    };
    if (this.byKey.size !== payload.cells.length) {
      throw new Error("heatmap payload contains duplicate station-hours");
    }
  }

  cell(day: string, hour: number): HeatmapCell | undefined {
    return this.byKey.get(cellKey(day, hour));
  }

  /** The class rendered for a cell: the payload's rag field, verbatim. */
  ragClass(day: string, hour: number): RagClass | undefined {
    return this.cell(day, hour)?.rag;
  }

  /** All rendered (key, class) pairs; used by the contract tests. */
  renderedClasses(): Map<string, RagClass> {
    const out = new Map<string, RagClass>();
    for (const cell of this.payload.cells) {
      const { day, hour } = splitHourIso(cell.hour);
      out.set(cellKey(day, hour), this.ragClass(day, hour) as RagClass);
    }
    return out;
  }
}
