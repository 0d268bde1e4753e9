// UI contract: the rendered class of every cell is the API's rag field,
// verbatim, and the grid dimensions reflect the payload cell count.
// Fixtures are recorded payloads from a live service run.

import { describe, expect, it } from "vitest";
import { HeatmapView, cellKey } from "../src/heatmap";
import type { HeatmapPayload, WhatIfResponse } from "../src/types";
import heatmapFixture from "./fixtures/heatmap.json";
import mixedFixture from "./fixtures/whatif_mixed.json";

const baseline = heatmapFixture as HeatmapPayload;
const mixed = (mixedFixture as WhatIfResponse).heatmap;

describe("heatmap view model", () => {
  it("renders every cell with the payload rag class verbatim", () => {
    for (const payload of [baseline, mixed]) {
      const view = new HeatmapView(payload);
      const rendered = view.renderedClasses();
      expect(rendered.size).toBe(payload.cells.length);
      for (const cell of payload.cells) {
        const key = cellKey(cell.hour.slice(0, 10), Number(cell.hour.slice(11, 13)));
        expect(rendered.get(key)).toBe(cell.rag);
      }
    }
  });

  it("covers all three classes across the recorded payloads", () => {
    const classes = new Set([...baseline.cells, ...mixed.cells].map((c) => c.rag));
    expect(classes.has("GREEN")).toBe(true);
    expect(classes.has("AMBER")).toBe(true);
  });

  it("grid dimensions match the payload cell count", () => {
    const view = new HeatmapView(baseline);
    expect(view.grid.cellCount).toBe(baseline.cells.length);
    expect(view.grid.days.length * view.grid.hours.length).toBe(baseline.cells.length);
    expect(view.grid.days).toEqual([...view.grid.days].sort());
  });

  it("passes capacity numbers through untouched (no client arithmetic)", () => {
    // deliberately inconsistent numbers: if the client recomputed anything,
    // the lookup would not return them byte-for-byte
    const tampered: HeatmapPayload = {
      station: "KGX",
      cells: [{ hour: "2025-01-02T06:00:00", yhat: 1.5, c_p: 99.0, c_s: 1.0, c_total: 3.0, rag: "RED" }],
    };
    const view = new HeatmapView(tampered);
    const cell = view.cell("2025-01-02", 6)!;
    expect(cell.c_total).toBe(3.0);
    expect(cell.rag).toBe("RED"); // even though yhat < c_p in the tampered payload
  });

  it("rejects duplicate station-hours", () => {
    const dup: HeatmapPayload = {
      station: "KGX",
      cells: [baseline.cells[0], baseline.cells[0]],
    };
    expect(() => new HeatmapView(dup)).toThrow(/duplicate/);
  });

  it("recorded payload satisfies the service cell schema", () => {
    for (const cell of baseline.cells) {
      expect(Object.keys(cell).sort()).toEqual(["c_p", "c_s", "c_total", "hour", "rag", "yhat"]);
      expect(cell.c_total).toBeCloseTo(cell.c_p + cell.c_s, 9);
      expect(["GREEN", "AMBER", "RED"]).toContain(cell.rag);
    }
  });
});
