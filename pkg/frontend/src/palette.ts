// Colour semantics for the RAG classes, with a colour-blind-safe alternative
// (Okabe-Ito hues). The class names themselves always come from the API.

import type { RagClass } from "./types";

export type PaletteName = "standard" | "colorblind";

export const PALETTES: Record<PaletteName, Record<RagClass, string>> = {
  standard: {
    GREEN: "#2e7d32",
    AMBER: "#f9a825",
    RED: "#c62828",
  },
  colorblind: {
    GREEN: "#009e73",
    AMBER: "#f0e442",
    RED: "#d55e00",
  },
};

export function colorFor(palette: PaletteName, rag: RagClass): string {
  return PALETTES[palette][rag];
}

export function togglePalette(current: PaletteName): PaletteName {
  return current === "standard" ? "colorblind" : "standard";
}
