// DOM wiring for the planner console. All numbers and classes displayed
// come from API payloads through the pure view models; failures surface as
// a non-blocking banner and the last good view stays on screen.

import { ApiClient, ApiError } from "./api";
import { HeatmapView } from "./heatmap";
import { colorFor, PaletteName, togglePalette } from "./palette";
import type { HeatmapCell, RagClass } from "./types";
import { WhatIfSession } from "./whatif";

const RAG_ORDER: RagClass[] = ["GREEN", "AMBER", "RED"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class PlannerApp {
  private readonly client: ApiClient;
  private session: WhatIfSession | null = null;
  private palette: PaletteName = "standard";
  private selectedHour: string | null = null;

  constructor(private readonly root: HTMLElement, baseUrl = "") {
    this.client = new ApiClient(baseUrl);
  }

  async start(): Promise<void> {
    this.root.innerHTML = "";
    this.root.append(this.buildChrome());
    try {
      const stations = await this.client.stations();
      const select = this.root.querySelector<HTMLSelectElement>("#station")!;
      for (const code of stations) {
        const option = el("option", undefined, code);
        option.value = code;
        select.append(option);
      }
      if (stations.length > 0) await this.loadStation();
    } catch (err) {
      this.showError(err);
    }
  }

  private buildChrome(): HTMLElement {
    const wrap = el("div", "planner");
    wrap.innerHTML = `
      <header>
        <h1>Assistance planning console</h1>
        <label>Station <select id="station"></select></label>
        <label>Days <input id="days" type="number" min="1" max="60" value="14"></label>
        <button id="load">Load</button>
        <button id="palette">Colour-blind palette</button>
        <div id="banner" class="banner hidden"></div>
      </header>
      <main>
        <section id="grid-section">
          <div id="legend"></div>
          <div id="grid"></div>
        </section>
        <aside>
          <section id="detail"><h2>Cell detail</h2><p class="muted">Click a cell.</p></section>
          <section id="whatif">
            <h2>What-if roster changes</h2>
            <div class="delta-form">
              <input id="delta-hour" placeholder="hour (from a selected cell)" readonly>
              <select id="delta-role">
                <option>PSA</option><option>SCSC</option><option>SCSA</option>
                <option>SSA</option><option>IC</option><option>DTL</option>
              </select>
              <input id="delta-change" type="number" value="1" step="1">
              <button id="delta-add">Add</button>
            </div>
            <ul id="pending"></ul>
            <button id="apply">Apply</button>
            <button id="reset">Reset to baseline</button>
            <div id="diff-summary" class="muted"></div>
          </section>
        </aside>
      </main>`;
    wrap.querySelector("#load")!.addEventListener("click", () => void this.loadStation());
    wrap.querySelector("#palette")!.addEventListener("click", () => {
      this.palette = togglePalette(this.palette);
      this.renderGrid();
    });
    wrap.querySelector("#delta-add")!.addEventListener("click", () => this.addPendingDelta());
    wrap.querySelector("#apply")!.addEventListener("click", () => void this.applyDeltas());
    wrap.querySelector("#reset")!.addEventListener("click", () => {
      this.session?.reset();
      this.renderAll();
    });
    return wrap;
  }

  private query<T extends HTMLElement>(selector: string): T {
    return this.root.querySelector<T>(selector)!;
  }

  private async loadStation(): Promise<void> {
    const station = this.query<HTMLSelectElement>("#station").value;
    const days = Number(this.query<HTMLInputElement>("#days").value) || undefined;
    const session = new WhatIfSession(this.client, station, days);
    try {
      await session.loadBaseline();
      this.session = session;
      this.selectedHour = null;
      this.hideError();
      this.renderAll();
    } catch (err) {
      this.showError(err); // last good view stays rendered
    }
  }

  private async applyDeltas(): Promise<void> {
    if (!this.session) return;
    const started = performance.now();
    try {
      const diff = await this.session.apply();
      this.hideError();
      this.renderAll();
      const ms = Math.round(performance.now() - started);
      this.query("#diff-summary").textContent =
        `${diff.length} cell${diff.length === 1 ? "" : "s"} changed class (${ms} ms)`;
    } catch (err) {
      this.showError(err); // view unchanged on 422
    }
  }

  private addPendingDelta(): void {
    if (!this.session) return;
    const hour = this.query<HTMLInputElement>("#delta-hour").value;
    const role = this.query<HTMLSelectElement>("#delta-role").value;
    const change = Number(this.query<HTMLInputElement>("#delta-change").value);
    try {
      if (!hour) throw new Error("select a cell to pick the hour");
      this.session.addDelta({ hour, role, change });
      this.renderPending();
    } catch (err) {
      this.showError(err);
    }
  }

  private renderAll(): void {
    this.renderGrid();
    this.renderPending();
    this.renderDetail();
    const diff = this.session?.diff ?? [];
    this.query("#diff-summary").textContent =
      diff.length > 0 ? `${diff.length} cells changed class` : "";
  }

  private renderGrid(): void {
    const container = this.query("#grid");
    const payload = this.session?.view;
    if (!payload) return;
    const view = new HeatmapView(payload);
    const changed = this.session!.changedHours;

    const table = el("table", "heatmap");
    const head = el("tr");
    head.append(el("th"));
    for (const day of view.grid.days) head.append(el("th", undefined, day.slice(5)));
    table.append(head);

    for (const hour of view.grid.hours) {
      const row = el("tr");
      row.append(el("th", undefined, `${String(hour).padStart(2, "0")}:00`));
      for (const day of view.grid.days) {
        const cell = view.cell(day, hour);
        const td = el("td", "cell");
        if (cell) {
          td.style.background = colorFor(this.palette, cell.rag);
          td.title = `${cell.hour}: ${cell.rag}`;
          if (changed.has(cell.hour)) td.classList.add("diff");
          if (cell.hour === this.selectedHour) td.classList.add("selected");
          td.addEventListener("click", () => {
            this.selectedHour = cell.hour;
            this.query<HTMLInputElement>("#delta-hour").value = cell.hour;
            this.renderGrid();
            this.renderDetail();
          });
        } else {
          td.classList.add("empty");
        }
        row.append(td);
      }
      table.append(row);
    }
    container.replaceChildren(table);

    const legend = this.query("#legend");
    legend.replaceChildren(
      ...RAG_ORDER.map((rag) => {
        const item = el("span", "legend-item", rag);
        item.style.setProperty("--swatch", colorFor(this.palette, rag));
        return item;
      }),
    );
  }

  private renderDetail(): void {
    const panel = this.query("#detail");
    const payload = this.session?.view;
    if (!payload || !this.selectedHour) return;
    const cell = payload.cells.find((c: HeatmapCell) => c.hour === this.selectedHour);
    if (!cell) return;
    panel.innerHTML = `
      <h2>Cell detail</h2>
      <table class="detail">
        <tr><th>Hour</th><td>${cell.hour}</td></tr>
        <tr><th>Forecast</th><td>${cell.yhat.toFixed(2)}</td></tr>
        <tr><th>Primary capacity</th><td>${cell.c_p.toFixed(2)}</td></tr>
        <tr><th>Secondary capacity</th><td>${cell.c_s.toFixed(2)}</td></tr>
        <tr><th>Total capacity</th><td>${cell.c_total.toFixed(2)}</td></tr>
        <tr><th>Class</th><td>${cell.rag}</td></tr>
      </table>`;
  }

  private renderPending(): void {
    const list = this.query("#pending");
    list.replaceChildren();
    const session = this.session;
    if (!session) return;
    session.pending.forEach((delta, index) => {
      const item = el("li", undefined,
        `${delta.hour} ${delta.role} ${delta.change > 0 ? "+" : ""}${delta.change} `);
      const remove = el("button", "remove", "x");
      remove.addEventListener("click", () => {
        session.removeDelta(index);
        this.renderPending();
      });
      item.append(remove);
      list.append(item);
    });
  }

  private showError(err: unknown): void {
    const banner = this.query("#banner");
    const message =
      err instanceof ApiError ? `Service error ${err.status}: ${err.message}` : String(err);
    banner.textContent = message;
    banner.classList.remove("hidden");
  }

  private hideError(): void {
    this.query("#banner").classList.add("hidden");
  }
}

export function mount(selector = "#app", baseUrl = ""): PlannerApp {
  const root = document.querySelector<HTMLElement>(selector);
  if (!root) throw new Error(`no mount point ${selector}`);
  const app = new PlannerApp(root, baseUrl);
  void app.start();
  return app;
}
