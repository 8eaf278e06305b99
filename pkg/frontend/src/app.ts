/**
 * The explorer application: four views (upload, explore, chart, facts)
 * over the cube server's JSON API.
 *
 * All session state lives in an ExploreState that serializes into
 * location.hash, so a reload reproduces the same queries. Every number
 * shown in a table or chart comes straight out of an API response —
 * the client never aggregates. Server errors surface in the active
 * view's `.error-banner` without disturbing the current state.
 */

import type {
  AggregateJson,
  DatasetHandle,
  FactsJson,
  PlotKind,
  PlotSpecJson,
} from "./api";
import {
  ApiError,
  PLOT_KINDS,
  deleteDataset,
  getAggregate,
  getFacts,
  getPlotExport,
  getPlotSpec,
  listDatasets,
  uploadDataset,
} from "./api";
import type { ExploreState, ViewName } from "./state";
import {
  StateError,
  addDrilldown,
  addFilter,
  clearFilters,
  initialState,
  parseHash,
  removeDrilldown,
  removeFilter,
  setMeasure,
  stateToHash,
} from "./state";
import { LatestWins } from "./latest";
import { renderChart } from "./chart";

export const FACTS_PAGE_SIZE = 25;

const VIEW_TITLES: Record<ViewName, string> = {
  upload: "Upload",
  explore: "Explore",
  chart: "Chart",
  facts: "Facts",
};

export interface App {
  readonly state: ExploreState;
  readonly element: HTMLElement;
  /** Resolves once no tracked request is in flight. */
  whenIdle(): Promise<void>;
  dispose(): void;
}

/** Displayed numbers are the JSON values verbatim — no client math. */
function numberText(value: number): string {
  return String(value);
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.errorName}: ${error.detail}`;
  }
  if (error instanceof Error) {
    return error.message;
  }
  return String(error);
}

type Child = Node | string | null | undefined;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child !== null && child !== undefined) {
      node.append(child);
    }
  }
  return node;
}

function readFileText(file: Blob): Promise<string> {
  if (typeof file.text === "function") {
    return file.text();
  }
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.onerror = () => reject(reader.error ?? new Error("could not read file"));
    reader.readAsText(file);
  });
}

interface Cached<T> {
  key: string;
  data: T;
}

class Explorer implements App {
  state: ExploreState;
  readonly element: HTMLElement;

  private readonly win: Window;
  private handle: DatasetHandle | null = null;
  private datasets: DatasetHandle[] = [];

  private agg: Cached<AggregateJson> | null = null;
  private spec: Cached<PlotSpecJson> | null = null;
  private facts: Cached<FactsJson> | null = null;
  private filterValues: Cached<string[]> | null = null;
  private listKey: string | null = null;
  private listStamp = 0;
  private exportText: string | null = null;
  private filterColumnChoice: string | null = null;
  private errors: Partial<Record<ViewName, string>> = {};

  private readonly gateAgg = new LatestWins();
  private readonly gateSpec = new LatestWins();
  private readonly gateFacts = new LatestWins();
  private readonly gateValues = new LatestWins();
  private readonly gateList = new LatestWins();
  private pendingKeys: Record<string, string | null> = {};

  private inFlight = 0;
  private idleWaiters: (() => void)[] = [];
  private lastWrittenHash: string;
  private readonly onHashChange = (): void => this.handleHashChange();

  constructor(root: HTMLElement, win: Window) {
    this.element = root;
    this.win = win;
    this.state = parseHash(win.location.hash);
    this.normalize();
    this.lastWrittenHash = win.location.hash;
    win.addEventListener("hashchange", this.onHashChange);
    this.writeHash();
    this.render();
    this.sync();
  }

  dispose(): void {
    this.win.removeEventListener("hashchange", this.onHashChange);
    for (const gate of [
      this.gateAgg,
      this.gateSpec,
      this.gateFacts,
      this.gateValues,
      this.gateList,
    ]) {
      gate.cancel();
    }
  }

  async whenIdle(): Promise<void> {
    await Promise.resolve();
    while (this.inFlight > 0) {
      await new Promise<void>((resolve) => this.idleWaiters.push(resolve));
      await Promise.resolve();
    }
  }

  private track<T>(work: Promise<T>): Promise<T> {
    this.inFlight += 1;
    const settle = (): void => {
      this.inFlight -= 1;
      if (this.inFlight === 0) {
        const waiters = this.idleWaiters;
        this.idleWaiters = [];
        for (const wake of waiters) {
          wake();
        }
      }
    };
    work.then(settle, settle);
    return work;
  }

  // --- state transitions -----------------------------------------------

  private apply(change: (state: ExploreState) => ExploreState): void {
    try {
      this.state = change(this.state);
      delete this.errors[this.state.view];
    } catch (error) {
      if (error instanceof StateError) {
        this.errors[this.state.view] = error.message;
        this.render();
        return;
      }
      throw error;
    }
    this.normalize();
    this.writeHash();
    this.render();
    this.sync();
  }

  /** Fill defaults so the hash always describes a runnable query. */
  private normalize(): void {
    const state = this.state;
    if (!state.datasetId && state.view !== "upload") {
      state.view = "upload";
    }
    const handle = this.handle;
    if (!handle) {
      return;
    }
    const measures = handle.columns.filter((c) => c.kind === "measure");
    if (state.view === "explore" && !state.measure && measures.length > 0) {
      state.measure = measures[0].name;
    }
    if (state.view === "chart") {
      if (!state.chart.y && measures.length > 0) {
        state.chart.y = measures[0].name;
      }
      if (!state.chart.x) {
        const other = handle.columns.find((c) => c.name !== state.chart.y);
        if (other) {
          state.chart.x = other.name;
        }
      }
    }
    if (this.filterColumnChoice && !state.drilldowns.includes(this.filterColumnChoice)) {
      this.filterColumnChoice = null;
    }
    if (!this.filterColumnChoice && state.drilldowns.length > 0) {
      this.filterColumnChoice = state.drilldowns[0];
    }
  }

  private writeHash(): void {
    const hash = stateToHash(this.state);
    this.lastWrittenHash = hash;
    if (this.win.location.hash !== hash) {
      this.win.location.hash = hash;
    }
  }

  private handleHashChange(): void {
    const hash = this.win.location.hash;
    if (hash === this.lastWrittenHash) {
      return;
    }
    this.lastWrittenHash = hash;
    const next = parseHash(hash);
    if (next.datasetId !== this.state.datasetId) {
      this.handle = null;
      this.clearData();
    }
    this.state = next;
    this.normalize();
    this.render();
    this.sync();
  }

  private clearData(): void {
    this.agg = null;
    this.spec = null;
    this.facts = null;
    this.filterValues = null;
    this.exportText = null;
    this.filterColumnChoice = null;
    this.pendingKeys = {};
    this.errors = {};
  }

  // --- data fetching -----------------------------------------------------

  private sync(): void {
    const state = this.state;
    if (state.view === "upload") {
      this.syncDatasetList();
    }
    if (!state.datasetId) {
      return;
    }
    if (!this.handle) {
      this.resolveHandle(state.datasetId);
      return;
    }
    if (state.view === "explore") {
      this.syncAggregate();
      this.syncFilterValues();
    } else if (state.view === "chart") {
      this.syncChart();
    } else if (state.view === "facts") {
      this.syncFacts();
    }
  }

  private fetchInto<T>(
    slot: string,
    key: string,
    gate: LatestWins,
    view: ViewName,
    task: (signal: AbortSignal) => Promise<T>,
    store: (data: T) => void,
  ): void {
    if (this.pendingKeys[slot] === key) {
      return;
    }
    this.pendingKeys[slot] = key;
    void this.track(
      gate
        .run(task)
        .then((data) => {
          if (this.pendingKeys[slot] === key) {
            this.pendingKeys[slot] = null;
          }
          if (data === undefined) {
            return; // superseded by a newer request
          }
          store(data);
          delete this.errors[view];
          this.render();
        })
        .catch((error: unknown) => {
          if (this.pendingKeys[slot] === key) {
            this.pendingKeys[slot] = null;
          }
          this.errors[view] = describeError(error);
          this.render();
        }),
    );
  }

  private resolveHandle(datasetId: string): void {
    this.fetchInto(
      "handle",
      datasetId,
      this.gateList,
      this.state.view,
      () => listDatasets(),
      (handles) => {
        this.datasets = handles;
        this.listKey = `list:${this.listStamp}`;
        const found = handles.find((h) => h.id === datasetId);
        if (found) {
          this.handle = found;
          this.normalize();
          this.writeHash();
          this.sync();
        } else {
          this.state = initialState();
          this.errors.upload = `dataset ${datasetId} is no longer available`;
          this.writeHash();
        }
      },
    );
  }

  private syncDatasetList(): void {
    const key = `list:${this.listStamp}`;
    if (this.listKey === key) {
      return;
    }
    this.fetchInto("list", key, this.gateList, "upload", () => listDatasets(), (handles) => {
      this.datasets = handles;
      this.listKey = key;
    });
  }

  private aggregateKey(): string | null {
    const state = this.state;
    if (!state.datasetId || !state.measure) {
      return null;
    }
    return JSON.stringify([
      state.datasetId,
      state.measure,
      state.drilldowns,
      state.filters.map((f) => [f.column, f.value]),
      state.mode,
    ]);
  }

  private syncAggregate(): void {
    const state = this.state;
    const key = this.aggregateKey();
    if (!key || !state.datasetId || !state.measure) {
      return;
    }
    if (this.agg?.key === key) {
      return;
    }
    const datasetId = state.datasetId;
    const query = {
      measure: state.measure,
      drilldowns: [...state.drilldowns],
      filters: state.filters.map((f) => ({ ...f })),
      mode: state.mode,
    };
    this.fetchInto(
      "agg",
      key,
      this.gateAgg,
      "explore",
      (signal) => getAggregate(datasetId, query, signal),
      (data) => {
        this.agg = { key, data };
      },
    );
  }

  private syncFilterValues(): void {
    const state = this.state;
    const column = this.filterColumnChoice;
    if (!state.datasetId || !state.measure || !column) {
      return;
    }
    const key = JSON.stringify([state.datasetId, column, state.measure]);
    if (this.filterValues?.key === key) {
      return;
    }
    const datasetId = state.datasetId;
    const query = {
      measure: state.measure,
      drilldowns: [column],
      filters: [],
      mode: "serial" as const,
    };
    this.fetchInto(
      "values",
      key,
      this.gateValues,
      "explore",
      (signal) => getAggregate(datasetId, query, signal),
      (data) => {
        this.filterValues = { key, data: data.rows.map((row) => row.key[0]) };
      },
    );
  }

  private syncChart(): void {
    const state = this.state;
    const { x, y, kind, sorted } = state.chart;
    if (!state.datasetId || !x || !y) {
      return;
    }
    const key = JSON.stringify([
      state.datasetId,
      x,
      y,
      kind,
      sorted,
      state.filters.map((f) => [f.column, f.value]),
    ]);
    if (this.spec?.key === key) {
      return;
    }
    const datasetId = state.datasetId;
    const query = { x, y, kind, sorted, filters: state.filters.map((f) => ({ ...f })) };
    this.fetchInto(
      "spec",
      key,
      this.gateSpec,
      "chart",
      (signal) => getPlotSpec(datasetId, query, signal),
      (data) => {
        this.spec = { key, data };
      },
    );
  }

  private syncFacts(): void {
    const state = this.state;
    if (!state.datasetId) {
      return;
    }
    const key = JSON.stringify([state.datasetId, state.factsOffset]);
    if (this.facts?.key === key) {
      return;
    }
    const datasetId = state.datasetId;
    const offset = state.factsOffset;
    this.fetchInto(
      "facts",
      key,
      this.gateFacts,
      "facts",
      (signal) => getFacts(datasetId, offset, FACTS_PAGE_SIZE, signal),
      (data) => {
        this.facts = { key, data };
      },
    );
  }

  // --- user actions ------------------------------------------------------

  private handleUpload(input: HTMLInputElement): void {
    const file = input.files?.[0];
    if (!file) {
      return;
    }
    void this.track(
      (async () => {
        const text = await readFileText(file);
        return uploadDataset(text, file.name);
      })()
        .then((handle) => {
          this.handle = handle;
          this.clearData();
          this.listStamp += 1;
          this.state = { ...initialState(), view: "upload", datasetId: handle.id };
          this.normalize();
          this.writeHash();
          this.render();
          this.sync();
        })
        .catch((error: unknown) => {
          this.errors.upload = describeError(error);
          this.render();
        }),
    );
  }

  private openDataset(handle: DatasetHandle): void {
    this.handle = handle;
    this.clearData();
    this.state = { ...initialState(), view: "explore", datasetId: handle.id };
    this.normalize();
    this.writeHash();
    this.render();
    this.sync();
  }

  private removeDataset(id: string): void {
    void this.track(
      deleteDataset(id)
        .then(() => {
          this.listStamp += 1;
          this.listKey = null;
          if (this.state.datasetId === id) {
            this.handle = null;
            this.clearData();
            this.state = initialState();
            this.writeHash();
          }
          this.render();
          this.sync();
        })
        .catch((error: unknown) => {
          this.errors.upload = describeError(error);
          this.render();
        }),
    );
  }

  private requestExport(format: "svg" | "img-tag"): void {
    const state = this.state;
    const { x, y, kind, sorted } = state.chart;
    if (!state.datasetId || !x || !y) {
      return;
    }
    const query = { x, y, kind, sorted, filters: state.filters.map((f) => ({ ...f })) };
    void this.track(
      getPlotExport(state.datasetId, query, format)
        .then((text) => {
          this.exportText = text;
          delete this.errors.chart;
          this.render();
        })
        .catch((error: unknown) => {
          this.errors.chart = describeError(error);
          this.render();
        }),
    );
  }

  // --- rendering -----------------------------------------------------------

  private render(): void {
    const header = el("header", { class: "app-header" });
    const nav = el("nav", { class: "tabs" });
    for (const view of Object.keys(VIEW_TITLES) as ViewName[]) {
      const button = el(
        "button",
        {
          type: "button",
          class: view === this.state.view ? "tab active" : "tab",
          "data-view": view,
        },
        VIEW_TITLES[view],
      );
      if (view !== "upload" && !this.state.datasetId) {
        button.disabled = true;
      }
      button.addEventListener("click", () => {
        this.apply((s) => ({ ...s, view }));
      });
      nav.append(button);
    }
    header.append(nav);
    const label = this.handle
      ? `${this.handle.source_name} — ${numberText(this.handle.row_count)} rows`
      : "no dataset loaded";
    header.append(el("span", { class: "dataset-label" }, label));

    let view: HTMLElement;
    switch (this.state.view) {
      case "upload":
        view = this.uploadView();
        break;
      case "explore":
        view = this.exploreView();
        break;
      case "chart":
        view = this.chartView();
        break;
      default:
        view = this.factsView();
        break;
    }
    this.element.replaceChildren(header, view);
  }

  private banner(view: ViewName): HTMLElement {
    const message = this.errors[view];
    const div = el("div", { class: "error-banner", role: "alert" });
    if (message) {
      div.textContent = message;
    } else {
      div.hidden = true;
    }
    return div;
  }

  private uploadView(): HTMLElement {
    const input = el("input", {
      type: "file",
      accept: ".csv,text/csv",
      class: "file-input",
    });
    input.addEventListener("change", () => this.handleUpload(input));
    const section = el(
      "section",
      { class: "view view-upload" },
      this.banner("upload"),
      el("label", { class: "file-picker" }, "Upload a headered CSV file: ", input),
    );

    if (this.datasets.length > 0) {
      const list = el("ul", { class: "dataset-list" });
      for (const dataset of this.datasets) {
        const open = el("button", { type: "button", class: "open-dataset" }, "Open");
        open.addEventListener("click", () => this.openDataset(dataset));
        const remove = el("button", { type: "button", class: "delete-dataset" }, "Delete");
        remove.addEventListener("click", () => this.removeDataset(dataset.id));
        list.append(
          el(
            "li",
            {},
            el(
              "span",
              { class: "dataset-name" },
              `${dataset.source_name} (${numberText(dataset.row_count)} rows)`,
            ),
            " ",
            open,
            " ",
            remove,
          ),
        );
      }
      section.append(el("h3", {}, "Loaded datasets"), list);
    }

    if (this.handle) {
      section.append(this.schemaPanel(this.handle));
    }
    return section;
  }

  private schemaPanel(handle: DatasetHandle): HTMLElement {
    const panel = el("div", { class: "schema-panel" });
    panel.append(
      el(
        "h3",
        {},
        `${handle.source_name}: ${numberText(handle.row_count)} rows, ` +
          `${numberText(handle.columns.length)} columns`,
      ),
    );
    if (handle.row_count === 0) {
      panel.append(el("div", { class: "banner zero-rows" }, "0 rows — header only"));
    }
    const list = el("ul", { class: "schema-list" });
    for (const column of handle.columns) {
      list.append(
        el(
          "li",
          {},
          el("span", { class: "col-name" }, column.name),
          " ",
          el("span", { class: `badge badge-${column.kind}` }, column.kind),
          " ",
          el("span", { class: "value-type" }, column.value_type),
        ),
      );
    }
    panel.append(list);
    return panel;
  }

  private exploreView(): HTMLElement {
    const section = el("section", { class: "view view-explore" }, this.banner("explore"));
    const handle = this.handle;
    if (!handle) {
      section.append(el("p", { class: "note" }, "Loading dataset…"));
      return section;
    }
    const measures = handle.columns.filter((c) => c.kind === "measure");
    if (measures.length === 0) {
      section.append(
        el("p", { class: "note no-measures" }, "This dataset has no numeric measure columns."),
      );
      return section;
    }

    // measure + mode row
    const measureSelect = el("select", { class: "measure-select" });
    for (const column of measures) {
      const option = el("option", { value: column.name }, column.name);
      if (column.name === this.state.measure) {
        option.selected = true;
      }
      measureSelect.append(option);
    }
    measureSelect.addEventListener("change", () => {
      this.apply((s) => setMeasure(s, measureSelect.value));
    });

    const other = this.state.mode === "serial" ? "parallel" : "serial";
    const modeToggle = el(
      "button",
      { type: "button", class: "mode-toggle" },
      `switch to ${other}`,
    );
    modeToggle.addEventListener("click", () => {
      this.apply((s) => ({ ...s, mode: other }));
    });
    const elapsed = this.agg?.data.elapsed_seconds;
    section.append(
      el(
        "div",
        { class: "controls measure-row" },
        el("label", {}, "Measure ", measureSelect),
        el("span", { class: "mode-label" }, `mode: ${this.state.mode}`),
        modeToggle,
        el(
          "span",
          { class: "elapsed" },
          elapsed === undefined ? "" : `last query: ${elapsed.toFixed(6)} s`,
        ),
      ),
    );

    // drilldown chips
    const drillSelect = el("select", { class: "drill-add" });
    drillSelect.append(el("option", { value: "" }, "Add drill-down…"));
    for (const column of handle.columns) {
      if (column.name === this.state.measure || this.state.drilldowns.includes(column.name)) {
        continue;
      }
      drillSelect.append(el("option", { value: column.name }, column.name));
    }
    drillSelect.addEventListener("change", () => {
      const column = drillSelect.value;
      if (column) {
        this.apply((s) => addDrilldown(s, column));
      }
    });
    const drillChips = el("span", { class: "chips drill-chips" });
    for (const column of this.state.drilldowns) {
      const remove = el("button", { type: "button", class: "remove" }, "×");
      remove.addEventListener("click", () => {
        this.apply((s) => removeDrilldown(s, column));
      });
      drillChips.append(el("span", { class: "chip", "data-column": column }, column, remove));
    }
    section.append(
      el("div", { class: "controls drill-row" }, el("label", {}, "Drill-downs "), drillSelect, drillChips),
    );

    // filter controls
    section.append(this.filterControls());

    // aggregate table
    if (this.agg) {
      section.append(this.aggregateTable(this.agg.data));
    } else {
      section.append(el("p", { class: "note loading" }, "Running aggregate…"));
    }
    return section;
  }

  private filterControls(): HTMLElement {
    const row = el("div", { class: "controls filter-row" });
    if (this.state.drilldowns.length === 0) {
      row.append(el("span", { class: "note" }, "Drill down on a column to filter it."));
      return row;
    }
    const columnSelect = el("select", { class: "filter-column" });
    for (const column of this.state.drilldowns) {
      const option = el("option", { value: column }, column);
      if (column === this.filterColumnChoice) {
        option.selected = true;
      }
      columnSelect.append(option);
    }
    columnSelect.addEventListener("change", () => {
      this.filterColumnChoice = columnSelect.value;
      this.render();
      this.sync();
    });

    const valueSelect = el("select", { class: "filter-value" });
    const valuesKey = JSON.stringify([
      this.state.datasetId,
      this.filterColumnChoice,
      this.state.measure,
    ]);
    if (this.filterValues?.key === valuesKey) {
      for (const value of this.filterValues.data) {
        valueSelect.append(el("option", { value }, value === "" ? "(empty)" : value));
      }
    } else {
      valueSelect.append(el("option", { value: "" }, "loading values…"));
    }

    const freeInput = el("input", {
      type: "text",
      class: "filter-free",
      placeholder: "or type a value",
    });
    const addButton = el("button", { type: "button", class: "filter-add" }, "Add filter");
    addButton.addEventListener("click", () => {
      const column = columnSelect.value;
      const value = freeInput.value !== "" ? freeInput.value : valueSelect.value;
      this.apply((s) => addFilter(s, column, value));
    });
    const clearButton = el("button", { type: "button", class: "filter-clear" }, "Clear filters");
    clearButton.addEventListener("click", () => {
      this.apply((s) => clearFilters(s));
    });

    const filterChips = el("span", { class: "chips filter-chips" });
    for (const filter of this.state.filters) {
      const remove = el("button", { type: "button", class: "remove" }, "×");
      remove.addEventListener("click", () => {
        this.apply((s) => removeFilter(s, filter.column, filter.value));
      });
      filterChips.append(
        el(
          "span",
          { class: "chip", "data-column": filter.column, "data-value": filter.value },
          `${filter.column}: ${filter.value}`,
          remove,
        ),
      );
    }

    row.append(
      el("label", {}, "Filter "),
      columnSelect,
      valueSelect,
      freeInput,
      addButton,
      clearButton,
      filterChips,
    );
    return row;
  }

  private aggregateTable(data: AggregateJson): HTMLElement {
    const table = el("table", { class: "aggregate-table" });
    const headRow = el("tr", {});
    for (const name of data.drilldown_names) {
      headRow.append(el("th", { class: "col-drill" }, name));
    }
    headRow.append(el("th", { class: "col-sum" }, data.measure_name));
    headRow.append(el("th", { class: "col-count" }, "Records"));
    table.append(el("thead", {}, headRow));

    const body = el("tbody", {});
    for (const row of data.rows) {
      const tr = el("tr", { class: "data-row" });
      for (const part of row.key) {
        tr.append(el("td", { class: "cell-key" }, part));
      }
      tr.append(el("td", { class: "cell-sum" }, numberText(row.sum)));
      tr.append(el("td", { class: "cell-count" }, numberText(row.record_count)));
      body.append(tr);
    }
    const summary = el("tr", { class: "summary-row" });
    if (data.drilldown_names.length > 0) {
      summary.append(
        el(
          "td",
          { class: "cell-label", colspan: String(data.drilldown_names.length) },
          "Summary",
        ),
      );
    }
    summary.append(el("td", { class: "cell-sum" }, numberText(data.total_sum)));
    summary.append(el("td", { class: "cell-count" }, numberText(data.total_count)));
    body.append(summary);
    table.append(body);
    return table;
  }

  private chartView(): HTMLElement {
    const section = el("section", { class: "view view-chart" }, this.banner("chart"));
    const handle = this.handle;
    if (!handle) {
      section.append(el("p", { class: "note" }, "Loading dataset…"));
      return section;
    }
    const measures = handle.columns.filter((c) => c.kind === "measure");
    if (measures.length === 0) {
      section.append(
        el("p", { class: "note no-measures" }, "This dataset has no numeric measure columns."),
      );
      return section;
    }

    const xSelect = el("select", { class: "chart-x" });
    for (const column of handle.columns) {
      const option = el("option", { value: column.name }, column.name);
      if (column.name === this.state.chart.x) {
        option.selected = true;
      }
      xSelect.append(option);
    }
    xSelect.addEventListener("change", () => {
      this.apply((s) => ({ ...s, chart: { ...s.chart, x: xSelect.value } }));
    });

    const ySelect = el("select", { class: "chart-y" });
    for (const column of measures) {
      const option = el("option", { value: column.name }, column.name);
      if (column.name === this.state.chart.y) {
        option.selected = true;
      }
      ySelect.append(option);
    }
    ySelect.addEventListener("change", () => {
      this.apply((s) => ({ ...s, chart: { ...s.chart, y: ySelect.value } }));
    });

    const kindSelect = el("select", { class: "chart-kind" });
    for (const kind of PLOT_KINDS) {
      const option = el("option", { value: kind }, kind);
      if (kind === this.state.chart.kind) {
        option.selected = true;
      }
      kindSelect.append(option);
    }
    kindSelect.addEventListener("change", () => {
      this.apply((s) => ({
        ...s,
        chart: { ...s.chart, kind: kindSelect.value as PlotKind },
      }));
    });

    const sortedBox = el("input", { type: "checkbox", class: "chart-sorted" });
    sortedBox.checked = this.state.chart.sorted;
    sortedBox.addEventListener("change", () => {
      this.apply((s) => ({ ...s, chart: { ...s.chart, sorted: sortedBox.checked } }));
    });

    const exportSvg = el("button", { type: "button", class: "chart-export-svg" }, "Export SVG");
    exportSvg.addEventListener("click", () => this.requestExport("svg"));
    const exportImg = el(
      "button",
      { type: "button", class: "chart-export-img" },
      "Export img tag",
    );
    exportImg.addEventListener("click", () => this.requestExport("img-tag"));

    section.append(
      el(
        "div",
        { class: "controls chart-controls" },
        el("label", {}, "X ", xSelect),
        el("label", {}, "Y ", ySelect),
        el("label", {}, "Kind ", kindSelect),
        el("label", { class: "sorted-label" }, sortedBox, " sorted by x"),
        exportSvg,
        exportImg,
      ),
    );

    const host = el("div", { class: "chart-host" });
    if (this.spec) {
      host.append(renderChart(this.spec.data));
    } else {
      host.append(el("p", { class: "note loading" }, "Rendering chart…"));
    }
    section.append(host);

    if (this.exportText !== null) {
      const output = el("textarea", { class: "export-output", rows: "6" });
      output.readOnly = true;
      output.value = this.exportText;
      section.append(output);
    }
    return section;
  }

  private factsView(): HTMLElement {
    const section = el("section", { class: "view view-facts" }, this.banner("facts"));
    const data = this.facts?.data;
    if (!data) {
      section.append(el("p", { class: "note loading" }, "Loading rows…"));
      return section;
    }

    const table = el("table", { class: "facts-table" });
    const headRow = el("tr", {});
    for (const column of data.schema) {
      headRow.append(el("th", {}, column.name));
    }
    table.append(el("thead", {}, headRow));
    const body = el("tbody", {});
    for (const row of data.rows) {
      const tr = el("tr", {});
      for (const cell of row) {
        tr.append(el("td", { class: "cell-fact" }, cell));
      }
      body.append(tr);
    }
    table.append(body);
    section.append(table);

    const offset = this.state.factsOffset;
    const shown = data.rows.length;
    const status =
      data.total === 0
        ? "no rows"
        : `rows ${numberText(offset + 1)}–${numberText(offset + shown)} of ${numberText(data.total)}`;
    const prev = el("button", { type: "button", class: "prev" }, "Prev");
    prev.disabled = offset === 0;
    prev.addEventListener("click", () => {
      this.apply((s) => ({
        ...s,
        factsOffset: Math.max(0, s.factsOffset - FACTS_PAGE_SIZE),
      }));
    });
    const next = el("button", { type: "button", class: "next" }, "Next");
    next.disabled = offset + FACTS_PAGE_SIZE >= data.total;
    next.addEventListener("click", () => {
      this.apply((s) => ({ ...s, factsOffset: s.factsOffset + FACTS_PAGE_SIZE }));
    });
    section.append(
      el("div", { class: "pager" }, prev, el("span", { class: "pager-status" }, status), next),
    );
    return section;
  }
}

export function createApp(root: HTMLElement, win: Window = window): App {
  return new Explorer(root, win);
}
