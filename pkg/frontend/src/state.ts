/**
 * Client-side exploration state and its URL round-trip.
 *
 * The whole session — dataset id, measure, drill-downs, filters, mode,
 * view, chart settings, facts offset — serializes into the location
 * hash, so reloading the page (or sharing the URL) reproduces the same
 * queries. There is no other session storage.
 *
 * Update helpers are pure and enforce the same invariants the server
 * does (filters only on drilled columns, the measure is never drilled,
 * no duplicates) so most mistakes are caught before a request is made.
 */

import type { FilterPair, PlotKind } from "./api";
import { PLOT_KINDS } from "./api";

export type ViewName = "upload" | "explore" | "chart" | "facts";

export interface ChartSettings {
  x: string | null;
  y: string | null;
  kind: PlotKind;
  sorted: boolean;
}

export interface ExploreState {
  view: ViewName;
  datasetId: string | null;
  measure: string | null;
  drilldowns: string[];
  filters: FilterPair[];
  mode: "serial" | "parallel";
  chart: ChartSettings;
  factsOffset: number;
}

export function initialState(): ExploreState {
  return {
    view: "upload",
    datasetId: null,
    measure: null,
    drilldowns: [],
    filters: [],
    mode: "serial",
    chart: { x: null, y: null, kind: "bar", sorted: false },
    factsOffset: 0,
  };
}

export class StateError extends Error {}

export function setMeasure(state: ExploreState, measure: string): ExploreState {
  if (state.drilldowns.includes(measure)) {
    throw new StateError(`"${measure}" is drilled down; remove it first`);
  }
  return { ...state, measure };
}

export function addDrilldown(state: ExploreState, column: string): ExploreState {
  if (column === state.measure) {
    throw new StateError(`"${column}" is the current measure`);
  }
  if (state.drilldowns.includes(column)) {
    throw new StateError(`"${column}" is already drilled down`);
  }
  return { ...state, drilldowns: [...state.drilldowns, column] };
}

export function removeDrilldown(state: ExploreState, column: string): ExploreState {
  if (!state.drilldowns.includes(column)) {
    throw new StateError(`"${column}" is not drilled down`);
  }
  return {
    ...state,
    drilldowns: state.drilldowns.filter((c) => c !== column),
    // Filters on a removed drill-down die with it, as on the server.
    filters: state.filters.filter((f) => f.column !== column),
  };
}

export function addFilter(state: ExploreState, column: string, value: string): ExploreState {
  if (!state.drilldowns.includes(column)) {
    throw new StateError(`filter needs "${column}" drilled down first`);
  }
  if (state.filters.some((f) => f.column === column && f.value === value)) {
    throw new StateError(`that filter is already active`);
  }
  return { ...state, filters: [...state.filters, { column, value }] };
}

export function removeFilter(state: ExploreState, column: string, value: string): ExploreState {
  const kept = state.filters.filter((f) => !(f.column === column && f.value === value));
  if (kept.length === state.filters.length) {
    throw new StateError(`no such filter`);
  }
  return { ...state, filters: kept };
}

export function clearFilters(state: ExploreState): ExploreState {
  return { ...state, filters: [] };
}

// --- URL round-trip ----------------------------------------------------------
// Pipe-joined lists reuse the cut escaping so column names containing
// "|" or ":" survive; URLSearchParams handles the rest.

function escapePart(text: string): string {
  return text.replace(/%/g, "%25").replace(/:/g, "%3A").replace(/\|/g, "%7C");
}

function unescapePart(text: string): string {
  return text.replace(/%7C/gi, "|").replace(/%3A/gi, ":").replace(/%25/g, "%");
}

const VIEWS: readonly ViewName[] = ["upload", "explore", "chart", "facts"];

export function stateToHash(state: ExploreState): string {
  const params = new URLSearchParams();
  params.set("view", state.view);
  if (state.datasetId) params.set("ds", state.datasetId);
  if (state.measure) params.set("measure", state.measure);
  if (state.drilldowns.length > 0) {
    params.set("drill", state.drilldowns.map(escapePart).join("|"));
  }
  if (state.filters.length > 0) {
    params.set(
      "cut",
      state.filters.map((f) => `${escapePart(f.column)}:${escapePart(f.value)}`).join("|"),
    );
  }
  if (state.mode !== "serial") params.set("mode", state.mode);
  if (state.chart.x) params.set("x", state.chart.x);
  if (state.chart.y) params.set("y", state.chart.y);
  if (state.chart.kind !== "bar") params.set("kind", state.chart.kind);
  if (state.chart.sorted) params.set("sorted", "1");
  if (state.factsOffset > 0) params.set("offset", String(state.factsOffset));
  return `#${params.toString()}`;
}

export function parseHash(hash: string): ExploreState {
  const state = initialState();
  const text = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!text) return state;
  const params = new URLSearchParams(text);

  const view = params.get("view");
  if (view && (VIEWS as readonly string[]).includes(view)) {
    state.view = view as ViewName;
  }
  state.datasetId = params.get("ds");
  state.measure = params.get("measure");

  const drill = params.get("drill");
  if (drill) {
    state.drilldowns = drill.split("|").map(unescapePart);
  }
  const cut = params.get("cut");
  if (cut) {
    state.filters = cut.split("|").flatMap((part) => {
      const colon = part.indexOf(":");
      if (colon < 0) return [];
      return [
        {
          column: unescapePart(part.slice(0, colon)),
          value: unescapePart(part.slice(colon + 1)),
        },
      ];
    });
  }
  if (params.get("mode") === "parallel") state.mode = "parallel";
  state.chart.x = params.get("x");
  state.chart.y = params.get("y");
  const kind = params.get("kind");
  if (kind && (PLOT_KINDS as readonly string[]).includes(kind)) {
    state.chart.kind = kind as PlotKind;
  }
  state.chart.sorted = params.get("sorted") === "1";
  const offset = Number(params.get("offset") ?? "0");
  state.factsOffset = Number.isInteger(offset) && offset > 0 ? offset : 0;
  return state;
}
