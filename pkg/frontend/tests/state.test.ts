import { describe, expect, it } from "vitest";

import type { ExploreState } from "../src/state";
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
} from "../src/state";

function snapshot(state: ExploreState): ExploreState {
  return JSON.parse(JSON.stringify(state)) as ExploreState;
}

describe("state transitions", () => {
  it("sets and changes the measure", () => {
    let state = initialState();
    state = setMeasure(state, "Amount");
    expect(state.measure).toBe("Amount");
    state = setMeasure(state, "Count");
    expect(state.measure).toBe("Count");
  });

  it("refuses a measure that is currently drilled down", () => {
    let state = setMeasure(initialState(), "Amount");
    state = addDrilldown(state, "Year");
    expect(() => setMeasure(state, "Year")).toThrow(StateError);
  });

  it("refuses drilling the measure or a duplicate", () => {
    let state = setMeasure(initialState(), "Amount");
    state = addDrilldown(state, "Region");
    expect(() => addDrilldown(state, "Amount")).toThrow(StateError);
    expect(() => addDrilldown(state, "Region")).toThrow(/already/);
  });

  it("keeps drilldown order as added", () => {
    let state = initialState();
    for (const column of ["C", "A", "B"]) {
      state = addDrilldown(state, column);
    }
    expect(state.drilldowns).toEqual(["C", "A", "B"]);
  });

  it("requires a drilldown before filtering it", () => {
    const state = initialState();
    expect(() => addFilter(state, "Region", "East")).toThrow(/drilled down first/);
  });

  it("rejects a duplicate filter but allows two values on one column", () => {
    let state = addDrilldown(initialState(), "Region");
    state = addFilter(state, "Region", "East");
    expect(() => addFilter(state, "Region", "East")).toThrow(StateError);
    state = addFilter(state, "Region", "West");
    expect(state.filters).toHaveLength(2);
  });

  it("drops a column's filters when its drilldown is removed", () => {
    let state = addDrilldown(initialState(), "Region");
    state = addDrilldown(state, "Year");
    state = addFilter(state, "Region", "East");
    state = addFilter(state, "Year", "2020");
    state = removeDrilldown(state, "Region");
    expect(state.drilldowns).toEqual(["Year"]);
    expect(state.filters).toEqual([{ column: "Year", value: "2020" }]);
  });

  it("removes a single filter and clears them all", () => {
    let state = addDrilldown(initialState(), "Region");
    state = addFilter(state, "Region", "East");
    state = addFilter(state, "Region", "West");
    state = removeFilter(state, "Region", "East");
    expect(state.filters).toEqual([{ column: "Region", value: "West" }]);
    expect(() => removeFilter(state, "Region", "East")).toThrow(StateError);
    state = clearFilters(state);
    expect(state.filters).toEqual([]);
  });

  it("never mutates its input", () => {
    const state = addDrilldown(setMeasure(initialState(), "Amount"), "Region");
    const before = snapshot(state);
    setMeasure(state, "Other");
    addDrilldown(state, "Year");
    addFilter(state, "Region", "East");
    removeDrilldown(state, "Region");
    clearFilters(state);
    expect(state).toEqual(before);
  });
});

describe("URL hash round-trip", () => {
  it("serializes the default state minimally", () => {
    expect(stateToHash(initialState())).toBe("#view=upload");
    expect(parseHash("")).toEqual(initialState());
    expect(parseHash("#view=upload")).toEqual(initialState());
  });

  it("round-trips a fully loaded state with hostile column names", () => {
    const state: ExploreState = {
      view: "chart",
      datasetId: "ds9",
      measure: "Amount (US$-Millions)",
      drilldowns: ["Weird|Name", "Col:On", "Plain"],
      filters: [
        { column: "Weird|Name", value: "50%|x:y" },
        { column: "Col:On", value: "" },
      ],
      mode: "parallel",
      chart: { x: "Col:On", y: "Amount (US$-Millions)", kind: "pie", sorted: true },
      factsOffset: 75,
    };
    expect(parseHash(stateToHash(state))).toEqual(state);
  });

  it("round-trips each view name", () => {
    for (const view of ["upload", "explore", "chart", "facts"] as const) {
      const state = { ...initialState(), view };
      expect(parseHash(stateToHash(state)).view).toBe(view);
    }
  });

  it("falls back to defaults on nonsense values", () => {
    const state = parseHash("#view=bogus&kind=donut&offset=-4&mode=quantum");
    expect(state.view).toBe("upload");
    expect(state.chart.kind).toBe("bar");
    expect(state.factsOffset).toBe(0);
    expect(state.mode).toBe("serial");
  });

  it("skips malformed cut parts instead of failing", () => {
    const state = parseHash("#view=explore&ds=d1&cut=nocolon|Region:East");
    expect(state.filters).toEqual([{ column: "Region", value: "East" }]);
  });

  it("ignores a fractional or non-numeric offset", () => {
    expect(parseHash("#offset=2.5").factsOffset).toBe(0);
    expect(parseHash("#offset=ten").factsOffset).toBe(0);
    expect(parseHash("#offset=50").factsOffset).toBe(50);
  });
});
