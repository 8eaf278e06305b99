/**
 * Scripted UI tests over a fake fetch server: the full explore loop
 * (upload → drill → filter → chart), URL-state reload, and inline
 * error handling. Rendered numbers are compared against the JSON the
 * fake server actually served, cell for cell.
 */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { App } from "../src/app";
import { createApp, FACTS_PAGE_SIZE } from "../src/app";
import { configureApi } from "../src/api";
import { FakeServer, HEADER_ONLY_CSV, RAGGED_CSV, SMALL_CSV } from "./fakeServer";

let fake: FakeServer;
let root: HTMLElement;
let app: App;

beforeEach(() => {
  fake = new FakeServer();
  vi.stubGlobal("fetch", fake.fetch);
  configureApi("");
  window.location.hash = "";
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
});

afterEach(() => {
  app?.dispose();
  vi.unstubAllGlobals();
});

async function start(): Promise<void> {
  app = createApp(root, window);
  await app.whenIdle();
}

async function uploadCsv(text: string, name: string): Promise<void> {
  const input = root.querySelector<HTMLInputElement>(".file-input");
  expect(input).not.toBeNull();
  const file = new File([text], name, { type: "text/csv" });
  Object.defineProperty(input, "files", { value: [file], configurable: true });
  input?.dispatchEvent(new Event("change"));
  await app.whenIdle();
}

async function setSelect(selector: string, value: string): Promise<void> {
  const select = root.querySelector<HTMLSelectElement>(selector);
  expect(select, selector).not.toBeNull();
  select!.value = value;
  select!.dispatchEvent(new Event("change"));
  await app.whenIdle();
}

async function click(selector: string): Promise<void> {
  const button = root.querySelector<HTMLButtonElement>(selector);
  expect(button, selector).not.toBeNull();
  button!.click();
  await app.whenIdle();
}

function bannerText(): string {
  const banner = root.querySelector<HTMLElement>(".error-banner");
  return banner && !banner.hidden ? banner.textContent ?? "" : "";
}

function tableRows(): string[][] {
  return [...root.querySelectorAll<HTMLTableRowElement>(".aggregate-table tr.data-row")].map(
    (tr) => [...tr.cells].map((td) => td.textContent ?? ""),
  );
}

function summaryCells(): string[] {
  return [
    ...root.querySelectorAll<HTMLTableCellElement>(".aggregate-table tr.summary-row td"),
  ].map((td) => td.textContent ?? "");
}

function aggregateCallCount(): number {
  return fake.calls.filter((c) => c.path.includes("/aggregate?")).length;
}

describe("upload view", () => {
  it("shows the inferred schema with kind badges after an upload", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    expect(bannerText()).toBe("");
    const names = [...root.querySelectorAll(".schema-list .col-name")].map(
      (n) => n.textContent,
    );
    expect(names).toEqual(["Region", "Product", "Year", "Amount"]);
    const badges = [...root.querySelectorAll(".schema-list .badge")].map(
      (b) => b.textContent,
    );
    expect(badges).toEqual(["dimension", "dimension", "measure", "measure"]);
    expect(root.querySelector(".dataset-label")?.textContent).toBe("sales.csv — 5 rows");
  });

  it("announces a header-only file with a zero-rows banner", async () => {
    await start();
    await uploadCsv(HEADER_ONLY_CSV, "empty.csv");
    const banner = root.querySelector(".banner.zero-rows");
    expect(banner?.textContent).toContain("0 rows");
  });

  it("surfaces a ragged-file error inline without losing the loaded dataset", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    const before = app.state.datasetId;
    await uploadCsv(RAGGED_CSV, "bad.csv");
    expect(bannerText()).toContain("RaggedRow");
    expect(bannerText()).toContain("line 3");
    expect(app.state.datasetId).toBe(before);
    expect(root.querySelector(".schema-panel")).not.toBeNull();
    expect(root.querySelector(".dataset-label")?.textContent).toBe("sales.csv — 5 rows");
  });

  it("resets to an empty session when the open dataset is deleted", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click(".delete-dataset");
    expect(app.state.datasetId).toBeNull();
    expect(root.querySelector(".dataset-label")?.textContent).toBe("no dataset loaded");
    const explore = root.querySelector<HTMLButtonElement>('button[data-view="explore"]');
    expect(explore?.disabled).toBe(true);
  });

  it("recovers when the hash names a dataset the server no longer has", async () => {
    window.location.hash = "#view=explore&ds=ghost";
    await start();
    expect(app.state.datasetId).toBeNull();
    expect(app.state.view).toBe("upload");
    expect(bannerText()).toContain("no longer available");
  });
});

describe("explore loop", () => {
  it("uploads, drills three ways, filters, clears, charts — all on server numbers", async () => {
    await start();

    // 1. upload, then open the explore view
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click('button[data-view="explore"]');
    await setSelect(".measure-select", "Amount");

    // 2. three drilldowns, one at a time
    for (const column of ["Region", "Product", "Year"]) {
      await setSelect(".drill-add", column);
    }
    const chips = [...root.querySelectorAll(".drill-chips .chip")].map((c) =>
      c.getAttribute("data-column"),
    );
    expect(chips).toEqual(["Region", "Product", "Year"]);

    // the rendered table is exactly the server's JSON, cell for cell
    let served = fake.lastAggregate;
    expect(served).not.toBeNull();
    expect(served?.total_sum).toBe(45);
    expect(tableRows()).toEqual(
      served!.rows.map((row) => [...row.key, String(row.sum), String(row.record_count)]),
    );
    expect(summaryCells()).toEqual([
      "Summary",
      String(served!.total_sum),
      String(served!.total_count),
    ]);

    // 3. apply a filter picked from server-provided values
    const options = [
      ...root.querySelectorAll<HTMLOptionElement>(".filter-value option"),
    ].map((o) => o.value);
    expect(options).toEqual(["East", "West"]);
    await click(".filter-add");
    expect(app.state.filters).toEqual([{ column: "Region", value: "East" }]);
    served = fake.lastAggregate;
    expect(served?.total_sum).toBe(18);
    expect(served?.total_count).toBe(3);
    expect(tableRows()).toEqual(
      served!.rows.map((row) => [...row.key, String(row.sum), String(row.record_count)]),
    );
    expect(
      [...root.querySelectorAll(".filter-chips .chip")].map((c) =>
        c.getAttribute("data-value"),
      ),
    ).toEqual(["East"]);

    // 4. a reload (fresh app over the same URL) reproduces the same table
    const snapshotRows = tableRows();
    const snapshotSummary = summaryCells();
    const callsBefore = aggregateCallCount();
    app.dispose();
    app = createApp(root, window);
    await app.whenIdle();
    expect(app.state.drilldowns).toEqual(["Region", "Product", "Year"]);
    expect(app.state.filters).toEqual([{ column: "Region", value: "East" }]);
    expect(tableRows()).toEqual(snapshotRows);
    expect(summaryCells()).toEqual(snapshotSummary);
    expect(aggregateCallCount()).toBeGreaterThan(callsBefore); // re-fetched, not remembered

    // 5. clear the filter
    await click(".filter-clear");
    expect(app.state.filters).toEqual([]);
    expect(root.querySelectorAll(".filter-chips .chip")).toHaveLength(0);
    expect(summaryCells()).toEqual(["Summary", "45", "5"]);

    // 6. chart the aggregate, one mark per served point
    await click('button[data-view="chart"]');
    await setSelect(".chart-x", "Product");
    await setSelect(".chart-y", "Amount");
    const spec = fake.lastPlotSpec;
    expect(spec?.points).toEqual([
      ["Widget", 33],
      ["Gadget", 12],
    ]);
    const marks = root.querySelectorAll(".chart-host svg .mark");
    expect(marks).toHaveLength(spec!.points.length);
    const titles = [...root.querySelectorAll(".chart-host svg .mark title")].map(
      (t) => t.textContent,
    );
    expect(titles).toEqual(spec!.points.map(([x, y]) => `${x}: ${y}`));
  });

  it("removing a drilldown chip re-aggregates without it", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click('button[data-view="explore"]');
    await setSelect(".measure-select", "Amount");
    await setSelect(".drill-add", "Region");
    await setSelect(".drill-add", "Product");
    await click('.drill-chips .chip[data-column="Region"] .remove');
    expect(app.state.drilldowns).toEqual(["Product"]);
    const served = fake.lastAggregate;
    expect(served?.drilldown_names).toEqual(["Product"]);
    expect(tableRows()).toEqual(
      served!.rows.map((row) => [...row.key, String(row.sum), String(row.record_count)]),
    );
  });

  it("displays whatever the server sends, not a client-side recount", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    fake.tamperAggregate = (data) => ({ ...data, total_sum: 424242 });
    await click('button[data-view="explore"]');
    expect(summaryCells()[summaryCells().length - 2]).toBe("424242");
  });

  it("toggling modes re-queries and reports the server elapsed time", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click('button[data-view="explore"]');
    expect(root.querySelector(".elapsed")?.textContent).toBe("last query: 0.001234 s");
    await click(".mode-toggle");
    expect(app.state.mode).toBe("parallel");
    expect(root.querySelector(".mode-label")?.textContent).toBe("mode: parallel");
    expect(root.querySelector(".elapsed")?.textContent).toBe("last query: 0.000567 s");
    const modes = fake.calls
      .filter((c) => c.path.includes("/aggregate?"))
      .map((c) => new URL(c.path, "http://t").searchParams.get("mode"));
    expect(modes).toContain("parallel");
  });

  it("does not re-fetch an unchanged aggregate when switching views", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click('button[data-view="explore"]');
    const after = aggregateCallCount();
    await click('button[data-view="facts"]');
    await click('button[data-view="explore"]');
    expect(aggregateCallCount()).toBe(after);
  });
});

describe("chart exports", () => {
  it("fills the export box with server-rendered SVG and an img tag", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    await click('button[data-view="chart"]');
    await click(".chart-export-svg");
    let output = root.querySelector<HTMLTextAreaElement>(".export-output");
    expect(output?.value.startsWith("<svg")).toBe(true);
    expect(output?.value).toContain('class="mark"');
    await click(".chart-export-img");
    output = root.querySelector<HTMLTextAreaElement>(".export-output");
    expect(output?.value.startsWith('<img src="data:image/svg+xml;base64,')).toBe(true);
    const encoded = output!.value.split("base64,")[1].split('"')[0];
    expect(atob(encoded)).toContain('class="mark"');
  });
});

describe("facts view", () => {
  it("pages through rows with the server's total", async () => {
    const lines = ["Region,Amount"];
    for (let i = 0; i < 60; i += 1) {
      lines.push(`R${i % 4},${i + 1}`);
    }
    await start();
    await uploadCsv(lines.join("\n"), "big.csv");
    await click('button[data-view="facts"]');

    let cells = root.querySelectorAll(".facts-table td.cell-fact");
    expect(cells).toHaveLength(FACTS_PAGE_SIZE * 2);
    expect(root.querySelector(".pager-status")?.textContent).toBe("rows 1–25 of 60");
    expect(root.querySelector<HTMLButtonElement>(".pager .prev")?.disabled).toBe(true);

    await click(".pager .next");
    expect(app.state.factsOffset).toBe(FACTS_PAGE_SIZE);
    expect(root.querySelector(".pager-status")?.textContent).toBe("rows 26–50 of 60");
    const firstCell = root.querySelector(".facts-table td.cell-fact");
    expect(firstCell?.textContent).toBe(fake.lastFacts?.rows[0][0]);

    await click(".pager .next");
    expect(root.querySelector(".pager-status")?.textContent).toBe("rows 51–60 of 60");
    cells = root.querySelectorAll(".facts-table td.cell-fact");
    expect(cells).toHaveLength(10 * 2);
    expect(root.querySelector<HTMLButtonElement>(".pager .next")?.disabled).toBe(true);

    await click(".pager .prev");
    expect(root.querySelector(".pager-status")?.textContent).toBe("rows 26–50 of 60");
  });

  it("shows a stale out-of-range offset as an inline error, keeping state", async () => {
    await start();
    await uploadCsv(SMALL_CSV, "sales.csv");
    const id = app.state.datasetId as string;
    app.dispose();
    window.location.hash = `#view=facts&ds=${id}&offset=500`;
    app = createApp(root, window);
    await app.whenIdle();
    expect(bannerText()).toContain("OffsetOutOfRange");
    expect(app.state.view).toBe("facts");
    expect(app.state.factsOffset).toBe(500);
  });
});
