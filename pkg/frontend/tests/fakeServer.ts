/**
 * In-memory stand-in for the cube server, good enough for UI tests:
 * same endpoints, same JSON shapes, same error names, over a naive
 * group-by. Install with `vi.stubGlobal("fetch", fake.fetch)`.
 */

import type {
  AggregateJson,
  ColumnInfo,
  DatasetHandle,
  FactsJson,
  PlotSpecJson,
} from "../src/api";

type Cell = string | number;

interface StoredDataset {
  handle: DatasetHandle;
  rows: Cell[][];
}

function decodePart(text: string): string {
  return text.replace(/%3A/gi, ":").replace(/%7C/gi, "|").replace(/%25/g, "%");
}

function canonical(value: Cell): string {
  return String(value);
}

function splitPairs(cut: string): [string, string][] {
  return cut.split("|").map((part) => {
    const colon = part.indexOf(":");
    if (colon < 0) {
      throw new HttpError(400, "StateInvalid", `cut part "${part}" has no colon`);
    }
    return [decodePart(part.slice(0, colon)), decodePart(part.slice(colon + 1))];
  });
}

class HttpError extends Error {
  constructor(
    readonly status: number,
    readonly errorName: string,
    readonly detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

function inferColumn(name: string, index: number, cells: string[]): ColumnInfo {
  const isInt = cells.length > 0 && cells.every((c) => /^-?\d+$/.test(c.trim()));
  const isFloat =
    cells.length > 0 &&
    cells.every((c) => c.trim() !== "" && !Number.isNaN(Number(c)));
  if (isInt) {
    return { name, index, kind: "measure", value_type: "integer64" };
  }
  if (isFloat) {
    return { name, index, kind: "measure", value_type: "float64" };
  }
  return { name, index, kind: "dimension", value_type: "text" };
}

export class FakeServer {
  readonly datasets = new Map<string, StoredDataset>();
  readonly calls: { method: string; path: string }[] = [];
  /** Test hook: rewrite aggregate responses before they are sent. */
  tamperAggregate: ((data: AggregateJson) => AggregateJson) | null = null;
  lastAggregate: AggregateJson | null = null;
  lastPlotSpec: PlotSpecJson | null = null;
  lastFacts: FactsJson | null = null;
  private nextId = 1;

  readonly fetch = async (
    input: RequestInfo | URL,
    init?: RequestInit,
  ): Promise<Response> => {
    const url = new URL(String(input), "http://fake.test");
    const method = (init?.method ?? "GET").toUpperCase();
    this.calls.push({ method, path: url.pathname + url.search });
    try {
      return this.route(method, url, init);
    } catch (error) {
      if (error instanceof HttpError) {
        return jsonResponse(error.status, { error: error.errorName, detail: error.detail });
      }
      throw error;
    }
  };

  private route(method: string, url: URL, init?: RequestInit): Response {
    const parts = url.pathname.split("/").filter(Boolean); // ["api","datasets",...]
    if (parts[0] !== "api" || parts[1] !== "datasets") {
      throw new HttpError(404, "NotFound", url.pathname);
    }
    if (parts.length === 2 && method === "POST") {
      return this.upload(url, init);
    }
    if (parts.length === 2 && method === "GET") {
      return jsonResponse(
        200,
        [...this.datasets.values()].map((d) => d.handle),
      );
    }
    const dataset = this.datasets.get(parts[2]);
    if (!dataset) {
      throw new HttpError(404, "UnknownDataset", `no dataset with id ${parts[2]}`);
    }
    if (parts.length === 3 && method === "DELETE") {
      this.datasets.delete(parts[2]);
      return new Response(null, { status: 204 });
    }
    if (parts[3] === "facts" && method === "GET") {
      return this.facts(dataset, url);
    }
    if (parts[3] === "aggregate" && method === "GET") {
      return this.aggregate(dataset, url);
    }
    if (parts[3] === "plot" && method === "GET") {
      return this.plot(dataset, url);
    }
    throw new HttpError(404, "NotFound", url.pathname);
  }

  private upload(url: URL, init?: RequestInit): Response {
    const text = typeof init?.body === "string" ? init.body : "";
    if (text.trim() === "") {
      throw new HttpError(400, "EmptyInput", "no header row");
    }
    const lines = text.split(/\r?\n/).filter((line) => line !== "");
    const header = lines[0].split(",");
    const dataLines = lines.slice(1);
    const rawRows = dataLines.map((line, i) => {
      const cells = line.split(",");
      if (cells.length !== header.length) {
        throw new HttpError(
          400,
          "RaggedRow",
          `row on line ${i + 2} has ${cells.length} fields; expected ${header.length}`,
        );
      }
      return cells;
    });
    const columns = header.map((name, index) =>
      inferColumn(name, index, rawRows.map((r) => r[index])),
    );
    const rows: Cell[][] = rawRows.map((raw) =>
      raw.map((cell, index) =>
        columns[index].kind === "measure" ? Number(cell) : cell,
      ),
    );
    const id = `ds${this.nextId++}`;
    const handle: DatasetHandle = {
      id,
      source_name: url.searchParams.get("name") ?? "upload.csv",
      row_count: rows.length,
      columns,
    };
    this.datasets.set(id, { handle, rows });
    return jsonResponse(200, handle);
  }

  private columnIndex(dataset: StoredDataset, name: string): number {
    const column = dataset.handle.columns.find((c) => c.name === name);
    if (!column) {
      throw new HttpError(400, "UnknownColumn", `no column named "${name}"`);
    }
    return column.index;
  }

  private filteredRows(dataset: StoredDataset, pairs: [string, string][]): Cell[][] {
    return dataset.rows.filter((row) =>
      pairs.every(([column, value]) => {
        const index = this.columnIndex(dataset, column);
        return canonical(row[index]) === value;
      }),
    );
  }

  private aggregate(dataset: StoredDataset, url: URL): Response {
    const measure = url.searchParams.get("measure") ?? "";
    const measureIndex = this.columnIndex(dataset, measure);
    if (dataset.handle.columns[measureIndex].kind !== "measure") {
      throw new HttpError(400, "NotAMeasure", `"${measure}" is not numeric`);
    }
    const drilldowns = (url.searchParams.get("drilldown") ?? "")
      .split("|")
      .filter(Boolean)
      .map(decodePart);
    for (const name of drilldowns) {
      this.columnIndex(dataset, name);
      if (name === measure) {
        throw new HttpError(400, "ColumnInUse", `"${name}" is the measure`);
      }
    }
    const cut = url.searchParams.get("cut");
    const pairs = cut ? splitPairs(cut) : [];
    for (const [column] of pairs) {
      if (!drilldowns.includes(column)) {
        throw new HttpError(400, "NotDrilled", `"${column}" is not drilled down`);
      }
    }
    const rows = this.filteredRows(dataset, pairs);
    const indices = drilldowns.map((name) => this.columnIndex(dataset, name));
    const groups = new Map<string, { key: string[]; sum: number; record_count: number }>();
    let totalSum = 0;
    for (const row of rows) {
      const key = indices.map((i) => canonical(row[i]));
      const mapKey = JSON.stringify(key);
      let group = groups.get(mapKey);
      if (!group) {
        group = { key, sum: 0, record_count: 0 };
        groups.set(mapKey, group);
      }
      const value = row[measureIndex] as number;
      group.sum += value;
      group.record_count += 1;
      totalSum += value;
    }
    let data: AggregateJson = {
      drilldown_names: drilldowns,
      measure_name: measure,
      rows: drilldowns.length > 0 ? [...groups.values()] : [],
      total_sum: totalSum,
      total_count: rows.length,
      elapsed_seconds: url.searchParams.get("mode") === "parallel" ? 0.000567 : 0.001234,
    };
    if (this.tamperAggregate) {
      data = this.tamperAggregate(data);
    }
    this.lastAggregate = data;
    return jsonResponse(200, data);
  }

  private plot(dataset: StoredDataset, url: URL): Response {
    const x = url.searchParams.get("x") ?? "";
    const y = url.searchParams.get("y") ?? "";
    const xIndex = this.columnIndex(dataset, x);
    const yIndex = this.columnIndex(dataset, y);
    if (dataset.handle.columns[yIndex].kind !== "measure") {
      throw new HttpError(400, "NotAMeasure", `"${y}" is not numeric`);
    }
    if (x === y) {
      throw new HttpError(400, "NotDrilled", `x and y are both "${x}"`);
    }
    const cut = url.searchParams.get("cut");
    const pairs = cut ? splitPairs(cut) : [];
    const rows = this.filteredRows(dataset, pairs);
    const groups = new Map<string, { xValue: Cell; sum: number }>();
    for (const row of rows) {
      const key = canonical(row[xIndex]);
      let group = groups.get(key);
      if (!group) {
        group = { xValue: row[xIndex], sum: 0 };
        groups.set(key, group);
      }
      group.sum += row[yIndex] as number;
    }
    let points: [string | number, number][] = [...groups.values()].map((g) => [
      g.xValue,
      g.sum,
    ]);
    const sorted = url.searchParams.get("sorted") === "true";
    if (sorted) {
      points = [...points].sort((a, b) =>
        a[0] === b[0] ? 0 : a[0] < b[0] ? -1 : 1,
      );
    }
    const spec: PlotSpecJson = {
      kind: (url.searchParams.get("kind") ?? "bar") as PlotSpecJson["kind"],
      x_label: x,
      y_label: y,
      points,
      sorted,
    };
    this.lastPlotSpec = spec;
    const format = url.searchParams.get("format") ?? "spec";
    if (format === "spec") {
      return jsonResponse(200, spec);
    }
    const marks = points
      .map(() => `<circle class="mark" r="2"/>`)
      .join("");
    const svg = `<svg xmlns="http://www.w3.org/2000/svg">${marks}</svg>`;
    if (format === "svg") {
      return new Response(svg, {
        status: 200,
        headers: { "content-type": "image/svg+xml" },
      });
    }
    const encoded = btoa(svg);
    return new Response(`<img src="data:image/svg+xml;base64,${encoded}" alt="plot"/>`, {
      status: 200,
      headers: { "content-type": "text/html" },
    });
  }

  private facts(dataset: StoredDataset, url: URL): Response {
    const offset = Number(url.searchParams.get("offset") ?? "0");
    const limitRaw = url.searchParams.get("limit") ?? "100";
    const total = dataset.rows.length;
    if (!Number.isInteger(offset) || offset < 0 || offset > total) {
      throw new HttpError(
        400,
        "OffsetOutOfRange",
        `offset ${offset} out of range for ${total} rows`,
      );
    }
    const stop = limitRaw === "all" ? total : Math.min(offset + Number(limitRaw), total);
    const data: FactsJson = {
      schema: dataset.handle.columns,
      rows: dataset.rows.slice(offset, stop).map((row) => row.map(canonical)),
      total,
    };
    this.lastFacts = data;
    return jsonResponse(200, data);
  }
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export const SMALL_CSV = [
  "Region,Product,Year,Amount",
  "East,Widget,2020,10",
  "West,Widget,2021,20",
  "East,Gadget,2020,5",
  "West,Gadget,2021,7",
  "East,Widget,2021,3",
].join("\n");

export const RAGGED_CSV = ["a,b,c", "1,2,3", "4,5"].join("\n");

export const HEADER_ONLY_CSV = "Region,Amount\n";
