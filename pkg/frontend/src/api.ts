/**
 * Typed client for the cube server's JSON API.
 *
 * Every call goes through `request`, which turns the server's error
 * bodies ({"error": name, "detail": text}) into ApiError instances so
 * views can show the error name inline without losing their state.
 *
 * Cut strings follow the server's syntax: `col:value` pairs joined by
 * `|`, with `%`, `:` and `|` percent-encoded inside each part.
 */

export interface ColumnInfo {
  name: string;
  index: number;
  kind: "dimension" | "measure";
  value_type: "integer64" | "float64" | "text";
}

export interface DatasetHandle {
  id: string;
  source_name: string;
  row_count: number;
  columns: ColumnInfo[];
}

export interface AggregateRowJson {
  key: string[];
  sum: number;
  record_count: number;
}

export interface AggregateJson {
  drilldown_names: string[];
  measure_name: string;
  rows: AggregateRowJson[];
  total_sum: number;
  total_count: number;
  elapsed_seconds?: number;
}

export interface FactsJson {
  schema: ColumnInfo[];
  rows: string[][];
  total: number;
}

export const PLOT_KINDS = ["bar", "line", "line_marker", "scatter", "pie"] as const;
export type PlotKind = (typeof PLOT_KINDS)[number];

export interface PlotSpecJson {
  kind: PlotKind;
  x_label: string;
  y_label: string;
  points: [string | number | null, number][];
  sorted: boolean;
}

export interface FilterPair {
  column: string;
  value: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly errorName: string;
  readonly detail: string;

  constructor(status: number, errorName: string, detail: string) {
    super(`${errorName}: ${detail}`);
    this.status = status;
    this.errorName = errorName;
    this.detail = detail;
  }
}

let apiBase = "";

/** Point the client at a server (empty string = same origin). */
export function configureApi(base: string): void {
  apiBase = base.replace(/\/+$/, "");
}

export function encodeCutPart(text: string): string {
  return text.replace(/%/g, "%25").replace(/:/g, "%3A").replace(/\|/g, "%7C");
}

export function buildCut(filters: readonly FilterPair[]): string {
  return filters
    .map((f) => `${encodeCutPart(f.column)}:${encodeCutPart(f.value)}`)
    .join("|");
}

export function buildDrilldown(columns: readonly string[]): string {
  return columns.map(encodeCutPart).join("|");
}

async function request(path: string, init?: RequestInit): Promise<Response> {
  const response = await fetch(`${apiBase}${path}`, init);
  if (response.ok) {
    return response;
  }
  let errorName = `HTTP ${response.status}`;
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body?.error === "string") {
      errorName = body.error;
      detail = typeof body.detail === "string" ? body.detail : "";
    }
  } catch {
    // non-JSON error body; keep the status-line fallback
  }
  throw new ApiError(response.status, errorName, detail);
}

export async function uploadDataset(
  body: Blob | ArrayBuffer | string,
  name?: string,
): Promise<DatasetHandle> {
  const query = name ? `?name=${encodeURIComponent(name)}` : "";
  const response = await request(`/api/datasets${query}`, {
    method: "POST",
    body,
  });
  return response.json();
}

export async function listDatasets(): Promise<DatasetHandle[]> {
  const response = await request("/api/datasets");
  return response.json();
}

export async function deleteDataset(id: string): Promise<void> {
  await request(`/api/datasets/${encodeURIComponent(id)}`, { method: "DELETE" });
}

export async function getFacts(
  id: string,
  offset: number,
  limit: number | "all",
  signal?: AbortSignal,
): Promise<FactsJson> {
  const params = new URLSearchParams({ offset: String(offset), limit: String(limit) });
  const response = await request(
    `/api/datasets/${encodeURIComponent(id)}/facts?${params}`,
    { signal },
  );
  return response.json();
}

export interface AggregateQuery {
  measure: string;
  drilldowns: readonly string[];
  filters: readonly FilterPair[];
  mode: "serial" | "parallel";
}

export async function getAggregate(
  id: string,
  query: AggregateQuery,
  signal?: AbortSignal,
): Promise<AggregateJson> {
  const params = new URLSearchParams({ measure: query.measure, mode: query.mode });
  if (query.drilldowns.length > 0) {
    params.set("drilldown", buildDrilldown(query.drilldowns));
  }
  if (query.filters.length > 0) {
    params.set("cut", buildCut(query.filters));
  }
  const response = await request(
    `/api/datasets/${encodeURIComponent(id)}/aggregate?${params}`,
    { signal },
  );
  return response.json();
}

export interface PlotQuery {
  x: string;
  y: string;
  kind: PlotKind;
  sorted: boolean;
  filters: readonly FilterPair[];
}

function plotParams(query: PlotQuery, format: "spec" | "svg" | "img-tag"): URLSearchParams {
  const params = new URLSearchParams({
    x: query.x,
    y: query.y,
    kind: query.kind,
    sorted: String(query.sorted),
    format,
  });
  if (query.filters.length > 0) {
    params.set("cut", buildCut(query.filters));
  }
  return params;
}

export async function getPlotSpec(
  id: string,
  query: PlotQuery,
  signal?: AbortSignal,
): Promise<PlotSpecJson> {
  const response = await request(
    `/api/datasets/${encodeURIComponent(id)}/plot?${plotParams(query, "spec")}`,
    { signal },
  );
  return response.json();
}

/** Server-rendered exports: raw SVG text or a ready-to-paste img tag. */
export async function getPlotExport(
  id: string,
  query: PlotQuery,
  format: "svg" | "img-tag",
): Promise<string> {
  const response = await request(
    `/api/datasets/${encodeURIComponent(id)}/plot?${plotParams(query, format)}`,
  );
  return response.text();
}
