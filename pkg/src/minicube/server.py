"""HTTP API: dataset upload, fact paging, aggregation, and plots.

Queries are stateless — every aggregate/plot request carries the full
query description (measure, drill-downs, cuts) in its parameters, so
there are no server-side sessions and any response can be reproduced
from its URL alone.  Uploaded cubes live in memory and die with the
process.

Cut syntax: ``cut=col:value|col:value``.  Each ``col``/``value`` part is
percent-encoded (escape ``:`` as ``%3A``, ``|`` as ``%7C``, ``%`` as
``%25``) and the first ``:`` separates the pair.  For plots, cut columns
(and a measure-typed x column) are drilled down implicitly, since a cut
is only valid against a drilled column.

Engine errors map to HTTP 400 (404 for unknown dataset ids) with a body
``{"error": <error name>, "detail": <message>}``.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass
from typing import Literal
from urllib.parse import unquote

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import state as qs
from .cube import Cube
from .engine import SERIAL, ExecMode, evaluate, fact_table
from .errors import CubeError, StateInvalid, UnknownDataset
from .ingest import load_csv
from .plot import SVG_MEDIA_TYPE, build_plot, html_img_tag, plot_spec_to_json, render_image
from .serialize import aggregate_to_json, facts_to_json, schema_to_json

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 4680
DEFAULT_MAX_UPLOAD = 256 * 1024 * 1024


@dataclass(frozen=True)
class ServerConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    workers: int | str = "auto"
    cors_origin: str | None = None
    ui_dir: str | None = None


class _Registry:
    """The one mutable structure: id -> cube, guarded by a lock."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cubes: dict[str, Cube] = {}

    def add(self, cube: Cube) -> str:
        with self._lock:
            while True:
                token = secrets.token_urlsafe(8)
                if token not in self._cubes:
                    break
            self._cubes[token] = cube
            return token

    def get(self, dataset_id: str) -> Cube:
        with self._lock:
            cube = self._cubes.get(dataset_id)
        if cube is None:
            raise UnknownDataset(f"no dataset {dataset_id!r}")
        return cube

    def remove(self, dataset_id: str) -> None:
        with self._lock:
            if self._cubes.pop(dataset_id, None) is None:
                raise UnknownDataset(f"no dataset {dataset_id!r}")

    def items(self) -> list[tuple[str, Cube]]:
        with self._lock:
            return list(self._cubes.items())


def _handle_json(dataset_id: str, cube: Cube) -> dict:
    return {
        "id": dataset_id,
        "source_name": cube.source_name,
        "row_count": cube.row_count,
        "columns": schema_to_json(cube.schema),
    }


def _parse_cut(raw: str | None) -> list[tuple[str, str]]:
    """Decode ``col:value|col:value`` into (column, value) pairs."""
    if not raw:
        return []
    pairs: list[tuple[str, str]] = []
    for part in raw.split("|"):
        if ":" not in part:
            raise StateInvalid(f"cut part {part!r} is not of the form col:value")
        col, _, value = part.partition(":")
        pairs.append((unquote(col), unquote(value)))
    return pairs


def _parse_drilldowns(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [unquote(part) for part in raw.split("|")]


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="minicube", docs_url=None, redoc_url=None)
    registry = _Registry()
    app.state.registry = registry
    app.state.config = config

    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(CubeError)
    async def _cube_error(_request: Request, exc: CubeError) -> JSONResponse:
        status = 404 if isinstance(exc, UnknownDataset) else 400
        return JSONResponse(
            status_code=status, content={"error": exc.name, "detail": str(exc)}
        )

    @app.post("/api/datasets", status_code=201)
    async def upload(request: Request, name: str | None = None) -> JSONResponse:
        content_type = request.headers.get("content-type", "")
        filename: str | None = None
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload_file = next(
                (v for v in form.values() if hasattr(v, "read")), None
            )
            if upload_file is None:
                raise StateInvalid("multipart body contains no file field")
            body = await upload_file.read()
            filename = getattr(upload_file, "filename", None)
        else:
            body = await request.body()
        if len(body) > config.max_upload_bytes:
            return JSONResponse(
                status_code=413,
                content={
                    "error": "UploadTooLarge",
                    "detail": f"body exceeds {config.max_upload_bytes} bytes",
                },
            )
        source_name = name or filename or "upload.csv"
        cube = load_csv(body, source_name=source_name)
        dataset_id = registry.add(cube)
        return JSONResponse(status_code=201, content=_handle_json(dataset_id, cube))

    @app.get("/api/datasets")
    def list_datasets() -> list[dict]:
        return [_handle_json(i, c) for i, c in registry.items()]

    @app.delete("/api/datasets/{dataset_id}", status_code=204)
    def delete_dataset(dataset_id: str) -> Response:
        registry.remove(dataset_id)
        return Response(status_code=204)

    @app.get("/api/datasets/{dataset_id}/facts")
    def get_facts(dataset_id: str, offset: int = 0, limit: str = "100") -> dict:
        cube = registry.get(dataset_id)
        if limit == "all":
            parsed_limit: int | str = "all"
        else:
            try:
                parsed_limit = int(limit)
            except ValueError:
                raise StateInvalid(f"limit must be an integer or 'all', got {limit!r}")
        try:
            schema, rows, total = fact_table(cube, offset, parsed_limit)
        except ValueError as exc:
            raise StateInvalid(str(exc))
        return facts_to_json(schema, rows, total)

    def _build_state(
        cube: Cube, measure: str, drilldowns: list[str], cuts: list[tuple[str, str]]
    ) -> qs.QueryState:
        state = qs.new_state(cube, measure)
        for column in drilldowns:
            state = qs.drilldown_add(cube, state, column)
        for column, value in cuts:
            state = qs.filter_add(state, column, value)
        return state

    @app.get("/api/datasets/{dataset_id}/aggregate")
    def get_aggregate(
        dataset_id: str,
        measure: str | None = None,
        drilldown: str | None = None,
        cut: str | None = None,
        mode: Literal["serial", "parallel"] = "serial",
    ) -> dict:
        cube = registry.get(dataset_id)
        if measure is None:
            raise StateInvalid("measure parameter is required")
        state = _build_state(cube, measure, _parse_drilldowns(drilldown), _parse_cut(cut))
        exec_mode = SERIAL if mode == "serial" else ExecMode(parallel=True, workers=config.workers)
        t0 = time.perf_counter()
        table = evaluate(cube, state, exec_mode)
        elapsed = time.perf_counter() - t0
        return aggregate_to_json(table, elapsed_seconds=elapsed)

    @app.get("/api/datasets/{dataset_id}/plot")
    def get_plot(
        dataset_id: str,
        x: str | None = None,
        y: str | None = None,
        kind: Literal["bar", "line", "line_marker", "scatter", "pie"] = "bar",
        sorted: bool = False,
        cut: str | None = None,
        format: Literal["spec", "svg", "img-tag"] = "spec",
    ) -> Response:
        cube = registry.get(dataset_id)
        if x is None or y is None:
            raise StateInvalid("x and y parameters are required")
        cuts = _parse_cut(cut)
        # Cuts require their columns drilled; a measure-typed x does too.
        drill: list[str] = []
        for column, _value in cuts:
            if column not in drill:
                drill.append(column)
        if x not in drill and x != y:
            meta = cube.column_by_name(x)
            if meta.kind == "measure":
                drill.append(x)
        state = _build_state(cube, y, drill, cuts)
        spec = build_plot(cube, state, x, y, kind, sort=sorted)
        if format == "spec":
            return JSONResponse(content=plot_spec_to_json(spec))
        image = render_image(spec)
        if format == "svg":
            return Response(content=image, media_type=SVG_MEDIA_TYPE)
        return Response(content=html_img_tag(image, SVG_MEDIA_TYPE), media_type="text/html")

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def run_server(config: ServerConfig | None = None) -> None:
    """Blocking: serve until interrupted."""
    import uvicorn

    config = config or ServerConfig()
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
