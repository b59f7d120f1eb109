"""HTTP face of the engine: POST /AGDISTIS plus GET /health.

The request body is form-encoded with the two mandatory fields ``text``
and ``type``; tuning parameters may be overridden per request through
query parameters.  Responses are JSON arrays with a stable key order, so
identical requests produce byte-identical bodies.
"""

from __future__ import annotations

import json
from urllib.parse import parse_qsl

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .config import REQUEST_KEYS, ServiceConfig, apply_overrides
from .errors import CorruptBundle, InvalidValue, UnbalancedTag, VersionMismatch
from .indexing import IndexBundle, load_bundle
from .linker import REQUEST_TYPES, annotate_text


class BundleHolder:
    """Single shared bundle reference; empty while (re)loading."""

    def __init__(self, bundle: IndexBundle | None = None):
        self._bundle = bundle

    def get(self) -> IndexBundle | None:
        return self._bundle

    def swap(self, bundle: IndexBundle | None) -> None:
        self._bundle = bundle


def _error(status: int, code: str, detail: str = "") -> Response:
    body = {"error": code}
    if detail:
        body["detail"] = detail
    return Response(
        content=json.dumps(body, ensure_ascii=False),
        status_code=status,
        media_type="application/json",
    )


def create_app(holder: BundleHolder, config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="kblinker", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.holder = holder
    app.state.config = config

    @app.post("/AGDISTIS")
    async def handle_link(request: Request) -> Response:
        bundle = holder.get()
        if bundle is None:
            return _error(503, "BundleUnavailable", "index bundle is reloading")

        body = await request.body()
        if len(body) > config.max_request_bytes:
            return _error(413, "RequestTooLarge", f"limit {config.max_request_bytes} bytes")
        try:
            form = dict(parse_qsl(body.decode("utf-8"), keep_blank_values=True))
        except UnicodeDecodeError:
            return _error(400, "InvalidEncoding", "body must be UTF-8")

        if "text" not in form:
            return _error(400, "MissingParameter", "text")
        if "type" not in form:
            return _error(400, "MissingParameter", "type")
        request_type = form["type"]
        if request_type not in REQUEST_TYPES:
            return _error(400, "InvalidType", request_type)

        try:
            cfg = apply_overrides(config.linker, dict(request.query_params), REQUEST_KEYS)
        except InvalidValue as exc:
            return _error(400, "InvalidValue", str(exc))

        try:
            payload = annotate_text(form["text"], request_type, bundle, cfg)
        except UnbalancedTag as exc:
            return _error(400, "UnbalancedTag", str(exc))
        except (CorruptBundle, VersionMismatch) as exc:
            return _error(500, "BundleError", str(exc))
        return Response(content=payload.encode("utf-8"), media_type="application/json")

    @app.get("/health")
    async def health() -> Response:
        bundle = holder.get()
        if bundle is None:
            return _error(503, "BundleUnavailable", "index bundle is reloading")
        meta = bundle.meta
        body = {
            "language": meta.language,
            "kbName": meta.kb_name,
            "entityCount": meta.entity_count,
            "formatVersion": meta.format_version,
        }
        return Response(
            content=json.dumps(body, ensure_ascii=False),
            media_type="application/json",
        )

    return app


def app_for_bundle_dir(bundle_dir: str, config: ServiceConfig) -> FastAPI:
    holder = BundleHolder(load_bundle(bundle_dir))
    return create_app(holder, config)
