"""HTTP service hosting one analyzed piece and the browser viewer.

The bundle is analyzed once at startup and served as immutable canonical
bytes; every response carries a permissive CORS header for local
development.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import FileResponse, HTMLResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .bundle import FORMAT_VERSION

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>scorelens</title></head>
<body>
<h1>scorelens</h1>
<p>The viewer app is not built. Build it with:</p>
<pre>cd frontend && npm install && npm run build</pre>
<p>The analysis bundle is available at <a href="/api/bundle">/api/bundle</a>.</p>
</body></html>
"""


class HealthResponse(BaseModel):
    status: str
    formatVersion: int


def default_viewer_dir() -> Path:
    """frontend/ of a source checkout, next to the installed package."""
    return Path(__file__).resolve().parents[2] / "frontend"


def create_app(bundle_bytes: bytes, viewer_dir: Path | None = None) -> FastAPI:
    """App serving the bundle, a health check, and the static viewer.

    ``bundle_bytes`` must already be canonical; they are returned verbatim
    so concurrent readers always see identical bytes.
    """
    app = FastAPI(title="scorelens", docs_url=None, redoc_url=None,
                  openapi_url=None)
    viewer = viewer_dir if viewer_dir is not None else default_viewer_dir()
    index = viewer / "index.html"
    assets = viewer / "dist"

    @app.middleware("http")
    async def allow_cross_origin(request, call_next):
        response = await call_next(request)
        response.headers["Access-Control-Allow-Origin"] = "*"
        return response

    @app.get("/api/bundle")
    def get_bundle() -> Response:
        return Response(content=bundle_bytes, media_type="application/json")

    @app.get("/api/health")
    def get_health() -> HealthResponse:
        return HealthResponse(status="ok", formatVersion=FORMAT_VERSION)

    @app.get("/", response_class=HTMLResponse)
    def get_index():
        if index.is_file():
            return FileResponse(index, media_type="text/html")
        return HTMLResponse(_FALLBACK_PAGE)

    if assets.is_dir():
        app.mount("/static", StaticFiles(directory=assets), name="static")

    return app
