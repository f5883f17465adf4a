"""Local HTTP API for the review loop.

Serves the session queue, per-cell context, decision recording, live
metrics, and finalize.  Binds localhost by default; there is no
authentication, this is a desk tool for a single reviewer.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .alignment import parse_alignment_xml
from .evaluation import evaluate
from .review import Decision, ReviewError, ReviewSession, UnreviewedPolicy

__all__ = ["create_app"]

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>alignment review</title></head>
<body>
<h1>Alignment review service</h1>
<p>No UI bundle is installed. The JSON API lives under <code>/api/</code>:
session, queue, context/{cell_id}, decision, finalize, metrics.</p>
</body></html>
"""


def create_app(
    session: ReviewSession,
    output_path: str | Path = "validated-alignment.rdf",
    reference_path: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="ontoweave review service")
    output = Path(output_path)
    default_reference = Path(reference_path) if reference_path else None

    @app.get("/api/session")
    def get_session() -> dict:
        return session.stats()

    @app.get("/api/queue")
    def get_queue(offset: int = Query(0, ge=0), limit: int = Query(50, ge=1, le=500)) -> dict:
        from .review import _cell_view

        items = session.queue()
        page = items[offset : offset + limit]
        return {
            "total": len(items),
            "offset": offset,
            "limit": limit,
            "items": [_cell_view(c, session) for c in page],
        }

    @app.get("/api/context/{cell_id}")
    def get_context(cell_id: str) -> dict:
        try:
            return session.context(cell_id)
        except ReviewError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/api/decision")
    def post_decision(body: dict) -> dict:
        try:
            decision = Decision.from_dict(body)
            session.record_decision(decision)
        except (ReviewError, ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "ok": True,
            "effective": decision.to_dict(),
            "queue_size": len(session.queue()),
        }

    @app.post("/api/finalize")
    def post_finalize(body: dict | None = None) -> Response:
        policy_name = (body or {}).get("unreviewed_policy", "Keep")
        try:
            policy = UnreviewedPolicy(policy_name)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=f"unknown policy {policy_name!r}") from exc
        xml = session.finalize_xml(policy)
        output.write_text(xml, encoding="utf-8")
        return Response(content=xml, media_type="application/xml")

    @app.get("/api/metrics")
    def get_metrics(reference: str | None = None) -> JSONResponse:
        ref_path = Path(reference) if reference else default_reference
        if ref_path is None:
            raise HTTPException(status_code=400, detail="no reference alignment configured")
        if not ref_path.exists():
            raise HTTPException(status_code=404, detail=f"reference not found: {ref_path}")
        ref = parse_alignment_xml(ref_path.read_text("utf-8"))
        report = evaluate(session.finalize(UnreviewedPolicy.KEEP), ref)
        return JSONResponse(report.to_dict())

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app
