"""HTTP front end for a document store.

Routes:
  GET  /docs                 registry listing
  GET  /docs/{id}            canonical XML payload, revision in X-Revision
  PUT  /docs/{id}?kind=K     create/replace at revision 0 (body optional)
  POST /docs/{id}/edits      {op, args, base_revision} -> {revision}
  GET  /docs/{id}/validate   violation report for the stored graph

Stale base revisions answer 409 and editor rejections answer 422, both
with a {code, detail} body, so clients can resync or surface the error.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse

from .core import AgError
from .store import (
    RevisionConflictError,
    Store,
    UnknownDocumentError,
)


class BindFailureError(AgError):
    code = "bind-failure"


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "detail": detail})


def create_app(store: Store) -> FastAPI:
    # The interactive-docs routes are disabled so /docs stays ours.
    app = FastAPI(docs_url=None, redoc_url=None, openapi_url=None)

    @app.get("/docs")
    def list_docs():
        return [
            {"doc_id": r.doc_id, "kind": r.kind, "revision": r.revision}
            for r in store.list_documents()
        ]

    @app.get("/docs/{doc_id}")
    def get_doc(doc_id: str):
        try:
            record = store.load_document(doc_id)
        except UnknownDocumentError:
            raise HTTPException(404, doc_id) from None
        return Response(
            content=record.payload,
            media_type="application/xml",
            headers={"X-Revision": str(record.revision)},
        )

    @app.put("/docs/{doc_id}", status_code=201)
    async def put_doc(doc_id: str, kind: str, request: Request):
        body = await request.body()
        try:
            record = store.create_document(doc_id, kind, body or None)
        except AgError as exc:
            return _error(422, exc.code, str(exc))
        return {"doc_id": record.doc_id, "kind": record.kind, "revision": 0}

    @app.post("/docs/{doc_id}/edits")
    async def post_edit(doc_id: str, request: Request):
        try:
            command = await request.json()
        except Exception:
            return _error(422, "bad-args", "body must be JSON")
        if not isinstance(command, dict):
            return _error(422, "bad-args", "body must be an object")
        op = command.get("op")
        base = command.get("base_revision")
        args = command.get("args", {})
        if not isinstance(op, str):
            return _error(422, "bad-args", "op must be a string")
        if isinstance(base, bool) or not isinstance(base, int):
            return _error(422, "bad-args", "base_revision must be an integer")
        if not isinstance(args, dict):
            return _error(422, "bad-args", "args must be an object")
        if "selection" in command:
            args = {"selection": command["selection"], **args}
        try:
            revision = store.apply_edit(doc_id, op, args, base)
        except UnknownDocumentError:
            raise HTTPException(404, doc_id) from None
        except RevisionConflictError as exc:
            return _error(409, exc.code, str(exc))
        except AgError as exc:
            return _error(422, exc.code, str(exc))
        return {"revision": revision}

    @app.get("/docs/{doc_id}/validate")
    def validate_doc(doc_id: str):
        try:
            report = store.validate_document(doc_id)
        except UnknownDocumentError:
            raise HTTPException(404, doc_id) from None
        except AgError as exc:
            return _error(422, exc.code, str(exc))
        return [
            {"code": v.code, "ids": list(v.ids), "detail": v.detail} for v in report
        ]

    return app


def serve(store: Store, bind: str = "127.0.0.1:8000") -> None:
    """Run the service until interrupted; ``bind`` is host:port."""
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    host = host or "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError:
        raise BindFailureError(f"bad bind address {bind!r}") from None
    try:
        uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
    except OSError as exc:
        raise BindFailureError(str(exc)) from exc
