"""HTTP service: corpus management and SSE-streamed conversations."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ragtrace.errors import (
    ConversationNotFound,
    CorpusBusy,
    CorpusNotFound,
    CorpusNotReady,
    ProviderError,
    RagtraceError,
)
from ragtrace.service.engine import Engine
from ragtrace.service.events import ERROR_STAGE, sse_encode

_STATUS_BY_TYPE = [
    (CorpusNotFound, 404),
    (ConversationNotFound, 404),
    (CorpusBusy, 409),
    (CorpusNotReady, 409),
    (ProviderError, 502),
]


def _status_for(exc: RagtraceError) -> int:
    for cls, status in _STATUS_BY_TYPE:
        if isinstance(exc, cls):
            return status
    return 400


class CorpusCreate(BaseModel):
    name: str
    chunk_config: dict | None = None


class ConversationCreate(BaseModel):
    corpus_id: str
    retrieval_config: dict | None = None
    generation_config: dict | None = None


class MessageCreate(BaseModel):
    query: str


def create_app(engine: Engine, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ragtrace", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(RagtraceError)
    async def ragtrace_error_handler(request: Request, exc: RagtraceError):
        return JSONResponse(status_code=_status_for(exc),
                            content={"code": exc.code, "message": exc.message})

    # --- corpora -----------------------------------------------------------

    @app.post("/corpora", status_code=201)
    def create_corpus(body: CorpusCreate):
        return engine.create_corpus(body.name, body.chunk_config)

    @app.get("/corpora")
    def list_corpora():
        return engine.list_corpora()

    @app.get("/corpora/{corpus_id}")
    def get_corpus(corpus_id: str):
        return engine.get_corpus(corpus_id)

    @app.delete("/corpora/{corpus_id}", status_code=204)
    def delete_corpus(corpus_id: str):
        engine.delete_corpus(corpus_id)

    @app.post("/corpora/{corpus_id}/documents", status_code=201)
    def upload_documents(
        corpus_id: str,
        files: list[UploadFile] = File(...),
        publish_date: str | None = Form(default=None),
        title: str | None = Form(default=None),
        source_uri: str | None = Form(default=None),
    ):
        metadata = {}
        if publish_date:
            metadata["publish_date"] = publish_date
        if title:
            metadata["title"] = title
        if source_uri:
            metadata["source_uri"] = source_uri
        added = [
            engine.upload_document(corpus_id, f.filename or "upload.txt",
                                   f.file.read(), metadata)
            for f in files
        ]
        return {"documents": added}

    @app.post("/corpora/{corpus_id}/index")
    def build_index(corpus_id: str):
        return engine.build_index(corpus_id)

    @app.get("/corpora/{corpus_id}/chunks")
    def list_chunks(corpus_id: str):
        return {"chunks": engine.list_chunks(corpus_id)}

    # --- conversations -------------------------------------------------------

    @app.post("/conversations", status_code=201)
    def create_conversation(body: ConversationCreate):
        return engine.create_conversation(body.corpus_id, body.retrieval_config,
                                          body.generation_config)

    @app.get("/conversations/{conversation_id}")
    def get_conversation(conversation_id: str):
        return engine.get_conversation(conversation_id)

    @app.post("/conversations/{conversation_id}/messages")
    def post_message(conversation_id: str, body: MessageCreate, stream: bool = True):
        if stream:
            events = engine.handle_message(conversation_id, body.query)

            def sse_body():
                for event in events:
                    yield sse_encode(event)

            return StreamingResponse(sse_body(), media_type="text/event-stream")

        terminal = None
        for event in engine.handle_message(conversation_id, body.query):
            if event.stage in ("citation", ERROR_STAGE):
                terminal = event
        if terminal is None:
            return JSONResponse(status_code=500,
                                content={"code": "internal_error", "message": "no terminal event"})
        if terminal.stage == ERROR_STAGE:
            return JSONResponse(status_code=502, content=terminal.payload)
        return terminal.payload

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="studio")

    return app
