"""Command line interface: the no-UI path through the full pipeline.

    ragtrace corpus create --name notes
    ragtrace corpus add <corpus-id> doc1.md doc2.md --publish-date 2025-02-18
    ragtrace corpus build <corpus-id>
    ragtrace corpus list
    ragtrace index build <corpus-id>
    ragtrace index inspect <corpus-id>
    ragtrace ask --corpus <corpus-id> "How does climate change affect corals?"
    ragtrace serve --port 8000
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ragtrace.errors import RagtraceError
from ragtrace.service.config import build_providers, load_config
from ragtrace.service.engine import Engine
from ragtrace.service.events import ERROR_STAGE


def _engine(args) -> Engine:
    config = load_config(args.config)
    if args.data_dir:
        config.data_dir = args.data_dir
    return Engine(config, build_providers(config))


def _cmd_corpus_create(args) -> int:
    engine = _engine(args)
    chunk_config = {}
    if args.strategy:
        chunk_config["strategy"] = args.strategy
    if args.target_size is not None:
        chunk_config["target_size"] = args.target_size
    if args.overlap is not None:
        chunk_config["overlap"] = args.overlap
    if args.percentile is not None:
        chunk_config["breakpoint_percentile"] = args.percentile
    meta = engine.create_corpus(args.name, chunk_config or None)
    print(f"created corpus {meta['id']} ({meta['name']})")
    return 0


def _cmd_corpus_add(args) -> int:
    engine = _engine(args)
    metadata = {}
    if args.publish_date:
        metadata["publish_date"] = args.publish_date
    for file_path in args.files:
        path = Path(file_path)
        added = engine.upload_document(args.corpus, path.name, path.read_bytes(), metadata)
        print(f"added {added['id'][:12]}  {added['title']}")
    return 0


def _cmd_corpus_build(args) -> int:
    engine = _engine(args)
    meta = engine.build_index(args.corpus)
    print(f"corpus {meta['id']} ready: {meta.get('chunk_count', 0)} chunks "
          f"over {meta['doc_count']} documents")
    return 0


def _cmd_corpus_list(args) -> int:
    engine = _engine(args)
    corpora = engine.list_corpora()
    if not corpora:
        print("no corpora")
        return 0
    for meta in corpora:
        print(f"{meta['id']}  {meta['index_state']:<9} docs={meta['doc_count']:<4} {meta['name']}")
    return 0


def _cmd_index_inspect(args) -> int:
    engine = _engine(args)
    meta = engine.get_corpus(args.corpus)
    print(f"corpus {meta['id']} ({meta['name']})")
    print(f"  state: {meta['index_state']}")
    print(f"  documents: {meta['doc_count']}")
    if meta["index_state"] != "ready":
        return 0
    loaded = engine._loaded(args.corpus)
    sparse = loaded["sparse"]
    print(f"  chunks: {sparse.N}")
    print(f"  terms: {len(sparse.postings)}")
    print(f"  avg chunk length: {sparse.avg_doc_length:.1f} tokens")
    if loaded["dense"] is not None:
        print(f"  dense vectors: {len(loaded['dense'].ids)} x {loaded['dense'].dims}")
    return 0


def _print_answer(payload: dict) -> None:
    if payload.get("summary"):
        print(payload["summary"])
        print()
    for section in payload["sections"]:
        if section["heading"]:
            print(f"** {section['heading']} **")
        for sentence in section["sentences"]:
            labels = "".join(f"[{c['group']}]" for c in sentence["citations"])
            marker = " (unsupported)" if sentence["unsupported"] else ""
            print(f"  - {sentence['text']} {labels}{marker}".rstrip())
        print()
    if payload["groups"]:
        print("Sources:")
        for group in payload["groups"]:
            published = f"  published {group['publish_date']}" if group["publish_date"] else ""
            print(f"  [{group['id']}] {group['title']}  ({group['source_uri']}){published}")
    if payload["cross_references"]:
        refs = ", ".join(f"[{r['from_group']}]~[{r['to_group']}]"
                         for r in payload["cross_references"])
        print(f"Cross-references: {refs}")


def _cmd_ask(args) -> int:
    engine = _engine(args)
    conv = engine.create_conversation(args.corpus)
    terminal = None
    for event in engine.handle_message(conv["id"], args.query):
        if event.stage == ERROR_STAGE:
            print(f"error: {event.payload['code']}: {event.payload['message']}",
                  file=sys.stderr)
            return 1
        if event.stage == "citation":
            terminal = event
        elif args.verbose and event.stage != "generation":
            print(f"[{event.stage}]", json.dumps(event.payload)[:200], file=sys.stderr)
    if terminal is None:
        print("error: no answer produced", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(terminal.payload["answer"], ensure_ascii=False, indent=2))
    else:
        _print_answer(terminal.payload["answer"])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from ragtrace.service.app import create_app

    config = load_config(args.config)
    if args.data_dir:
        config.data_dir = args.data_dir
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    engine = Engine(config, build_providers(config))
    static = Path(args.static) if args.static else None
    uvicorn.run(create_app(engine, static_dir=static), host=config.host, port=config.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ragtrace",
                                     description="attribution-first RAG engine")
    parser.add_argument("--config", default=None, help="path to YAML config")
    parser.add_argument("--data-dir", default=None, help="override data directory")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="manage corpora")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)

    create = corpus_sub.add_parser("create")
    create.add_argument("--name", required=True)
    create.add_argument("--strategy", choices=("semantic", "fixed"))
    create.add_argument("--target-size", type=int, dest="target_size")
    create.add_argument("--overlap", type=int)
    create.add_argument("--percentile", type=float)
    create.set_defaults(func=_cmd_corpus_create)

    add = corpus_sub.add_parser("add")
    add.add_argument("corpus")
    add.add_argument("files", nargs="+")
    add.add_argument("--publish-date", dest="publish_date")
    add.set_defaults(func=_cmd_corpus_add)

    build = corpus_sub.add_parser("build")
    build.add_argument("corpus")
    build.set_defaults(func=_cmd_corpus_build)

    lst = corpus_sub.add_parser("list")
    lst.set_defaults(func=_cmd_corpus_list)

    index = sub.add_parser("index", help="build or inspect indexes")
    index_sub = index.add_subparsers(dest="subcommand", required=True)
    index_build = index_sub.add_parser("build")
    index_build.add_argument("corpus")
    index_build.set_defaults(func=_cmd_corpus_build)
    inspect = index_sub.add_parser("inspect")
    inspect.add_argument("corpus")
    inspect.set_defaults(func=_cmd_index_inspect)

    ask = sub.add_parser("ask", help="ask a question against a corpus")
    ask.add_argument("query")
    ask.add_argument("--corpus", required=True)
    ask.add_argument("--json", action="store_true")
    ask.add_argument("--verbose", action="store_true")
    ask.set_defaults(func=_cmd_ask)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--static", help="directory of studio assets to serve")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RagtraceError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
