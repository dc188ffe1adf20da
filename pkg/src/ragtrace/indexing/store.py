"""Persist and load indexes.

On-disk layout is a directory holding ``manifest.json`` (format version,
type, counts, per-file sha256 checksums) plus one payload file per index:
sparse postings as UTF-8 JSON, dense vectors as raw little-endian float64.
``load(persist(x))`` is query-equivalent to ``x``.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ragtrace.errors import CorruptIndex, IoFailure, VersionMismatch
from ragtrace.indexing.dense import DenseIndex
from ragtrace.indexing.sparse import SparseIndex

FORMAT_VERSION = 1
MANIFEST = "manifest.json"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(directory: Path, index_type: str, count: int, files: list[str]) -> None:
    manifest = {
        "format_version": FORMAT_VERSION,
        "type": index_type,
        "count": count,
        "files": {name: _sha256(directory / name) for name in files},
    }
    (directory / MANIFEST).write_text(json.dumps(manifest, indent=2), encoding="utf-8")


def persist(index: SparseIndex | DenseIndex, path: str | Path) -> None:
    directory = Path(path)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        if isinstance(index, SparseIndex):
            payload = {
                "k1": index.k1,
                "b": index.b,
                "avg_doc_length": index.avg_doc_length,
                "N": index.N,
                "doc_lengths": index.doc_lengths,
                "postings": {t: [[cid, tf] for cid, tf in plist]
                             for t, plist in index.postings.items()},
            }
            (directory / "sparse.json").write_text(
                json.dumps(payload, ensure_ascii=False), encoding="utf-8")
            _write_manifest(directory, "sparse", index.N, ["sparse.json"])
        elif isinstance(index, DenseIndex):
            (directory / "dense.ids.json").write_text(
                json.dumps(index.ids, ensure_ascii=False), encoding="utf-8")
            matrix = np.ascontiguousarray(index.matrix, dtype="<f8")
            (directory / "dense.vectors.bin").write_bytes(matrix.tobytes())
            (directory / "dense.meta.json").write_text(
                json.dumps({"dims": index.dims, "count": len(index.ids),
                            "metric": index.metric}), encoding="utf-8")
            _write_manifest(directory, "dense", len(index.ids),
                            ["dense.ids.json", "dense.vectors.bin", "dense.meta.json"])
        else:
            raise TypeError(f"cannot persist {type(index).__name__}")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load(path: str | Path) -> SparseIndex | DenseIndex:
    directory = Path(path)
    manifest_path = directory / MANIFEST
    if not manifest_path.is_file():
        raise IoFailure(f"no index manifest at {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptIndex(f"unreadable manifest: {exc}") from exc
    if manifest.get("format_version") != FORMAT_VERSION:
        raise VersionMismatch(f"unsupported index format: {manifest.get('format_version')!r}")

    for name, expected in manifest.get("files", {}).items():
        file_path = directory / name
        if not file_path.is_file():
            raise CorruptIndex(f"missing index file: {name}")
        if _sha256(file_path) != expected:
            raise CorruptIndex(f"checksum mismatch: {name}")

    try:
        if manifest["type"] == "sparse":
            payload = json.loads((directory / "sparse.json").read_text(encoding="utf-8"))
            return SparseIndex(
                postings={t: [(cid, tf) for cid, tf in plist]
                          for t, plist in payload["postings"].items()},
                doc_lengths=payload["doc_lengths"],
                avg_doc_length=payload["avg_doc_length"],
                N=payload["N"],
                k1=payload["k1"],
                b=payload["b"],
            )
        if manifest["type"] == "dense":
            meta = json.loads((directory / "dense.meta.json").read_text(encoding="utf-8"))
            ids = json.loads((directory / "dense.ids.json").read_text(encoding="utf-8"))
            raw = (directory / "dense.vectors.bin").read_bytes()
            matrix = np.frombuffer(raw, dtype="<f8").reshape(meta["count"], meta["dims"])
            return DenseIndex(ids=ids, matrix=matrix.astype(np.float64),
                              dims=meta["dims"], metric=meta.get("metric", "cosine"))
        raise CorruptIndex(f"unknown index type: {manifest['type']!r}")
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise CorruptIndex(str(exc)) from exc
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
